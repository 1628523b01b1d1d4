#include "smartpur/config.hpp"

#include "smartpur/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>

namespace smartpur {

using nlohmann::json;

PathLossModel ChannelConfig::base_model() const {
    PathLossModel m = resolve(preset);
    if (k) m.k = *k;
    if (beta_db) m.beta_db = *beta_db;
    if (preset == PathLossPreset::Custom && !k) {
        throw ConfigError("channel.path_loss: Custom preset requires 'k'");
    }
    return m;
}

PathLossModel ChannelConfig::resolve(PathLossPreset p) const {
    PathLossModel m = PathLossModel::preset(p);
    if (shadow_sigma_db) m.shadow_sigma_db = *shadow_sigma_db;
    m.shadow_correlated = shadow_correlated;
    m.shadow_decorr_m = shadow_decorr_m;
    return m;
}

namespace {

// Strict object reader: every key consumed must be declared, leftovers fail.
class ObjectReader {
  public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError("config error at " + path_ + ": expected an object");
        }
    }

    ~ObjectReader() = default;

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (seen_.find(key) == seen_.end()) {
                throw ConfigError("config error at " + path_ + "." + key + ": unknown key");
            }
        }
    }

    bool has(const char* key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config error at " + path_ + "." + key + ": wrong type");
        }
    }

    void get_optional(const char* key, std::optional<double>& out) {
        seen_.insert(key);
        if (!j_.contains(key) || j_.at(key).is_null()) return;
        if (!j_.at(key).is_number()) {
            throw ConfigError("config error at " + path_ + "." + key + ": expected a number");
        }
        out = j_.at(key).get<double>();
    }

    const json* child(const char* key) {
        seen_.insert(key);
        if (!j_.contains(key)) return nullptr;
        return &j_.at(key);
    }

    std::string child_path(const char* key) const { return path_ + "." + key; }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

PathLossPreset parse_preset(const json& j, const std::string& path) {
    if (!j.is_string()) {
        throw ConfigError("config error at " + path + ": expected a preset name string");
    }
    try {
        return path_loss_preset_from_string(j.get<std::string>());
    } catch (const ConfigError& e) {
        throw ConfigError("config error at " + path + ": " + e.what());
    }
}

void parse_cell(const json& j, const std::string& path, CellConfig& cell) {
    ObjectReader r(j, path);
    r.get("r_cell_m", cell.r_cell_m);
    r.get("delta_d_per_m", cell.delta_d_per_m);
    r.get("tau_step_s", cell.tau_step_s);
    r.get("scs_hz", cell.scs_hz);
    r.finish();
    try {
        cell.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config error at " + path + ": " + e.what());
    }
}

void parse_channel(const json& j, const std::string& path, ChannelConfig& ch) {
    ObjectReader r(j, path);
    if (const json* pl = r.child("path_loss")) {
        ObjectReader rp(*pl, r.child_path("path_loss"));
        if (rp.has("preset")) {
            ch.preset = parse_preset(pl->at("preset"), r.child_path("path_loss") + ".preset");
        }
        rp.get_optional("k", ch.k);
        rp.get_optional("beta_db", ch.beta_db);
        rp.get_optional("shadow_sigma_db", ch.shadow_sigma_db);
        rp.get("shadow_correlated", ch.shadow_correlated);
        rp.get("shadow_decorr_m", ch.shadow_decorr_m);
        rp.finish();
    }
    if (const json* radio = r.child("radio")) {
        ObjectReader rr(*radio, r.child_path("radio"));
        rr.get("tx_power_dbm", ch.radio.tx_power_dbm);
        rr.get("carrier_hz", ch.radio.carrier_hz);
        rr.get("bandwidth_hz", ch.radio.bandwidth_hz);
        rr.get("noise_figure_db", ch.radio.noise_figure_db);
        rr.get("thermal_noise_dbm_hz", ch.radio.thermal_noise_dbm_hz);
        rr.finish();
    }
    if (const json* meas = r.child("measurement")) {
        ObjectReader rm(*meas, r.child_path("measurement"));
        rm.get("n_crs_subframes", ch.meas.n_crs_subframes);
        rm.get("subframe_spacing_ms", ch.meas.subframe_spacing_ms);
        rm.get("base_noise_sigma_db", ch.meas.base_noise_sigma_db);
        rm.get("doppler_coeff_db_per_kmh", ch.meas.doppler_coeff_db_per_kmh);
        rm.finish();
    }
    r.finish();
    try {
        ch.radio.validate();
        ch.meas.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config error at " + path + ": " + e.what());
    }
}

void parse_datagen(const json& j, const std::string& path, DatagenConfig& dg) {
    ObjectReader r(j, path);
    r.get("n_samples", dg.n_samples);
    r.get("n_test", dg.n_test);
    r.get("velocity_max_kmh", dg.velocity_max_kmh);
    r.get("history_len", dg.history_len);
    r.get("snap_to_lattice", dg.snap_to_lattice);
    r.finish();
    if (dg.history_len < 1) {
        throw ConfigError("config error at " + path + ".history_len: must be >= 1");
    }
    if (dg.velocity_max_kmh < 0) {
        throw ConfigError("config error at " + path + ".velocity_max_kmh: must be >= 0");
    }
}

void parse_train(const json& j, const std::string& path, TrainOptions& t) {
    ObjectReader r(j, path);
    r.get("fp_cost_ratio", t.fp_cost_ratio);
    r.get("adaboost_rounds", t.adaboost_rounds);
    r.get("l2boost_rounds", t.l2boost_rounds);
    r.get("l2boost_shrinkage", t.l2boost_shrinkage);
    r.get("svm_c", t.svm_c);
    r.get("svm_epochs", t.svm_epochs);
    r.finish();
    try {
        t.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config error at " + path + ": " + e.what());
    }
}

void parse_sweep(const json& j, const std::string& path, SweepConfig& sw) {
    ObjectReader r(j, path);
    r.get("radii_m", sw.radii_m);
    r.get("validators", sw.validators);
    r.get("predictors", sw.predictors);
    r.get("p_exceed_overrides", sw.p_exceed_overrides);
    if (const json* tm = r.child("train_models")) {
        if (!tm->is_array() || tm->empty()) {
            throw ConfigError("config error at " + path + ".train_models: expected a non-empty array");
        }
        sw.train_models.clear();
        for (std::size_t i = 0; i < tm->size(); ++i) {
            sw.train_models.push_back(
                parse_preset(tm->at(i), path + ".train_models[" + std::to_string(i) + "]"));
        }
    }
    if (r.has("test_model")) {
        sw.test_model = parse_preset(j.at("test_model"), path + ".test_model");
    }
    r.finish();
    static const std::set<std::string> kValidators = {"legacy", "enhanced", "svm", "adaboost"};
    for (const auto& v : sw.validators) {
        if (kValidators.find(v) == kValidators.end()) {
            throw ConfigError("config error at " + path + ".validators: unknown validator '" + v +
                              "'");
        }
    }
    static const std::set<std::string> kPredictors = {"equation", "l2boost"};
    for (const auto& p : sw.predictors) {
        if (kPredictors.find(p) == kPredictors.end()) {
            throw ConfigError("config error at " + path + ".predictors: unknown predictor '" + p +
                              "'");
        }
    }
    for (double p : sw.p_exceed_overrides) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("config error at " + path + ".p_exceed_overrides: must be in [0,1]");
        }
    }
    for (double rr : sw.radii_m) {
        if (!(rr > 0.0)) {
            throw ConfigError("config error at " + path + ".radii_m: radii must be > 0");
        }
    }
}

void parse_output(const json& j, const std::string& path, OutputConfig& o) {
    ObjectReader r(j, path);
    r.get("dir", o.dir);
    r.get("json", o.json);
    r.get("csv", o.csv);
    r.finish();
}

void parse_stav(const json& j, const std::string& path, StavConfig& s) {
    ObjectReader r(j, path);
    r.get_optional("eps_pos_db", s.eps_pos_db);
    r.get_optional("eps_neg_db", s.eps_neg_db);
    r.finish();
}

void parse_models(const json& j, const std::string& path,
                  std::map<std::string, std::string>& models) {
    ObjectReader r(j, path);
    for (const char* key : {"adaboost", "svm", "l2boost"}) {
        std::string v;
        r.get(key, v);
        if (!v.empty()) models[key] = v;
    }
    r.finish();
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    ObjectReader r(j, "$");
    r.get("seed", cfg.seed);
    r.get("mode", cfg.mode);
    if (cfg.mode != "campaign" && cfg.mode != "table3-check") {
        throw ConfigError("config error at $.mode: expected campaign|table3-check");
    }
    if (const json* c = r.child("cell")) parse_cell(*c, "$.cell", cfg.cell);
    if (const json* c = r.child("channel")) parse_channel(*c, "$.channel", cfg.channel);
    if (const json* c = r.child("datagen")) parse_datagen(*c, "$.datagen", cfg.datagen);
    if (const json* c = r.child("train")) parse_train(*c, "$.train", cfg.train);
    if (const json* c = r.child("sweep")) parse_sweep(*c, "$.sweep", cfg.sweep);
    if (const json* c = r.child("output")) parse_output(*c, "$.output", cfg.output);
    if (const json* c = r.child("stav")) parse_stav(*c, "$.stav", cfg.stav);
    if (const json* c = r.child("models")) parse_models(*c, "$.models", cfg.models);
    r.finish();

    // radii must keep the permissible movement inside the cell
    for (double rr : cfg.sweep.radii_m) {
        if (!(cfg.cell.delta_d_per_m < rr)) {
            throw ConfigError("config error at $.sweep.radii_m: radius " + std::to_string(rr) +
                              " must exceed delta_d_per");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["mode"] = cfg.mode;
    j["cell"] = {{"r_cell_m", cfg.cell.r_cell_m},
                 {"delta_d_per_m", cfg.cell.delta_d_per_m},
                 {"tau_step_s", cfg.cell.tau_step_s},
                 {"scs_hz", cfg.cell.scs_hz}};
    json pl;
    pl["preset"] = to_string(cfg.channel.preset);
    if (cfg.channel.k) pl["k"] = *cfg.channel.k;
    if (cfg.channel.beta_db) pl["beta_db"] = *cfg.channel.beta_db;
    if (cfg.channel.shadow_sigma_db) pl["shadow_sigma_db"] = *cfg.channel.shadow_sigma_db;
    pl["shadow_correlated"] = cfg.channel.shadow_correlated;
    pl["shadow_decorr_m"] = cfg.channel.shadow_decorr_m;
    j["channel"] = {{"path_loss", pl},
                    {"radio",
                     {{"tx_power_dbm", cfg.channel.radio.tx_power_dbm},
                      {"carrier_hz", cfg.channel.radio.carrier_hz},
                      {"bandwidth_hz", cfg.channel.radio.bandwidth_hz},
                      {"noise_figure_db", cfg.channel.radio.noise_figure_db},
                      {"thermal_noise_dbm_hz", cfg.channel.radio.thermal_noise_dbm_hz}}},
                    {"measurement",
                     {{"n_crs_subframes", cfg.channel.meas.n_crs_subframes},
                      {"subframe_spacing_ms", cfg.channel.meas.subframe_spacing_ms},
                      {"base_noise_sigma_db", cfg.channel.meas.base_noise_sigma_db},
                      {"doppler_coeff_db_per_kmh", cfg.channel.meas.doppler_coeff_db_per_kmh}}}};
    j["datagen"] = {{"n_samples", cfg.datagen.n_samples},
                    {"n_test", cfg.datagen.n_test},
                    {"velocity_max_kmh", cfg.datagen.velocity_max_kmh},
                    {"history_len", cfg.datagen.history_len},
                    {"snap_to_lattice", cfg.datagen.snap_to_lattice}};
    j["train"] = {{"fp_cost_ratio", cfg.train.fp_cost_ratio},
                  {"adaboost_rounds", cfg.train.adaboost_rounds},
                  {"l2boost_rounds", cfg.train.l2boost_rounds},
                  {"l2boost_shrinkage", cfg.train.l2boost_shrinkage},
                  {"svm_c", cfg.train.svm_c},
                  {"svm_epochs", cfg.train.svm_epochs}};
    json tms = json::array();
    for (auto m : cfg.sweep.train_models) tms.push_back(to_string(m));
    j["sweep"] = {{"radii_m", cfg.sweep.radii_m},
                  {"validators", cfg.sweep.validators},
                  {"predictors", cfg.sweep.predictors},
                  {"p_exceed_overrides", cfg.sweep.p_exceed_overrides},
                  {"train_models", tms},
                  {"test_model", to_string(cfg.sweep.test_model)}};
    j["output"] = {{"dir", cfg.output.dir}, {"json", cfg.output.json}, {"csv", cfg.output.csv}};
    json stav = json::object();
    if (cfg.stav.eps_pos_db) stav["eps_pos_db"] = *cfg.stav.eps_pos_db;
    if (cfg.stav.eps_neg_db) stav["eps_neg_db"] = *cfg.stav.eps_neg_db;
    j["stav"] = stav;
    if (!cfg.models.empty()) {
        j["models"] = cfg.models;
    }
    return j;
}

DatasetSpec dataset_spec_from_config(const ExperimentConfig& cfg, std::size_t n_samples,
                                     std::uint64_t seed) {
    DatasetSpec spec;
    spec.n_samples = n_samples;
    spec.cell = cfg.cell;
    spec.pl = cfg.channel.base_model();
    spec.radio = cfg.channel.radio;
    spec.meas = cfg.channel.meas;
    spec.velocity_max_kmh = cfg.datagen.velocity_max_kmh;
    spec.seed = seed;
    spec.history_len = cfg.datagen.history_len;
    spec.snap_to_lattice = cfg.datagen.snap_to_lattice;
    return spec;
}

} // namespace smartpur
