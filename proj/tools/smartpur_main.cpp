#include "smartpur/config.hpp"
#include "smartpur/datagen.hpp"
#include "smartpur/errors.hpp"
#include "smartpur/experiment.hpp"
#include "smartpur/log.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace smartpur;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
};

ExperimentConfig load_with_overrides(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args.config_path);
    if (args.seed_set) cfg.seed = args.seed;
    return cfg;
}

int cmd_gen_dataset(const CommonArgs& args, const std::string& out_path, long n_override) {
    ExperimentConfig cfg = load_with_overrides(args);
    std::size_t n = cfg.datagen.n_samples;
    if (n_override >= 0) n = static_cast<std::size_t>(n_override);
    DatasetSpec spec = dataset_spec_from_config(cfg, n, cfg.seed);
    const auto rows = generate_dataset(spec, args.jobs);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write dataset to '" + out_path + "'");
    write_dataset_csv(out, rows, spec.history_len);

    std::size_t valid = 0;
    for (const auto& r : rows) {
        if (r.sample.label_valid) ++valid;
    }
    std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
    if (!rows.empty()) {
        std::printf("label balance: %zu valid (%.4f), %zu invalid (%.4f)\n", valid,
                    static_cast<double>(valid) / rows.size(), rows.size() - valid,
                    static_cast<double>(rows.size() - valid) / rows.size());
    }
    return kExitOk;
}

int cmd_train(const CommonArgs& args, const std::string& dataset_path,
              const std::string& model_out, const std::string& validator,
              const std::string& predictor, long history_len) {
    if (validator.empty() == predictor.empty()) {
        throw ConfigError("train: give exactly one of --validator {svm,adaboost} or "
                          "--predictor l2boost");
    }
    ExperimentConfig cfg = load_with_overrides(args);
    if (history_len > 0) cfg.datagen.history_len = static_cast<std::size_t>(history_len);

    std::ifstream in(dataset_path);
    if (!in) throw DataError("cannot open dataset '" + dataset_path + "'");
    const auto rows = read_dataset_csv(in);
    if (rows.empty()) throw DataError("dataset '" + dataset_path + "' has no rows");

    cfg.train.seed = cfg.seed;
    const PathLossModel base = cfg.channel.base_model();
    json model_json;
    if (validator == "adaboost") {
        AdaBoostDiagnostics diag;
        const auto X = validator_matrix(rows, 1.0, 1.0, cfg.cell);
        const auto y = validator_labels(rows);
        const StumpEnsemble model = train_adaboost(X, y, cfg.train, &diag);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (decide(model.evaluate(X.row(i))) == y[i]) ++correct;
        }
        std::printf("adaboost: %zu rounds, last weighted error %.6f, training accuracy %.2f%%\n",
                    diag.round_errors.size(),
                    diag.round_errors.empty() ? 0.0 : diag.round_errors.back(),
                    100.0 * static_cast<double>(correct) / rows.size());
        model_json = ensemble_to_json(model, "adaboost_stumps");
    } else if (validator == "svm") {
        SvmDiagnostics diag;
        const auto X = validator_matrix(rows, 1.0, 1.0, cfg.cell);
        const auto y = validator_labels(rows);
        const LinearSvmModel model = train_linear_svm(X, y, cfg.train, &diag);
        std::printf("svm: %zu epochs, final objective %.9f\n", diag.epoch_objective.size(),
                    diag.epoch_objective.empty() ? 0.0 : diag.epoch_objective.back());
        model_json = svm_to_json(model);
    } else if (predictor == "l2boost") {
        L2BoostDiagnostics diag;
        const auto X = predictor_matrix(rows, 1.0, 1.0);
        const auto t = predictor_targets(rows);
        const StumpEnsemble model = train_l2boost(X, t, cfg.train, &diag);
        bool monotone = true;
        for (std::size_t i = 1; i < diag.round_mse.size(); ++i) {
            if (diag.round_mse[i] > diag.round_mse[i - 1] + 1e-12) monotone = false;
        }
        std::printf("l2boost: %zu rounds, mse %.6g -> %.6g, monotone non-increasing: %s\n",
                    diag.round_mse.empty() ? 0 : diag.round_mse.size() - 1,
                    diag.round_mse.empty() ? 0.0 : diag.round_mse.front(),
                    diag.round_mse.empty() ? 0.0 : diag.round_mse.back(),
                    monotone ? "yes" : "NO");
        model_json = ensemble_to_json(model, "l2boost_stumps");
    } else {
        throw ConfigError("train: unknown model '" + validator + predictor + "'");
    }

    model_json["metadata"] = {{"k_train", base.k},
                              {"train_model", to_string(base.name)},
                              {"history_len", cfg.datagen.history_len},
                              {"n_rows", rows.size()},
                              {"seed", cfg.seed}};
    std::ofstream out(model_out, std::ios::binary);
    if (!out) throw DataError("cannot write model to '" + model_out + "'");
    out << model_json.dump(2) << "\n";
    std::printf("wrote model to %s\n", model_out.c_str());
    return kExitOk;
}

int run_table3(bool quiet = false) {
    const auto rows = run_table3_check();
    bool all_ok = true;
    if (!quiet) {
        std::printf("%-10s %-8s %-10s %-12s %-14s %-12s %s\n", "r_cell_km", "rate_q", "p_exceed",
                    "p_f_stav", "reconstructed", "p_f_stap", "status");
    }
    for (const auto& r : rows) {
        all_ok = all_ok && r.ok();
        if (!quiet) {
            std::printf("%-10.1f %-8.2f %-10.2f %-12.2f %-14.4f %-12.3f %s\n", r.r_cell_km,
                        r.rate_q, r.p_exceed, r.p_f_stav, r.reconstructed, r.p_f_stap,
                        r.ok() ? "PASS" : "FAIL");
        }
    }
    std::printf("table3-check: %s\n", all_ok ? "all rows PASS" : "FAIL");
    return all_ok ? kExitOk : kExitData;
}

void print_report_summary(const MetricsReport& report) {
    for (const auto& c : report.cells) {
        std::printf("r_cell %.0f m (test %s): p_exceed %.4f\n", c.r_cell_m, c.test_model.c_str(),
                    c.p_exceed_measured);
        for (const auto& v : c.validators) {
            std::printf("  validator %-9s p_TN %.4f  p_TP %.4f  p_f(closed) %.4f  p_f(mc) %.4f\n",
                        v.name.c_str(), v.p_tn, v.p_tp, v.closed_form.p_f_total,
                        v.mc.p_f_total());
        }
        for (const auto& p : c.predictors) {
            std::printf("  predictor %-9s eta  %.4f  (raw %.4f)  p_f(closed) %.4f  p_f(mc) %.4f\n",
                        p.name.c_str(), p.eta, p.eta_raw, p.closed_form.p_f_total,
                        p.mc.p_f_total());
        }
    }
}

int cmd_evaluate(const CommonArgs& args, const std::string& out_dir,
                 const std::vector<std::string>& validators,
                 const std::vector<std::string>& predictors, long history_len,
                 const std::vector<double>& radii, const std::vector<double>& p_exceed) {
    ExperimentConfig cfg = load_with_overrides(args);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (!validators.empty()) cfg.sweep.validators = validators;
    if (!predictors.empty()) cfg.sweep.predictors = predictors;
    if (history_len > 0) cfg.datagen.history_len = static_cast<std::size_t>(history_len);
    if (!radii.empty()) cfg.sweep.radii_m = radii;
    if (!p_exceed.empty()) cfg.sweep.p_exceed_overrides = p_exceed;

    if (cfg.mode == "table3-check") {
        return run_table3();
    }
    cfg.train.seed = cfg.seed;
    const MetricsReport report = run_experiment(cfg, args.jobs);
    print_report_summary(report);
    for (const auto& path : write_reports(report, cfg)) {
        std::printf("wrote %s\n", path.c_str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SmartPUR: timing-advance validation and prediction simulator"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string out_path;
    std::string out_dir;
    std::string dataset_path;
    std::string model_out;
    std::string train_validator;
    std::string train_predictor;
    long history_len = -1;
    long n_override = -1;
    std::vector<std::string> validators;
    std::vector<std::string> predictors;
    std::vector<double> radii;
    std::vector<double> p_exceed;

    auto add_common = [&](CLI::App* sub, bool config_required = true) {
        auto* opt = sub->add_option("--config", common.config_path, "experiment config JSON");
        if (config_required) opt->required();
        sub->add_option("--seed", common.seed, "override the config seed")
            ->each([&](const std::string&) { common.seed_set = true; });
        sub->add_option("--jobs", common.jobs, "parallel worker count")->check(CLI::PositiveNumber);
    };

    auto* gen = app.add_subcommand("gen-dataset", "generate a labeled dataset CSV");
    add_common(gen);
    gen->add_option("--out", out_path, "output CSV path")->required();
    gen->add_option("--n", n_override, "override datagen.n_samples");

    auto* train = app.add_subcommand("train", "train a validator or predictor model");
    add_common(train);
    train->add_option("--dataset", dataset_path, "dataset CSV from gen-dataset")->required();
    train->add_option("--model-out", model_out, "output model JSON path")->required();
    train->add_option("--validator", train_validator, "svm|adaboost")
        ->check(CLI::IsMember({"svm", "adaboost"}));
    train->add_option("--predictor", train_predictor, "l2boost")
        ->check(CLI::IsMember({"l2boost"}));
    train->add_option("--history-len", history_len, "history length K");

    auto* evaluate = app.add_subcommand("evaluate", "run the configured evaluation campaign");
    add_common(evaluate);
    evaluate->add_option("--out-dir", out_dir, "report output directory");
    evaluate->add_option("--validator", validators, "validators to run (repeatable)");
    evaluate->add_option("--predictor", predictors, "predictors to run (repeatable)");
    evaluate->add_option("--history-len", history_len, "history length K");

    auto* sweep = app.add_subcommand("sweep", "radius sweep with fallback-rate table");
    add_common(sweep);
    sweep->add_option("--out-dir", out_dir, "report output directory");
    sweep->add_option("--radii", radii, "cell radii in meters (repeatable)");
    sweep->add_option("--p-exceed", p_exceed, "p_exceed overrides (repeatable)");
    sweep->add_option("--validator", validators, "validators to run (repeatable)");
    sweep->add_option("--predictor", predictors, "predictors to run (repeatable)");
    sweep->add_option("--history-len", history_len, "history length K");

    auto* table3 = app.add_subcommand("table3-check", "published fallback-table consistency check");
    add_common(table3, /*config_required=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_dataset(common, out_path, n_override);
        }
        if (train->parsed()) {
            return cmd_train(common, dataset_path, model_out, train_validator, train_predictor,
                             history_len);
        }
        if (evaluate->parsed() || sweep->parsed()) {
            return cmd_evaluate(common, out_dir, validators, predictors, history_len, radii,
                                p_exceed);
        }
        if (table3->parsed()) {
            return run_table3();
        }
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
