#include "smartpur/channel.hpp"

#include "smartpur/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace smartpur {

PathLossModel PathLossModel::umi() {
    return {PathLossPreset::UMi, 3.6, 21.4, 7.8, false, 50.0};
}

PathLossModel PathLossModel::uma() {
    return {PathLossPreset::UMa, 3.9, 12.6, 6.0, false, 50.0};
}

PathLossModel PathLossModel::rma() {
    return {PathLossPreset::RMa, 3.0, 15.0, 8.0, false, 50.0};
}

PathLossModel PathLossModel::custom(double k, double beta_db, double shadow_sigma_db) {
    return {PathLossPreset::Custom, k, beta_db, shadow_sigma_db, false, 50.0};
}

PathLossModel PathLossModel::preset(PathLossPreset p) {
    switch (p) {
    case PathLossPreset::UMi: return umi();
    case PathLossPreset::UMa: return uma();
    case PathLossPreset::RMa: return rma();
    case PathLossPreset::Custom: break;
    }
    return {};
}

std::string to_string(PathLossPreset p) {
    switch (p) {
    case PathLossPreset::UMi: return "UMi";
    case PathLossPreset::UMa: return "UMa";
    case PathLossPreset::RMa: return "RMa";
    case PathLossPreset::Custom: return "Custom";
    }
    return "Custom";
}

PathLossPreset path_loss_preset_from_string(const std::string& s) {
    if (s == "UMi") return PathLossPreset::UMi;
    if (s == "UMa") return PathLossPreset::UMa;
    if (s == "RMa") return PathLossPreset::RMa;
    if (s == "Custom") return PathLossPreset::Custom;
    throw ConfigError("unknown path-loss preset '" + s + "' (expected UMi|UMa|RMa|Custom)");
}

void RadioConfig::validate() const {
    if (!(bandwidth_hz > 0.0)) {
        throw std::invalid_argument("RadioConfig: bandwidth_hz must be > 0");
    }
}

void MeasurementConfig::validate() const {
    if (n_crs_subframes < 1) {
        throw std::invalid_argument("MeasurementConfig: n_crs_subframes must be >= 1");
    }
    if (base_noise_sigma_db < 0.0 || doppler_coeff_db_per_kmh < 0.0) {
        throw std::invalid_argument("MeasurementConfig: noise sigmas must be >= 0");
    }
}

double mean_rsrp_dbm(double d_m, const PathLossModel& pl, const RadioConfig& radio) {
    if (!(pl.k > 0.0)) {
        throw std::domain_error("mean_rsrp_dbm: path-loss exponent must be > 0");
    }
    const double d = std::max(d_m, kMinDistanceM);
    return radio.tx_power_dbm - pl.beta_db - 10.0 * pl.k * std::log10(d);
}

namespace {

double subframe_error_sigma(double velocity_kmh, const MeasurementConfig& meas) {
    return meas.base_noise_sigma_db + meas.doppler_coeff_db_per_kmh * velocity_kmh;
}

// Mean of n per-subframe error draws; std-dev shrinks as 1/sqrt(n).
double combined_measurement_error(std::mt19937_64& rng, double velocity_kmh,
                                  const MeasurementConfig& meas) {
    const double sigma = subframe_error_sigma(velocity_kmh, meas);
    if (sigma == 0.0) return 0.0;
    std::normal_distribution<double> err(0.0, sigma);
    double sum = 0.0;
    for (int i = 0; i < meas.n_crs_subframes; ++i) {
        sum += err(rng);
    }
    return sum / static_cast<double>(meas.n_crs_subframes);
}

double shadow_draw(std::mt19937_64& rng, const PathLossModel& pl) {
    if (pl.shadow_sigma_db == 0.0) return 0.0;
    std::normal_distribution<double> sh(0.0, pl.shadow_sigma_db);
    return sh(rng);
}

} // namespace

double measure_rsrp_with(std::mt19937_64& rng, double d_m, double velocity_kmh,
                         const PathLossModel& pl, const RadioConfig& radio,
                         const MeasurementConfig& meas) {
    meas.validate();
    const double mean = mean_rsrp_dbm(d_m, pl, radio);
    return mean + shadow_draw(rng, pl) + combined_measurement_error(rng, velocity_kmh, meas);
}

double measure_rsrp(double d_m, double velocity_kmh, const PathLossModel& pl,
                    const RadioConfig& radio, const MeasurementConfig& meas,
                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return measure_rsrp_with(rng, d_m, velocity_kmh, pl, radio, meas);
}

std::vector<double> measure_rsrp_chain(std::mt19937_64& rng, std::span<const double> distances_m,
                                       double velocity_kmh, const PathLossModel& pl,
                                       const RadioConfig& radio, const MeasurementConfig& meas) {
    meas.validate();
    std::vector<double> out;
    out.reserve(distances_m.size());
    double prev_shadow = 0.0;
    bool have_prev = false;
    double prev_d = 0.0;
    for (double d : distances_m) {
        double shadow = shadow_draw(rng, pl);
        if (pl.shadow_correlated && have_prev && pl.shadow_sigma_db > 0.0) {
            const double rho = std::exp(-std::abs(d - prev_d) / pl.shadow_decorr_m);
            shadow = rho * prev_shadow + std::sqrt(1.0 - rho * rho) * shadow;
        }
        out.push_back(mean_rsrp_dbm(d, pl, radio) + shadow +
                      combined_measurement_error(rng, velocity_kmh, meas));
        prev_shadow = shadow;
        prev_d = d;
        have_prev = true;
    }
    return out;
}

RsrpObservation delta_rsrp(double rsrp_prev_dbm, double rsrp_curr_dbm, double k_system) {
    if (!std::isfinite(rsrp_prev_dbm) || !std::isfinite(rsrp_curr_dbm)) {
        throw std::domain_error("delta_rsrp: inputs must be finite");
    }
    RsrpObservation obs;
    obs.rsrp_prev_dbm = rsrp_prev_dbm;
    obs.rsrp_curr_dbm = rsrp_curr_dbm;
    obs.delta_p_db = rsrp_prev_dbm - rsrp_curr_dbm;
    obs.k_system = k_system;
    return obs;
}

double scale_delta_rsrp(double delta_p_db, double k_train, double k_system) {
    if (!(k_train > 0.0) || !(k_system > 0.0)) {
        throw std::domain_error("scale_delta_rsrp: exponents must be > 0");
    }
    return delta_p_db * k_train / k_system;
}

} // namespace smartpur
