#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace smartpur {

/// Distances below this floor are clamped before any log-distance evaluation.
inline constexpr double kMinDistanceM = 10.0;

enum class PathLossPreset { UMi, UMa, RMa, Custom };

/// Log-distance path-loss abstraction: loss_dB(d) = beta_db + 10 k log10(d).
///
/// The presets reduce the TR 38.901 UMi/UMa/RMa NLOS curves at 0.9 GHz to a
/// single exponent and offset; only the exponent enters any decision formula,
/// the offset just positions the absolute RSRP level.
struct PathLossModel {
    PathLossPreset name = PathLossPreset::Custom;
    double k = 2.0;               ///< path-loss exponent; slope is 10*k dB per decade
    double beta_db = 0.0;         ///< system-loss offset at 1 m
    double shadow_sigma_db = 0.0; ///< lognormal shadowing std-dev

    // Optional exponential spatial correlation of shadowing between successive
    // locations; independent draws (the harder case for validation) by default.
    bool shadow_correlated = false;
    double shadow_decorr_m = 50.0;

    static PathLossModel umi();
    static PathLossModel uma();
    static PathLossModel rma();
    static PathLossModel custom(double k, double beta_db, double shadow_sigma_db);
    static PathLossModel preset(PathLossPreset p);
};

std::string to_string(PathLossPreset p);
PathLossPreset path_loss_preset_from_string(const std::string& s);

/// Fixed radio-level settings. Only tx_power_dbm enters the RSRP mean; the
/// rest are carried through configs and reports for provenance.
struct RadioConfig {
    double tx_power_dbm = 46.0;
    double carrier_hz = 0.9e9;
    double bandwidth_hz = 1.4e6;
    double noise_figure_db = 9.0;
    double thermal_noise_dbm_hz = -174.0;

    void validate() const;
};

/// RSRP measurement abstraction: the per-subframe measurement error has
/// std-dev base_noise_sigma_db + doppler_coeff_db_per_kmh * velocity, and
/// combining n_crs_subframes subframes divides the std-dev by sqrt(n).
struct MeasurementConfig {
    int n_crs_subframes = 4;
    double subframe_spacing_ms = 10.0;
    double base_noise_sigma_db = 1.0;
    double doppler_coeff_db_per_kmh = 0.01;

    void validate() const;
};

/// A pair of RSRP measurements bracketing one UE movement.
/// delta_p_db = rsrp_prev_dbm - rsrp_curr_dbm: positive when the path loss
/// increased, i.e. the UE moved away from the BS.
struct RsrpObservation {
    double rsrp_prev_dbm = 0.0;
    double rsrp_curr_dbm = 0.0;
    double delta_p_db = 0.0;
    double k_system = 0.0; ///< exponent of the environment that generated the pair
};

/// Noise-free RSRP at distance d: tx_power - beta - 10 k log10(d), with d
/// clamped to kMinDistanceM. Strictly decreasing in d above the clamp floor.
double mean_rsrp_dbm(double d_m, const PathLossModel& pl, const RadioConfig& radio);

/// One measured RSRP value: mean + shadowing draw + combined subframe error.
/// Deterministic given the seed.
double measure_rsrp(double d_m, double velocity_kmh, const PathLossModel& pl,
                    const RadioConfig& radio, const MeasurementConfig& meas,
                    std::uint64_t seed);

/// rng-driven form used when several draws must share one stream.
double measure_rsrp_with(std::mt19937_64& rng, double d_m, double velocity_kmh,
                         const PathLossModel& pl, const RadioConfig& radio,
                         const MeasurementConfig& meas);

/// Measures RSRP at each distance of a UE trajectory in order. When
/// pl.shadow_correlated is set, successive shadowing draws are coupled with
/// correlation exp(-|d_j - d_{j-1}| / shadow_decorr_m).
std::vector<double> measure_rsrp_chain(std::mt19937_64& rng, std::span<const double> distances_m,
                                       double velocity_kmh, const PathLossModel& pl,
                                       const RadioConfig& radio, const MeasurementConfig& meas);

/// Difference observation from two measurements (prev minus curr).
RsrpObservation delta_rsrp(double rsrp_prev_dbm, double rsrp_curr_dbm, double k_system = 0.0);

/// Environment rescaling of an RSRP difference for a model trained under
/// k_train and deployed under k_system: delta * k_train / k_system.
/// Non-positive exponents throw std::domain_error.
double scale_delta_rsrp(double delta_p_db, double k_train, double k_system);

/// Per-trial seed derivation: master seed XOR trial index, fed to the PRNG
/// constructor. Keeps trials independent and reproducible under any schedule.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return master ^ index;
}

} // namespace smartpur
