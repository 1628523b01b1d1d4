#pragma once

#include <cstdint>

namespace smartpur {

/// Speed of light in m/s, fixed exactly so quantization boundaries are deterministic.
inline constexpr double kSpeedOfLight = 299792458.0;

/// Serving-cell geometry and TA quantization parameters.
///
/// The permissible movement delta_d_per_m is the largest change in UE-BS
/// separation for which a previously held timing advance stays usable; the
/// default 702 m corresponds to a 4.7 us cyclic prefix at 15 kHz SCS.
struct CellConfig {
    double r_cell_m = 1500.0;
    double delta_d_per_m = 702.0;
    double tau_step_s = 0.52e-6; ///< TA quantization step (seconds)
    double scs_hz = 15000.0;     ///< informational only

    /// Distance covered by one TA step: 2 * c * tau_step (~311.78 m for defaults).
    double quant_dist_m() const { return 2.0 * kSpeedOfLight * tau_step_s; }

    /// Throws std::invalid_argument on r_cell <= 0, tau_step <= 0 or
    /// delta_d_per outside (0, r_cell).
    void validate() const;
};

/// One UE movement between two PUR transmission instants, with ground truth.
struct TransitionSample {
    double d_prev_m = 0.0;    ///< UE-BS distance at the previous instant
    double d_curr_m = 0.0;    ///< UE-BS distance now
    double velocity_kmh = 0.0;
    long tau_q_prev = 0;      ///< BS-provided TA for d_prev
    long tau_q_curr = 0;      ///< ground-truth TA at d_curr
    bool label_valid = true;  ///< |d_curr - d_prev| <= delta_d_per
};

/// Quantized TA for a UE at distance d_m: floor(d / (2 c tau_step)).
/// Negative d throws std::domain_error.
long quantize_ta(double d_m, const CellConfig& cfg);

/// Distance implied by a quantized TA: tau_q * 2 c tau_step.
/// Negative tau_q throws std::domain_error.
double dequantize_ta(long tau_q, const CellConfig& cfg);

/// True iff the movement keeps the previously held TA usable
/// (|d_curr - d_prev| <= delta_d_per, boundary inclusive).
bool label_validity(double d_prev_m, double d_curr_m, const CellConfig& cfg);

} // namespace smartpur
