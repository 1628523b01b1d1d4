#pragma once

#include "smartpur/geometry.hpp"
#include "smartpur/learners.hpp"

#include <cstddef>
#include <deque>
#include <span>
#include <utility>
#include <vector>

namespace smartpur {

/// Inputs available to a TA predictor at one PUR instant: the BS-provided
/// previous TA, the measured RSRP difference, and the trailing history of
/// (tau_q, rsrp) pairs (history.back() is the previous instant, so
/// history.back().first == tau_q_prev). The current absolute RSRP is
/// recoverable as history.back().second - delta_p_db.
struct PredictorInput {
    long tau_q_prev = 0;
    double delta_p_db = 0.0;
    std::vector<std::pair<long, double>> history;
    double k_train = 1.0;
    double k_system = 1.0;
};

/// A predicted TA: the quantized value used on air plus the pre-quantization
/// distance estimate. low_confidence marks predictions made from a zero
/// previous TA, where the implied distance floors to the clamp distance.
struct PredictedTa {
    long tau_q_hat = 0;
    double d_hat_m = 0.0;
    bool low_confidence = false;
};

/// Closed-form predictor: d_hat = 10^(delta_p / (10 k)) * dequantize(tau_q_prev),
/// clamped to [0, r_cell], then quantized. k is the (BS-signaled) path-loss
/// exponent of the operating environment.
PredictedTa predict_equation(const PredictorInput& input, double k, const CellConfig& cfg);

/// Regression feature layout shared by training and inference: pairs
/// (tau_q_{i-k}, rsrp_{i-k+1}) for k = 1..K with the RSRP features scaled by
/// k_train / k_system.
std::vector<double> predictor_features(const PredictorInput& input);

/// ML predictor: boosted-stump regression of the current distance, clamped to
/// [0, r_cell] and quantized. Feature-length mismatch throws.
PredictedTa predict_ml(const PredictorInput& input, const StumpEnsemble& model,
                       const CellConfig& cfg);

/// Fraction of predictions whose implied distance error stays within the
/// permissible movement:
///   eta = (1 / 2N) * sum_i (1 + sgn(delta_d_per - |d_true - d_hat|)),
/// with sgn(0) = +1 (the boundary counts as accurate). Empty input throws.
double prediction_accuracy(std::span<const std::pair<double, double>> d_hat_and_true,
                           const CellConfig& cfg);

/// Per-UE TA bookkeeping across a PUR trace. After every successful PUR the
/// BS-provided TA replaces any predicted value, so prediction errors never
/// carry over; a failed PUR leaves the history untouched and counts a
/// reactive fallback.
class PurTraceState {
  public:
    PurTraceState(long initial_tau_q, double initial_rsrp_dbm, std::size_t history_len);

    void record_success(long bs_tau_q, double rsrp_dbm);
    void record_failure();

    long held_tau_q() const { return held_tau_q_; }
    std::size_t reactive_fallbacks() const { return reactive_fallbacks_; }
    /// Oldest-first history, sized min(observed, history_len).
    std::vector<std::pair<long, double>> history() const;

  private:
    long held_tau_q_;
    std::size_t history_len_;
    std::deque<std::pair<long, double>> history_;
    std::size_t reactive_fallbacks_ = 0;
};

} // namespace smartpur
