#include "smartpur/stap.hpp"

#include "smartpur/channel.hpp"
#include "smartpur/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smartpur {

PredictedTa predict_equation(const PredictorInput& input, double k, const CellConfig& cfg) {
    if (input.tau_q_prev < 0) {
        throw std::domain_error("predict_equation: tau_q_prev must be >= 0");
    }
    if (!(k > 0.0)) {
        throw std::domain_error("predict_equation: k must be > 0");
    }
    PredictedTa out;
    double d_prev = dequantize_ta(input.tau_q_prev, cfg);
    if (d_prev <= 0.0) {
        // a zero TA carries no usable distance; floor to the clamp distance
        d_prev = kMinDistanceM;
        out.low_confidence = true;
    }
    const double ratio = std::pow(10.0, input.delta_p_db / (10.0 * k));
    out.d_hat_m = std::clamp(ratio * d_prev, 0.0, cfg.r_cell_m);
    out.tau_q_hat = quantize_ta(out.d_hat_m, cfg);
    return out;
}

std::vector<double> predictor_features(const PredictorInput& input) {
    if (input.history.empty()) {
        throw std::invalid_argument("predictor_features: history must hold >= 1 entry");
    }
    const double scale = input.k_train / input.k_system;
    const std::size_t hist = input.history.size();
    const double rsrp_curr = input.history.back().second - input.delta_p_db;

    // pairs (tau_{i-k}, rsrp_{i-k+1}) for k = 1..K; history is oldest-first
    std::vector<double> x;
    x.reserve(2 * hist);
    for (std::size_t k = 1; k <= hist; ++k) {
        const auto& entry = input.history[hist - k];
        x.push_back(static_cast<double>(entry.first));
        const double rsrp = k == 1 ? rsrp_curr : input.history[hist - k + 1].second;
        x.push_back(rsrp * scale);
    }
    return x;
}

PredictedTa predict_ml(const PredictorInput& input, const StumpEnsemble& model,
                       const CellConfig& cfg) {
    const std::vector<double> x = predictor_features(input);
    PredictedTa out;
    out.d_hat_m = std::clamp(model.evaluate(x), 0.0, cfg.r_cell_m);
    out.tau_q_hat = quantize_ta(out.d_hat_m, cfg);
    return out;
}

double prediction_accuracy(std::span<const std::pair<double, double>> d_hat_and_true,
                           const CellConfig& cfg) {
    if (d_hat_and_true.empty()) {
        throw DataError("prediction_accuracy: empty observation list");
    }
    // modified sign with sgn(0) = +1, so the boundary counts as accurate
    double sum = 0.0;
    for (const auto& [d_hat, d_true] : d_hat_and_true) {
        const double err = std::abs(d_true - d_hat);
        const double sgn = (cfg.delta_d_per_m - err) >= 0.0 ? 1.0 : -1.0;
        sum += 1.0 + sgn;
    }
    return sum / (2.0 * static_cast<double>(d_hat_and_true.size()));
}

PurTraceState::PurTraceState(long initial_tau_q, double initial_rsrp_dbm,
                             std::size_t history_len)
    : held_tau_q_(initial_tau_q), history_len_(std::max<std::size_t>(history_len, 1)) {
    if (initial_tau_q < 0) {
        throw std::domain_error("PurTraceState: initial TA must be >= 0");
    }
    history_.emplace_back(initial_tau_q, initial_rsrp_dbm);
}

void PurTraceState::record_success(long bs_tau_q, double rsrp_dbm) {
    if (bs_tau_q < 0) {
        throw std::domain_error("PurTraceState: BS-provided TA must be >= 0");
    }
    held_tau_q_ = bs_tau_q;
    history_.emplace_back(bs_tau_q, rsrp_dbm);
    while (history_.size() > history_len_) {
        history_.pop_front();
    }
}

void PurTraceState::record_failure() {
    ++reactive_fallbacks_;
}

std::vector<std::pair<long, double>> PurTraceState::history() const {
    return {history_.begin(), history_.end()};
}

} // namespace smartpur
