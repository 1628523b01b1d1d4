#include "smartpur/stav.hpp"

#include "smartpur/errors.hpp"
#include "smartpur/log.hpp"

#include <cmath>
#include <stdexcept>

namespace smartpur {

std::string to_string(ThresholdMode m) {
    return m == ThresholdMode::Legacy ? "legacy" : "enhanced";
}

ThresholdMode threshold_mode_from_string(const std::string& s) {
    if (s == "legacy") return ThresholdMode::Legacy;
    if (s == "enhanced") return ThresholdMode::Enhanced;
    throw ConfigError("unknown threshold mode '" + s + "' (expected legacy|enhanced)");
}

MarginBounds margin_bounds(ThresholdMode mode, double k, const CellConfig& cfg) {
    cfg.validate();
    if (!(k > 0.0)) {
        throw std::domain_error("margin_bounds: k must be > 0");
    }
    const double slope = 10.0 * k;
    const double ratio_cell = cfg.delta_d_per_m / cfg.r_cell_m; // in (0,1) by CellConfig
    MarginBounds b;
    if (mode == ThresholdMode::Legacy) {
        b.eps_pos_max_db = slope * std::log10(1.0 + ratio_cell);
        b.eps_neg_max_db = -slope * std::log10(1.0 - ratio_cell);
    } else {
        b.eps_pos_max_db = -slope * std::log10(1.0 - ratio_cell);
        const double inner = cfg.r_cell_m - cfg.delta_d_per_m;
        if (!(inner > cfg.delta_d_per_m)) {
            throw std::domain_error(
                "margin_bounds: enhanced negative margin requires r_cell > 2*delta_d_per");
        }
        b.eps_neg_max_db = -slope * std::log10(1.0 - cfg.delta_d_per_m / inner);
    }
    return b;
}

ThresholdParams ThresholdParams::make(ThresholdMode mode, double k, double eps_pos_db,
                                      double eps_neg_db, const CellConfig& cfg) {
    if (eps_pos_db < 0.0 || eps_neg_db < 0.0) {
        throw std::domain_error("ThresholdParams: error margins must be >= 0");
    }
    const MarginBounds b = margin_bounds(mode, k, cfg);
    if (eps_pos_db >= b.eps_pos_max_db || eps_neg_db >= b.eps_neg_max_db) {
        throw std::domain_error("ThresholdParams: error margin exceeds its mode bound");
    }
    return {mode, k, eps_pos_db, eps_neg_db, cfg};
}

ThresholdParams ThresholdParams::with_default_margins(ThresholdMode mode, double k,
                                                      const CellConfig& cfg) {
    const MarginBounds b = margin_bounds(mode, k, cfg);
    return make(mode, k, 0.5 * b.eps_pos_max_db, 0.5 * b.eps_neg_max_db, cfg);
}

namespace {

double positive_threshold(double d_prev_m, const ThresholdParams& p) {
    return 10.0 * p.k * std::log10(1.0 + p.cell.delta_d_per_m / d_prev_m) - p.eps_pos_db;
}

double negative_threshold(double d_prev_m, const ThresholdParams& p) {
    return 10.0 * p.k * std::log10(1.0 - p.cell.delta_d_per_m / d_prev_m) + p.eps_neg_db;
}

ValidationOutcome outcome(bool valid, long tau_q_prev) {
    if (valid) {
        return {tau_q_prev, false};
    }
    return {std::nullopt, true};
}

} // namespace

ThresholdPair thresholds(double d_prev_m, const ThresholdParams& params) {
    if (!(d_prev_m > 0.0) || d_prev_m > params.cell.r_cell_m) {
        throw std::domain_error("thresholds: d_prev must be in (0, r_cell]");
    }
    if (d_prev_m <= params.cell.delta_d_per_m) {
        throw std::domain_error(
            "thresholds: negative threshold undefined for d_prev <= delta_d_per");
    }
    return {positive_threshold(d_prev_m, params), negative_threshold(d_prev_m, params)};
}

ValidationOutcome validate_threshold_at(double d_prev_m, double delta_p_db, long tau_q_prev,
                                        const ThresholdParams& params) {
    if (tau_q_prev < 0) {
        throw std::domain_error("validate_threshold: tau_q_prev must be >= 0");
    }
    const CellConfig& cell = params.cell;
    if (d_prev_m < 0.0 || d_prev_m > cell.r_cell_m) {
        log_warn("validator: d_prev %.1f m outside [0, %.1f], clamping", d_prev_m,
                 cell.r_cell_m);
        d_prev_m = std::clamp(d_prev_m, 0.0, cell.r_cell_m);
    }

    const double dper = cell.delta_d_per_m;
    if (params.mode == ThresholdMode::Enhanced) {
        if (d_prev_m < dper) {
            // no inward movement from here can invalidate the TA
            return outcome(delta_p_db < positive_threshold(d_prev_m, params), tau_q_prev);
        }
        if (d_prev_m > cell.r_cell_m - dper) {
            // no outward movement can invalidate it while staying in the cell
            return outcome(delta_p_db > negative_threshold(d_prev_m, params), tau_q_prev);
        }
        return outcome(delta_p_db < positive_threshold(d_prev_m, params) &&
                           delta_p_db > negative_threshold(d_prev_m, params),
                       tau_q_prev);
    }

    // Legacy: two-sided everywhere. For d_prev <= delta_d_per the negative
    // threshold's log argument hits zero; its limit is -inf, so the inward
    // constraint is vacuous there (no inward move can exceed delta_d_per).
    const bool below_pos = delta_p_db < positive_threshold(d_prev_m, params);
    if (d_prev_m <= dper) {
        return outcome(below_pos, tau_q_prev);
    }
    return outcome(below_pos && delta_p_db > negative_threshold(d_prev_m, params), tau_q_prev);
}

ValidationOutcome validate_threshold(const RsrpObservation& obs, long tau_q_prev,
                                     const ThresholdParams& params) {
    double d_prev = dequantize_ta(tau_q_prev, params.cell);
    if (d_prev <= 0.0) {
        // a zero TA carries no usable distance; floor to the clamp distance,
        // mirroring both the measurement model and the equation predictor
        d_prev = kMinDistanceM;
    }
    return validate_threshold_at(d_prev, obs.delta_p_db, tau_q_prev, params);
}

double ValidatorModel::score(std::span<const double> features) const {
    return std::visit([&](const auto& m) { return m.evaluate(features); }, impl);
}

std::array<double, 2> validator_features(double delta_p_db, long tau_q_prev, double k_train,
                                         double k_system, const CellConfig& cfg) {
    return {dequantize_ta(tau_q_prev, cfg), scale_delta_rsrp(delta_p_db, k_train, k_system)};
}

ValidationOutcome validate_ml(const RsrpObservation& obs, long tau_q_prev,
                              const ValidatorModel& model, double k_train, double k_system,
                              const CellConfig& cfg) {
    const auto features = validator_features(obs.delta_p_db, tau_q_prev, k_train, k_system, cfg);
    const int decision = decide(model.score(features));
    return outcome(decision > 0, tau_q_prev);
}

} // namespace smartpur
