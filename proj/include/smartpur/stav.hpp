#pragma once

#include "smartpur/channel.hpp"
#include "smartpur/geometry.hpp"
#include "smartpur/learners.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>

namespace smartpur {

enum class ThresholdMode { Legacy, Enhanced };

std::string to_string(ThresholdMode m);
ThresholdMode threshold_mode_from_string(const std::string& s);

/// Upper limits for the error margins of each mode, evaluated at the cell
/// boundary. Enhanced mode admits larger margins because its edge branches
/// never consult the threshold that would change sign there.
struct MarginBounds {
    double eps_pos_max_db = 0.0;
    double eps_neg_max_db = 0.0;
};

/// Throws std::domain_error in Enhanced mode when r_cell <= 2 * delta_d_per,
/// where the negative-margin bound's log argument stops being positive.
MarginBounds margin_bounds(ThresholdMode mode, double k, const CellConfig& cfg);

/// Threshold-validator parameters. Margins are validated against the mode's
/// bounds at construction; use make() or with_default_margins().
struct ThresholdParams {
    ThresholdMode mode = ThresholdMode::Enhanced;
    double k = 2.0;
    double eps_pos_db = 0.0;
    double eps_neg_db = 0.0;
    CellConfig cell;

    static ThresholdParams make(ThresholdMode mode, double k, double eps_pos_db,
                                double eps_neg_db, const CellConfig& cfg);

    /// Margins set to half the mode's upper bounds.
    static ThresholdParams with_default_margins(ThresholdMode mode, double k,
                                                const CellConfig& cfg);
};

struct ThresholdPair {
    double pos_db = 0.0;
    double neg_db = 0.0;
};

/// Decision thresholds for a UE previously at d_prev:
///   pos = 10 k log10(1 + delta_d_per / d_prev) - eps_pos
///   neg = 10 k log10(1 - delta_d_per / d_prev) + eps_neg
/// The negative threshold requires d_prev > delta_d_per; requesting it below
/// that throws std::domain_error (the validator's branch logic never does).
ThresholdPair thresholds(double d_prev_m, const ThresholdParams& params);

/// Validation outcome: the previous TA is either extrapolated or the UE
/// proactively falls back. ta_out is engaged iff not proactive_fallback.
struct ValidationOutcome {
    std::optional<long> ta_out;
    bool proactive_fallback = false;

    bool valid() const { return ta_out.has_value(); }
};

/// Threshold validation with d_prev reconstructed from the BS-provided TA.
/// A zero TA implies no usable distance; it floors to the measurement clamp
/// distance, matching the channel model and the equation predictor.
ValidationOutcome validate_threshold(const RsrpObservation& obs, long tau_q_prev,
                                     const ThresholdParams& params);

/// Same decision logic with an explicitly supplied previous distance
/// (test oracles use this to bypass TA quantization). Out-of-cell d_prev is
/// clamped to the cell with a warning.
ValidationOutcome validate_threshold_at(double d_prev_m, double delta_p_db, long tau_q_prev,
                                        const ThresholdParams& params);

/// A trained TA-validation classifier (boosted stumps or linear SVM).
struct ValidatorModel {
    std::variant<StumpEnsemble, LinearSvmModel> impl;

    double score(std::span<const double> features) const;
};

/// Classifier feature layout shared by training and inference:
/// (distance implied by the previous TA, environment-scaled RSRP difference).
std::array<double, 2> validator_features(double delta_p_db, long tau_q_prev, double k_train,
                                         double k_system, const CellConfig& cfg);

/// ML-aided validation: Eq.-14-style scaling first, then the sign decision
/// (+1 = valid keeps the previous TA, -1 = proactive fallback).
ValidationOutcome validate_ml(const RsrpObservation& obs, long tau_q_prev,
                              const ValidatorModel& model, double k_train, double k_system,
                              const CellConfig& cfg);

} // namespace smartpur
