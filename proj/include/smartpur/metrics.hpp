#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace smartpur {

/// Confusion counts with positive = "TA valid".
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
    double p_tp() const; ///< sensitivity tp/(tp+fn); throws DataError when the class is absent
    double p_tn() const; ///< specificity tn/(tn+fp)
    double p_fp() const { return 1.0 - p_tn(); }
    double p_fn() const { return 1.0 - p_tp(); }
};

/// Counts decisions against labels (true = valid). Length mismatch or empty
/// input throws DataError.
ConfusionCounts confusion_metrics(const std::vector<bool>& decisions_valid,
                                  const std::vector<bool>& labels_valid);

enum class FallbackMethod { Stav, Stap };

std::string to_string(FallbackMethod m);

/// Proactive/reactive/overall fallback rates, with the movement-exceedance
/// probability they were computed against.
struct FallbackReport {
    double p_exceed = 0.0;
    double p_f_pro = 0.0;
    double p_f_re = 0.0;
    double p_f_total = 0.0;
    FallbackMethod method = FallbackMethod::Stav;
};

/// Closed-form validation fallback:
///   pro   = p_exceed * p_tn + (1 - p_exceed) * p_fn
///   re    = p_exceed * (1 - p_tn)
///   total = pro + re, algebraically equal to p_exceed + (1-p_exceed) * p_fn.
/// Both total forms are computed and cross-checked. Inputs outside [0,1]
/// throw std::domain_error.
FallbackReport fallback_stav_closed_form(double p_exceed, double p_tn, double p_fn);

/// Prediction fallback: never proactive, reactive = 1 - eta.
FallbackReport fallback_stap(double eta);

} // namespace smartpur
