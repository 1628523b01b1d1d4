#include "smartpur/metrics.hpp"

#include "smartpur/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace smartpur {

double ConfusionCounts::p_tp() const {
    if (tp + fn == 0) {
        throw DataError("ConfusionCounts: no actually-valid samples, p_TP undefined");
    }
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double ConfusionCounts::p_tn() const {
    if (tn + fp == 0) {
        throw DataError("ConfusionCounts: no actually-invalid samples, p_TN undefined");
    }
    return static_cast<double>(tn) / static_cast<double>(tn + fp);
}

ConfusionCounts confusion_metrics(const std::vector<bool>& decisions_valid,
                                  const std::vector<bool>& labels_valid) {
    if (decisions_valid.size() != labels_valid.size()) {
        throw DataError("confusion_metrics: decision/label length mismatch");
    }
    if (decisions_valid.empty()) {
        throw DataError("confusion_metrics: empty input");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < decisions_valid.size(); ++i) {
        if (labels_valid[i]) {
            (decisions_valid[i] ? c.tp : c.fn)++;
        } else {
            (decisions_valid[i] ? c.fp : c.tn)++;
        }
    }
    return c;
}

std::string to_string(FallbackMethod m) {
    return m == FallbackMethod::Stav ? "sTAV" : "sTAP";
}

namespace {

void require_probability(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error(std::string("fallback: ") + name + " must be in [0,1]");
    }
}

} // namespace

FallbackReport fallback_stav_closed_form(double p_exceed, double p_tn, double p_fn) {
    require_probability(p_exceed, "p_exceed");
    require_probability(p_tn, "p_tn");
    require_probability(p_fn, "p_fn");
    FallbackReport r;
    r.method = FallbackMethod::Stav;
    r.p_exceed = p_exceed;
    r.p_f_pro = p_exceed * p_tn + (1.0 - p_exceed) * p_fn;
    r.p_f_re = p_exceed * (1.0 - p_tn);
    r.p_f_total = r.p_f_pro + r.p_f_re;
    const double direct = p_exceed + (1.0 - p_exceed) * p_fn;
    if (std::abs(r.p_f_total - direct) > 1e-12) {
        throw std::logic_error("fallback_stav_closed_form: algebraic identity violated");
    }
    return r;
}

FallbackReport fallback_stap(double eta) {
    require_probability(eta, "eta");
    FallbackReport r;
    r.method = FallbackMethod::Stap;
    r.p_exceed = 0.0;
    r.p_f_pro = 0.0;
    r.p_f_re = 1.0 - eta;
    r.p_f_total = r.p_f_re;
    return r;
}

} // namespace smartpur
