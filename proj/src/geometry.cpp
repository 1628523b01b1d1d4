#include "smartpur/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace smartpur {

namespace {
// Relative guard (in units of TA steps) against floating-point hits exactly on a
// bin edge; keeps quantize(dequantize(tau)) == tau and tolerates sub-mm rounding
// in distances computed from dB-domain ratios.
constexpr double kStepEps = 1e-6;
} // namespace

void CellConfig::validate() const {
    if (!(r_cell_m > 0.0)) {
        throw std::invalid_argument("CellConfig: r_cell_m must be > 0");
    }
    if (!(delta_d_per_m > 0.0) || !(delta_d_per_m < r_cell_m)) {
        throw std::invalid_argument("CellConfig: delta_d_per_m must be in (0, r_cell_m)");
    }
    if (!(tau_step_s > 0.0)) {
        throw std::invalid_argument("CellConfig: tau_step_s must be > 0");
    }
}

long quantize_ta(double d_m, const CellConfig& cfg) {
    if (d_m < 0.0 || std::isnan(d_m)) {
        throw std::domain_error("quantize_ta: distance must be non-negative");
    }
    const double steps = d_m / cfg.quant_dist_m();
    return static_cast<long>(std::floor(steps + kStepEps));
}

double dequantize_ta(long tau_q, const CellConfig& cfg) {
    if (tau_q < 0) {
        throw std::domain_error("dequantize_ta: tau_q must be non-negative");
    }
    return static_cast<double>(tau_q) * cfg.quant_dist_m();
}

bool label_validity(double d_prev_m, double d_curr_m, const CellConfig& cfg) {
    if (d_prev_m < 0.0 || d_curr_m < 0.0) {
        throw std::domain_error("label_validity: distances must be non-negative");
    }
    return std::abs(d_curr_m - d_prev_m) <= cfg.delta_d_per_m;
}

} // namespace smartpur
