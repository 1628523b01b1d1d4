#include "smartpur/learners.hpp"

#include "smartpur/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace smartpur {

using nlohmann::json;

void FeatureMatrix::push_row(std::span<const double> x) {
    if (n_rows_ == 0 && n_cols_ == 0) {
        n_cols_ = x.size();
    }
    if (x.size() != n_cols_) {
        throw DataError("FeatureMatrix: inconsistent row width");
    }
    data_.insert(data_.end(), x.begin(), x.end());
    ++n_rows_;
}

void TrainOptions::validate() const {
    if (!(fp_cost_ratio > 0.0)) throw std::invalid_argument("TrainOptions: fp_cost_ratio must be > 0");
    if (adaboost_rounds < 1) throw std::invalid_argument("TrainOptions: adaboost_rounds must be >= 1");
    if (l2boost_rounds < 1) throw std::invalid_argument("TrainOptions: l2boost_rounds must be >= 1");
    if (!(l2boost_shrinkage > 0.0) || l2boost_shrinkage > 1.0) {
        throw std::invalid_argument("TrainOptions: l2boost_shrinkage must be in (0, 1]");
    }
    if (!(svm_c > 0.0)) throw std::invalid_argument("TrainOptions: svm_c must be > 0");
    if (svm_epochs < 1) throw std::invalid_argument("TrainOptions: svm_epochs must be >= 1");
}

double StumpEnsemble::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_features) {
        throw std::invalid_argument("StumpEnsemble: feature dimension mismatch");
    }
    double s = bias;
    for (std::size_t m = 0; m < stumps.size(); ++m) {
        s += weights[m] * stumps[m].value(x);
    }
    return s;
}

double LinearSvmModel::evaluate(std::span<const double> x) const {
    if (x.size() != w.size()) {
        throw std::invalid_argument("LinearSvmModel: feature dimension mismatch");
    }
    double s = b;
    for (std::size_t j = 0; j < w.size(); ++j) {
        s += w[j] * (x[j] - feature_means[j]) / feature_scales[j];
    }
    return s;
}

double predict(const StumpEnsemble& model, std::span<const double> x) {
    return model.evaluate(x);
}

double predict(const LinearSvmModel& model, std::span<const double> x) {
    return model.evaluate(x);
}

namespace {

// Per-feature row orderings, computed once per training call and reused
// across boosting rounds.
std::vector<std::vector<std::size_t>> sort_features(const FeatureMatrix& X) {
    std::vector<std::vector<std::size_t>> orders(X.cols());
    for (std::size_t j = 0; j < X.cols(); ++j) {
        auto& ord = orders[j];
        ord.resize(X.rows());
        std::iota(ord.begin(), ord.end(), std::size_t{0});
        std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
            return X.at(a, j) < X.at(b, j);
        });
    }
    return orders;
}

void require_both_classes(const std::vector<int>& y) {
    bool pos = false;
    bool neg = false;
    for (int v : y) {
        if (v == 1) pos = true;
        else if (v == -1) neg = true;
        else throw DataError("labels must be +1 or -1");
    }
    if (!pos || !neg) {
        throw DataError("training requires both classes present");
    }
}

struct ClassifierStump {
    double error = std::numeric_limits<double>::infinity();
    int feature = -1;
    double threshold = 0.0;
    double left = 1.0;
    double right = -1.0;
};

// Minimum weighted 0-1 error stump over midpoint thresholds of distinct
// sorted values; ties keep the lowest feature index, then lowest threshold.
ClassifierStump best_classifier_stump(const FeatureMatrix& X, const std::vector<int>& y,
                                      const std::vector<double>& w,
                                      const std::vector<std::vector<std::size_t>>& orders) {
    ClassifierStump best;
    double w_pos_total = 0.0;
    double w_neg_total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        (y[i] > 0 ? w_pos_total : w_neg_total) += w[i];
    }
    for (std::size_t j = 0; j < X.cols(); ++j) {
        const auto& ord = orders[j];
        double w_pos_left = 0.0;
        double w_neg_left = 0.0;
        for (std::size_t s = 0; s + 1 < ord.size(); ++s) {
            const std::size_t i = ord[s];
            (y[i] > 0 ? w_pos_left : w_neg_left) += w[i];
            const double x_here = X.at(i, j);
            const double x_next = X.at(ord[s + 1], j);
            if (!(x_next > x_here)) continue; // split only between distinct values
            const double thr = 0.5 * (x_here + x_next);
            // polarity (left=-1,right=+1): errs on positives left + negatives right
            const double err_a = w_pos_left + (w_neg_total - w_neg_left);
            // polarity (left=+1,right=-1)
            const double err_b = w_neg_left + (w_pos_total - w_pos_left);
            if (err_a < best.error) {
                best = {err_a, static_cast<int>(j), thr, -1.0, 1.0};
            }
            if (err_b < best.error) {
                best = {err_b, static_cast<int>(j), thr, 1.0, -1.0};
            }
        }
    }
    return best;
}

} // namespace

StumpEnsemble train_adaboost(const FeatureMatrix& X, const std::vector<int>& y,
                             const TrainOptions& opts, AdaBoostDiagnostics* diag) {
    opts.validate();
    if (X.rows() == 0 || X.rows() != y.size()) {
        throw DataError("train_adaboost: empty or mismatched inputs");
    }
    require_both_classes(y);

    const auto orders = sort_features(X);
    const std::size_t n = X.rows();

    std::vector<double> w(n);
    double w_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = y[i] < 0 ? opts.fp_cost_ratio : 1.0;
        w_sum += w[i];
    }
    for (double& wi : w) wi /= w_sum;

    StumpEnsemble model;
    model.n_features = static_cast<int>(X.cols());

    constexpr double kErrFloor = 1e-12;
    for (int round = 0; round < opts.adaboost_rounds; ++round) {
        const ClassifierStump s = best_classifier_stump(X, y, w, orders);
        if (s.feature < 0 || s.error >= 0.5) {
            break; // no usable weak learner left
        }
        if (diag != nullptr) {
            diag->round_errors.push_back(s.error);
        }
        const double err = std::max(s.error, kErrFloor);
        const double alpha = 0.5 * std::log((1.0 - err) / err);
        model.stumps.push_back({s.feature, s.threshold, s.left, s.right});
        model.weights.push_back(alpha);
        if (s.error <= kErrFloor) {
            break; // perfect stump; further rounds would only repeat it
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double h = model.stumps.back().value(X.row(i));
            w[i] *= std::exp(-alpha * static_cast<double>(y[i]) * h);
            norm += w[i];
        }
        for (double& wi : w) wi /= norm;
    }
    if (model.stumps.empty()) {
        throw DataError("train_adaboost: no stump with weighted error < 0.5");
    }
    return model;
}

namespace {

struct RegressionStump {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
    double left = 0.0;
    double right = 0.0;
};

// Least-squares stump on the residuals: maximizes S_L^2/n_L + S_R^2/n_R.
RegressionStump best_regression_stump(const FeatureMatrix& X, const std::vector<double>& r,
                                      const std::vector<std::vector<std::size_t>>& orders) {
    RegressionStump best;
    double total = 0.0;
    for (double v : r) total += v;
    const double n_total = static_cast<double>(r.size());
    for (std::size_t j = 0; j < X.cols(); ++j) {
        const auto& ord = orders[j];
        double sum_left = 0.0;
        for (std::size_t s = 0; s + 1 < ord.size(); ++s) {
            const std::size_t i = ord[s];
            sum_left += r[i];
            const double x_here = X.at(i, j);
            const double x_next = X.at(ord[s + 1], j);
            if (!(x_next > x_here)) continue;
            const double n_left = static_cast<double>(s + 1);
            const double n_right = n_total - n_left;
            const double sum_right = total - sum_left;
            const double gain = sum_left * sum_left / n_left + sum_right * sum_right / n_right;
            if (gain > best.gain) {
                best.gain = gain;
                best.feature = static_cast<int>(j);
                best.threshold = 0.5 * (x_here + x_next);
                best.left = sum_left / n_left;
                best.right = sum_right / n_right;
            }
        }
    }
    return best;
}

} // namespace

StumpEnsemble train_l2boost(const FeatureMatrix& X, const std::vector<double>& target,
                            const TrainOptions& opts, L2BoostDiagnostics* diag) {
    opts.validate();
    if (X.rows() == 0 || X.rows() != target.size()) {
        throw DataError("train_l2boost: empty or mismatched inputs");
    }
    if (X.rows() < 2) {
        throw DataError("train_l2boost: need at least 2 rows");
    }
    for (double t : target) {
        if (!std::isfinite(t)) throw DataError("train_l2boost: non-finite target");
    }

    const auto orders = sort_features(X);
    const std::size_t n = X.rows();

    StumpEnsemble model;
    model.n_features = static_cast<int>(X.cols());
    model.bias = std::accumulate(target.begin(), target.end(), 0.0) / static_cast<double>(n);

    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) {
        residual[i] = target[i] - model.bias;
    }
    auto mse = [&] {
        double s = 0.0;
        for (double v : residual) s += v * v;
        return s / static_cast<double>(n);
    };
    if (diag != nullptr) {
        diag->round_mse.push_back(mse());
    }

    for (int round = 0; round < opts.l2boost_rounds; ++round) {
        const RegressionStump s = best_regression_stump(X, residual, orders);
        if (s.feature < 0 || s.gain <= 0.0) {
            break; // residuals carry nothing a stump can capture
        }
        model.stumps.push_back({s.feature, s.threshold, s.left, s.right});
        model.weights.push_back(opts.l2boost_shrinkage);
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] -= opts.l2boost_shrinkage * model.stumps.back().value(X.row(i));
        }
        if (diag != nullptr) {
            diag->round_mse.push_back(mse());
        }
    }
    return model;
}

namespace {

double svm_objective(const FeatureMatrix& Z, const std::vector<int>& y,
                     const std::vector<double>& cost, const std::vector<double>& w, double b,
                     double svm_c) {
    const std::size_t n = Z.rows();
    double hinge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double score = b;
        const auto zi = Z.row(i);
        for (std::size_t j = 0; j < w.size(); ++j) score += w[j] * zi[j];
        hinge += cost[i] * std::max(0.0, 1.0 - static_cast<double>(y[i]) * score);
    }
    double reg = 0.0;
    for (double wj : w) reg += wj * wj;
    return hinge / static_cast<double>(n) + reg / (2.0 * svm_c);
}

} // namespace

LinearSvmModel train_linear_svm(const FeatureMatrix& X, const std::vector<int>& y,
                                const TrainOptions& opts, SvmDiagnostics* diag) {
    opts.validate();
    if (X.rows() == 0 || X.rows() != y.size()) {
        throw DataError("train_linear_svm: empty or mismatched inputs");
    }
    require_both_classes(y);

    const std::size_t n = X.rows();
    const std::size_t d = X.cols();

    LinearSvmModel model;
    model.feature_means.assign(d, 0.0);
    model.feature_scales.assign(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += X.at(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = X.at(i, j) - mean;
            var += c * c;
        }
        var /= static_cast<double>(n);
        model.feature_means[j] = mean;
        model.feature_scales[j] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }

    FeatureMatrix Z(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            Z.at(i, j) = (X.at(i, j) - model.feature_means[j]) / model.feature_scales[j];
        }
    }
    std::vector<double> cost(n);
    for (std::size_t i = 0; i < n; ++i) {
        cost[i] = y[i] < 0 ? opts.fp_cost_ratio : 1.0;
    }

    std::vector<double> w(d, 0.0);
    double b = 0.0;
    double obj = svm_objective(Z, y, cost, w, b, opts.svm_c);

    std::vector<double> g(d);
    std::vector<double> w_try(d);
    for (int epoch = 0; epoch < opts.svm_epochs; ++epoch) {
        // full-batch subgradient
        for (std::size_t j = 0; j < d; ++j) g[j] = w[j] / opts.svm_c;
        double gb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double score = b;
            const auto zi = Z.row(i);
            for (std::size_t j = 0; j < d; ++j) score += w[j] * zi[j];
            if (static_cast<double>(y[i]) * score < 1.0) {
                const double coeff = cost[i] * static_cast<double>(y[i]) / static_cast<double>(n);
                for (std::size_t j = 0; j < d; ++j) g[j] -= coeff * zi[j];
                gb -= coeff;
            }
        }
        // backtracking keeps the monitored objective non-increasing
        double step = 1.0 / (1.0 + static_cast<double>(epoch) / 20.0);
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving) {
            for (std::size_t j = 0; j < d; ++j) w_try[j] = w[j] - step * g[j];
            const double b_try = b - step * gb;
            const double obj_try = svm_objective(Z, y, cost, w_try, b_try, opts.svm_c);
            if (obj_try <= obj + 1e-12) {
                w = w_try;
                b = b_try;
                obj = obj_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (diag != nullptr) {
            diag->epoch_objective.push_back(obj);
        }
        if (!accepted) {
            break; // stationary within tolerance
        }
    }

    model.w = w;
    model.b = b;
    return model;
}

namespace {
constexpr int kModelVersion = 1;
}

json ensemble_to_json(const StumpEnsemble& m, const std::string& model_type) {
    json j;
    j["model_type"] = model_type;
    j["version"] = kModelVersion;
    j["bias"] = m.bias;
    j["n_features"] = m.n_features;
    json stumps = json::array();
    for (const auto& s : m.stumps) {
        stumps.push_back({{"feature", s.feature},
                          {"threshold", s.threshold},
                          {"left_value", s.left_value},
                          {"right_value", s.right_value}});
    }
    j["stumps"] = std::move(stumps);
    j["weights"] = m.weights;
    return j;
}

StumpEnsemble ensemble_from_json(const json& j, const std::string& expected_type) {
    if (!j.is_object() || !j.contains("model_type") || j["model_type"] != expected_type) {
        throw DataError("model file: expected model_type '" + expected_type + "'");
    }
    if (!j.contains("version") || j["version"].get<int>() != kModelVersion) {
        throw DataError("model file: unsupported version");
    }
    StumpEnsemble m;
    m.bias = j.at("bias").get<double>();
    m.n_features = j.at("n_features").get<int>();
    for (const auto& s : j.at("stumps")) {
        m.stumps.push_back({s.at("feature").get<int>(), s.at("threshold").get<double>(),
                            s.at("left_value").get<double>(), s.at("right_value").get<double>()});
    }
    m.weights = j.at("weights").get<std::vector<double>>();
    if (m.weights.size() != m.stumps.size()) {
        throw DataError("model file: stump/weight count mismatch");
    }
    for (const auto& s : m.stumps) {
        if (s.feature < 0 || s.feature >= m.n_features) {
            throw DataError("model file: stump feature index out of range");
        }
    }
    return m;
}

json svm_to_json(const LinearSvmModel& m) {
    json j;
    j["model_type"] = "linear_svm";
    j["version"] = kModelVersion;
    j["w"] = m.w;
    j["b"] = m.b;
    j["feature_means"] = m.feature_means;
    j["feature_scales"] = m.feature_scales;
    return j;
}

LinearSvmModel svm_from_json(const json& j) {
    if (!j.is_object() || !j.contains("model_type") || j["model_type"] != "linear_svm") {
        throw DataError("model file: expected model_type 'linear_svm'");
    }
    if (!j.contains("version") || j["version"].get<int>() != kModelVersion) {
        throw DataError("model file: unsupported version");
    }
    LinearSvmModel m;
    m.w = j.at("w").get<std::vector<double>>();
    m.b = j.at("b").get<double>();
    m.feature_means = j.at("feature_means").get<std::vector<double>>();
    m.feature_scales = j.at("feature_scales").get<std::vector<double>>();
    if (m.w.size() != m.feature_means.size() || m.w.size() != m.feature_scales.size()) {
        throw DataError("model file: svm parameter size mismatch");
    }
    return m;
}

} // namespace smartpur
