#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace smartpur {

/// Row-major feature matrix; all learners consume this shape.
class FeatureMatrix {
  public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t n_rows, std::size_t n_cols)
        : n_rows_(n_rows), n_cols_(n_cols), data_(n_rows * n_cols, 0.0) {}

    std::size_t rows() const { return n_rows_; }
    std::size_t cols() const { return n_cols_; }
    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * n_cols_, n_cols_};
    }
    double& at(std::size_t i, std::size_t j) { return data_[i * n_cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * n_cols_ + j]; }
    void push_row(std::span<const double> x);

  private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<double> data_;
};

/// Axis-aligned decision stump: value is left_value when
/// x[feature] < threshold, right_value otherwise.
struct Stump {
    int feature = 0;
    double threshold = 0.0;
    double left_value = 0.0;
    double right_value = 0.0;

    double value(std::span<const double> x) const {
        return x[static_cast<std::size_t>(feature)] < threshold ? left_value : right_value;
    }
};

/// Weighted sum of stumps plus a bias. Serves both the boosted classifier
/// (leaf values +-1, weights = per-round alphas, bias 0) and the boosted
/// regressor (leaf values = residual means, weights = shrinkage, bias = mean).
struct StumpEnsemble {
    std::vector<Stump> stumps;
    std::vector<double> weights;
    double bias = 0.0;
    int n_features = 0;

    /// bias + sum_m weights[m] * stump_m(x). Dimension mismatch throws.
    double evaluate(std::span<const double> x) const;
};

/// Soft-margin linear classifier over internally standardized features.
struct LinearSvmModel {
    std::vector<double> w;
    double b = 0.0;
    std::vector<double> feature_means;
    std::vector<double> feature_scales;

    /// w . standardize(x) + b. Dimension mismatch throws.
    double evaluate(std::span<const double> x) const;
};

struct TrainOptions {
    double fp_cost_ratio = 5.0; ///< extra weight on the invalid (-1) class
    int adaboost_rounds = 100;
    int l2boost_rounds = 200;
    double l2boost_shrinkage = 0.1;
    double svm_c = 1.0;
    int svm_epochs = 200;
    std::uint64_t seed = 0;

    void validate() const;
};

struct AdaBoostDiagnostics {
    std::vector<double> round_errors; ///< weighted error of each accepted stump
};

struct L2BoostDiagnostics {
    std::vector<double> round_mse; ///< training MSE after each round (index 0 = bias only)
};

struct SvmDiagnostics {
    std::vector<double> epoch_objective; ///< full-batch objective after each epoch
};

/// Discrete AdaBoost over stumps with exponential loss. Initial sample weights
/// are multiplied by fp_cost_ratio on the -1 class. Labels must be +-1 with
/// both classes present (else DataError). A round whose best stump has
/// weighted error >= 0.5 stops boosting early.
StumpEnsemble train_adaboost(const FeatureMatrix& X, const std::vector<int>& y,
                             const TrainOptions& opts, AdaBoostDiagnostics* diag = nullptr);

/// Stagewise least-squares boosting of regression stumps with shrinkage;
/// bias is the target mean. Training MSE is non-increasing in the round count.
StumpEnsemble train_l2boost(const FeatureMatrix& X, const std::vector<double>& target,
                            const TrainOptions& opts, L2BoostDiagnostics* diag = nullptr);

/// Class-cost-weighted hinge loss + ||w||^2 / (2 svm_c), minimized by
/// deterministic full-batch subgradient descent with backtracking; the
/// monitored objective never increases across epochs.
LinearSvmModel train_linear_svm(const FeatureMatrix& X, const std::vector<int>& y,
                                const TrainOptions& opts, SvmDiagnostics* diag = nullptr);

double predict(const StumpEnsemble& model, std::span<const double> x);
double predict(const LinearSvmModel& model, std::span<const double> x);

/// sign convention used project-wide: +1 = TA valid, -1 = TA invalid;
/// a score of exactly zero decides +1.
inline int decide(double score) { return score >= 0.0 ? 1 : -1; }

// Model files are JSON documents tagged by model_type, with a version field
// and the full parameter dump; reload is bit-exact.
nlohmann::json ensemble_to_json(const StumpEnsemble& m, const std::string& model_type);
StumpEnsemble ensemble_from_json(const nlohmann::json& j, const std::string& expected_type);
nlohmann::json svm_to_json(const LinearSvmModel& m);
LinearSvmModel svm_from_json(const nlohmann::json& j);

} // namespace smartpur
