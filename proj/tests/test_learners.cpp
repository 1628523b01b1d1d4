#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smartpur/errors.hpp"
#include "smartpur/learners.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

using namespace smartpur;

namespace {

FeatureMatrix matrix(const std::vector<std::vector<double>>& rows) {
    FeatureMatrix X;
    for (const auto& r : rows) X.push_row(r);
    return X;
}

// brute-force re-evaluation used as the independent prediction oracle
double eval_by_hand(const StumpEnsemble& m, const std::vector<double>& x) {
    double s = m.bias;
    for (std::size_t i = 0; i < m.stumps.size(); ++i) {
        const auto& st = m.stumps[i];
        const double leaf =
            x[static_cast<std::size_t>(st.feature)] < st.threshold ? st.left_value : st.right_value;
        s += m.weights[i] * leaf;
    }
    return s;
}

// two interleaved gaussian blobs with controlled overlap
void noisy_blobs(std::size_t n, std::uint64_t seed, FeatureMatrix& X, std::vector<int>& y) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const int label = u(rng) < 0.5 ? 1 : -1;
        const double cx = label > 0 ? 1.0 : -1.0;
        X.push_row(std::vector<double>{cx + noise(rng), 0.5 * cx + noise(rng)});
        y.push_back(label);
    }
}

} // namespace

TEST_CASE("adaboost separates a linearly separable toy set quickly") {
    FeatureMatrix X;
    std::vector<int> y;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 400; ++i) {
        const int label = i % 2 == 0 ? 1 : -1;
        const double base = label > 0 ? 2.0 : -2.0;
        X.push_row(std::vector<double>{base + u(rng), u(rng)});
        y.push_back(label);
    }
    TrainOptions opts;
    opts.adaboost_rounds = 10;
    AdaBoostDiagnostics diag;
    const StumpEnsemble model = train_adaboost(X, y, opts, &diag);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        CHECK(decide(model.evaluate(X.row(i))) == y[i]);
    }
    CHECK(diag.round_errors.size() <= 10);
}

TEST_CASE("adaboost round errors stay below one half") {
    FeatureMatrix X;
    std::vector<int> y;
    noisy_blobs(3000, 17, X, y);
    TrainOptions opts;
    AdaBoostDiagnostics diag;
    train_adaboost(X, y, opts, &diag);
    REQUIRE(!diag.round_errors.empty());
    for (double e : diag.round_errors) {
        CHECK(e < 0.5);
    }
}

TEST_CASE("higher fp cost buys specificity on a fixed noisy set") {
    FeatureMatrix Xtr, Xte;
    std::vector<int> ytr, yte;
    noisy_blobs(4000, 23, Xtr, ytr);
    noisy_blobs(4000, 29, Xte, yte);

    auto specificity = [&](double cost_ratio) {
        TrainOptions opts;
        opts.fp_cost_ratio = cost_ratio;
        const StumpEnsemble m = train_adaboost(Xtr, ytr, opts);
        std::size_t tn = 0, fp = 0;
        for (std::size_t i = 0; i < Xte.rows(); ++i) {
            if (yte[i] == -1) {
                (decide(m.evaluate(Xte.row(i))) == -1 ? tn : fp)++;
            }
        }
        return static_cast<double>(tn) / static_cast<double>(tn + fp);
    };
    CHECK(specificity(5.0) >= specificity(1.0));
}

TEST_CASE("adaboost rejects single-class input") {
    FeatureMatrix X = matrix({{0.0}, {1.0}, {2.0}});
    CHECK_THROWS_AS(train_adaboost(X, {1, 1, 1}, TrainOptions{}), DataError);
    CHECK_THROWS_AS(train_linear_svm(X, {-1, -1, -1}, TrainOptions{}), DataError);
}

TEST_CASE("adaboost is deterministic") {
    FeatureMatrix X;
    std::vector<int> y;
    noisy_blobs(2000, 31, X, y);
    const StumpEnsemble a = train_adaboost(X, y, TrainOptions{});
    const StumpEnsemble b = train_adaboost(X, y, TrainOptions{});
    REQUIRE(a.stumps.size() == b.stumps.size());
    for (std::size_t i = 0; i < a.stumps.size(); ++i) {
        CHECK(a.stumps[i].feature == b.stumps[i].feature);
        CHECK(a.stumps[i].threshold == b.stumps[i].threshold);
        CHECK(a.weights[i] == b.weights[i]);
    }
}

TEST_CASE("l2boost fits a constant target with the bias alone") {
    FeatureMatrix X = matrix({{0.0}, {1.0}, {2.0}, {3.0}});
    const StumpEnsemble m = train_l2boost(X, {4.5, 4.5, 4.5, 4.5}, TrainOptions{});
    CHECK(m.bias == doctest::Approx(4.5).epsilon(1e-15));
    for (std::size_t i = 0; i < X.rows(); ++i) {
        CHECK(m.evaluate(X.row(i)) == doctest::Approx(4.5).epsilon(1e-12));
    }
}

TEST_CASE("l2boost drives a step target to tiny training error") {
    FeatureMatrix X;
    std::vector<double> t;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng);
        X.push_row(std::vector<double>{x, u(rng)});
        t.push_back(x < 5.0 ? 1.0 : 3.0);
    }
    L2BoostDiagnostics diag;
    train_l2boost(X, t, TrainOptions{}, &diag);
    REQUIRE(!diag.round_mse.empty());
    CHECK(diag.round_mse.back() < 1e-3);
}

TEST_CASE("l2boost training MSE is monotone non-increasing") {
    FeatureMatrix X;
    std::vector<double> t;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 1500; ++i) {
        const double a = u(rng);
        const double b = u(rng);
        X.push_row(std::vector<double>{a, b});
        t.push_back(std::sin(a) + 0.3 * b + noise(rng));
    }
    L2BoostDiagnostics diag;
    train_l2boost(X, t, TrainOptions{}, &diag);
    for (std::size_t i = 1; i < diag.round_mse.size(); ++i) {
        CHECK(diag.round_mse[i] <= diag.round_mse[i - 1] + 1e-12);
    }
}

TEST_CASE("l2boost rejects degenerate input") {
    CHECK_THROWS_AS(train_l2boost(FeatureMatrix{}, {}, TrainOptions{}), DataError);
    FeatureMatrix X = matrix({{1.0}});
    CHECK_THROWS_AS(train_l2boost(X, {1.0}, TrainOptions{}), DataError);
}

TEST_CASE("svm finds a separating boundary on 1-d separable data") {
    FeatureMatrix X;
    std::vector<int> y;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    for (int i = 0; i < 200; ++i) {
        const int label = i % 2 == 0 ? 1 : -1;
        X.push_row(std::vector<double>{label * u(rng)});
        y.push_back(label);
    }
    TrainOptions opts;
    opts.fp_cost_ratio = 1.0; // flat costs: the subject here is the boundary location
    const LinearSvmModel m = train_linear_svm(X, y, opts);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        CHECK(decide(m.evaluate(X.row(i))) == y[i]);
    }
    // the zero crossing sits inside the separating gap
    const double crossing = m.feature_means[0] - m.b * m.feature_scales[0] / m.w[0];
    CHECK(crossing > -0.5);
    CHECK(crossing < 0.5);
}

TEST_CASE("svm objective is monotone non-increasing across epochs") {
    FeatureMatrix X;
    std::vector<int> y;
    noisy_blobs(2000, 41, X, y);
    SvmDiagnostics diag;
    train_linear_svm(X, y, TrainOptions{}, &diag);
    REQUIRE(!diag.epoch_objective.empty());
    for (std::size_t i = 1; i < diag.epoch_objective.size(); ++i) {
        CHECK(diag.epoch_objective[i] <= diag.epoch_objective[i - 1] + 1e-6);
    }
}

TEST_CASE("svm is invariant to duplicating every row") {
    FeatureMatrix X;
    std::vector<int> y;
    noisy_blobs(500, 43, X, y);
    FeatureMatrix X2;
    std::vector<int> y2;
    for (int rep = 0; rep < 2; ++rep) {
        for (std::size_t i = 0; i < X.rows(); ++i) {
            X2.push_row(X.row(i));
            y2.push_back(y[i]);
        }
    }
    const LinearSvmModel a = train_linear_svm(X, y, TrainOptions{});
    const LinearSvmModel b = train_linear_svm(X2, y2, TrainOptions{});
    for (std::size_t j = 0; j < a.w.size(); ++j) {
        CHECK(a.w[j] == doctest::Approx(b.w[j]).epsilon(1e-9));
    }
    CHECK(a.b == doctest::Approx(b.b).epsilon(1e-9));
}

TEST_CASE("svm cost ratio shifts the boundary toward fewer false positives") {
    FeatureMatrix Xtr, Xte;
    std::vector<int> ytr, yte;
    noisy_blobs(4000, 47, Xtr, ytr);
    noisy_blobs(4000, 53, Xte, yte);
    auto false_positives = [&](double cost) {
        TrainOptions opts;
        opts.fp_cost_ratio = cost;
        const LinearSvmModel m = train_linear_svm(Xtr, ytr, opts);
        std::size_t fp = 0;
        for (std::size_t i = 0; i < Xte.rows(); ++i) {
            if (yte[i] == -1 && decide(m.evaluate(Xte.row(i))) == 1) ++fp;
        }
        return fp;
    };
    CHECK(false_positives(5.0) <= false_positives(1.0));
}

TEST_CASE("predict: empty ensemble returns the bias") {
    StumpEnsemble m;
    m.bias = 3.25;
    m.n_features = 2;
    CHECK(predict(m, std::vector<double>{1.0, 2.0}) == 3.25);
}

TEST_CASE("predict: single stump arithmetic") {
    StumpEnsemble m;
    m.bias = 0.5;
    m.n_features = 1;
    m.stumps.push_back({0, 2.0, -1.0, 1.0});
    m.weights.push_back(0.75);
    CHECK(predict(m, std::vector<double>{1.0}) == doctest::Approx(0.5 - 0.75));
    CHECK(predict(m, std::vector<double>{3.0}) == doctest::Approx(0.5 + 0.75));
}

TEST_CASE("predict matches a brute-force evaluator on random ensembles") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    StumpEnsemble m;
    m.bias = 0.1;
    m.n_features = 3;
    for (int i = 0; i < 25; ++i) {
        m.stumps.push_back({static_cast<int>(i % 3), u(rng), u(rng), u(rng)});
        m.weights.push_back(u(rng));
    }
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> x = {u(rng), u(rng), u(rng)};
        CHECK(m.evaluate(x) == doctest::Approx(eval_by_hand(m, x)).epsilon(1e-12));
    }
}

TEST_CASE("predict rejects dimension mismatch") {
    StumpEnsemble m;
    m.n_features = 2;
    CHECK_THROWS_AS(m.evaluate(std::vector<double>{1.0}), std::invalid_argument);
    LinearSvmModel s;
    s.w = {1.0, 2.0};
    s.feature_means = {0.0, 0.0};
    s.feature_scales = {1.0, 1.0};
    CHECK_THROWS_AS(s.evaluate(std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("serialization round trip: identical predictions") {
    FeatureMatrix X;
    std::vector<int> y;
    noisy_blobs(1500, 71, X, y);
    const StumpEnsemble m = train_adaboost(X, y, TrainOptions{});
    const StumpEnsemble m2 =
        ensemble_from_json(ensemble_to_json(m, "adaboost_stumps"), "adaboost_stumps");
    const LinearSvmModel s = train_linear_svm(X, y, TrainOptions{});
    const LinearSvmModel s2 = svm_from_json(svm_to_json(s));
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> x = {u(rng), u(rng)};
        CHECK(m.evaluate(x) == m2.evaluate(x));
        CHECK(s.evaluate(x) == s2.evaluate(x));
    }
    CHECK_THROWS_AS(ensemble_from_json(svm_to_json(s), "adaboost_stumps"), DataError);
}
