#pragma once

#include "smartpur/config.hpp"
#include "smartpur/metrics.hpp"
#include "smartpur/stap.hpp"
#include "smartpur/stav.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smartpur {

// Feature extraction shared by the runner, the CLI trainer, and the tests.
FeatureMatrix validator_matrix(const std::vector<LabeledRow>& rows, double k_train,
                               double k_system, const CellConfig& cell);
std::vector<int> validator_labels(const std::vector<LabeledRow>& rows);
PredictorInput row_to_predictor_input(const LabeledRow& row, double k_train, double k_system);
FeatureMatrix predictor_matrix(const std::vector<LabeledRow>& rows, double k_train,
                               double k_system);
std::vector<double> predictor_targets(const std::vector<LabeledRow>& rows);

/// Monte Carlo fallback tallies over one trial set.
struct McFallback {
    std::size_t n = 0;
    std::size_t proactive = 0;
    std::size_t reactive = 0;

    double p_f_pro() const { return n ? static_cast<double>(proactive) / n : 0.0; }
    double p_f_re() const { return n ? static_cast<double>(reactive) / n : 0.0; }
    double p_f_total() const { return p_f_pro() + p_f_re(); }
};

struct ValidatorCellReport {
    std::string name;
    ConfusionCounts confusion;
    double p_tp = 0.0, p_tn = 0.0, p_fp = 0.0, p_fn = 0.0;
    FallbackReport closed_form;               ///< at the measured p_exceed
    std::vector<FallbackReport> overrides;    ///< at each configured p_exceed
    McFallback mc;                            ///< counted on an independent trial set
};

struct PredictorCellReport {
    std::string name;
    double eta = 0.0;     ///< accuracy of the on-air (quantized) TA's implied distance
    double eta_raw = 0.0; ///< accuracy of the pre-quantization estimate
    FallbackReport closed_form;
    McFallback mc;
};

struct CellReport {
    double r_cell_m = 0.0;
    std::vector<std::string> train_models;
    std::string test_model;
    double p_exceed_measured = 0.0;
    std::size_t n_train = 0, n_test = 0, n_mc = 0;
    std::vector<ValidatorCellReport> validators;
    std::vector<PredictorCellReport> predictors;
};

struct MetricsReport {
    std::uint64_t seed = 0;
    std::vector<CellReport> cells;
};

/// Runs the configured campaign: per radius, generate train/test/MC datasets,
/// train (or load) the requested validators and predictors, evaluate, and
/// tally closed-form plus Monte Carlo fallback. Deterministic given the
/// config; jobs only parallelizes dataset generation.
MetricsReport run_experiment(const ExperimentConfig& cfg, int jobs = 1);

nlohmann::json report_to_json(const MetricsReport& report);
std::string report_to_csv(const MetricsReport& report);

/// One row of the published fallback-rate reference table and its
/// consistency check: p + (1-p) q must reproduce the listed validation
/// fallback within one percentage point of rounding, and 1 - eta must pass
/// through the prediction-fallback map unchanged.
struct ReferenceFallbackRow {
    double r_cell_km;
    double rate_q;        ///< published validator error-rate column
    double p_exceed;      ///< published movement-exceedance probability
    double p_f_stav;      ///< published validation fallback
    double p_f_stap;      ///< published prediction fallback
    double reconstructed; ///< p + (1-p) q
    bool stav_ok;
    bool stap_ok;

    bool ok() const { return stav_ok && stap_ok; }
};

std::vector<ReferenceFallbackRow> run_table3_check();

/// Writes the JSON/CSV reports under cfg.output.dir; returns written paths.
std::vector<std::string> write_reports(const MetricsReport& report, const ExperimentConfig& cfg);

} // namespace smartpur
