#pragma once

#include "smartpur/channel.hpp"
#include "smartpur/datagen.hpp"
#include "smartpur/geometry.hpp"
#include "smartpur/learners.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace smartpur {

/// Generation channel description. k/beta_db overrides shape only the base
/// model; the shadowing fields, when given, override every preset used in a
/// sweep (that is how a campaign is made noiseless).
struct ChannelConfig {
    PathLossPreset preset = PathLossPreset::UMa;
    std::optional<double> k;
    std::optional<double> beta_db;
    std::optional<double> shadow_sigma_db;
    bool shadow_correlated = false;
    double shadow_decorr_m = 50.0;
    RadioConfig radio;
    MeasurementConfig meas;

    /// The configured channel itself (preset plus all overrides).
    PathLossModel base_model() const;
    /// A sweep model: the named preset with the campaign-wide shadowing
    /// overrides applied.
    PathLossModel resolve(PathLossPreset p) const;
};

struct DatagenConfig {
    std::size_t n_samples = 50000; ///< training rows (per training model)
    std::size_t n_test = 20000;    ///< held-out rows; also the MC trial count
    double velocity_max_kmh = 120.0;
    std::size_t history_len = 1;
    bool snap_to_lattice = false; ///< snap positions onto the TA lattice
};

struct SweepConfig {
    std::vector<double> radii_m = {1500.0};
    std::vector<std::string> validators = {"legacy", "enhanced", "svm", "adaboost"};
    std::vector<std::string> predictors = {"equation", "l2boost"};
    std::vector<double> p_exceed_overrides;
    /// Models pooled into the training set; a single entry is the plain
    /// same/cross-model protocol.
    std::vector<PathLossPreset> train_models = {PathLossPreset::UMa};
    PathLossPreset test_model = PathLossPreset::UMa;
};

struct OutputConfig {
    std::string dir = "out";
    bool json = true;
    bool csv = true;
};

/// Optional explicit error margins for the threshold validators; defaults are
/// half the mode bounds.
struct StavConfig {
    std::optional<double> eps_pos_db;
    std::optional<double> eps_neg_db;
};

struct ExperimentConfig {
    std::uint64_t seed = 20240101;
    std::string mode = "campaign"; ///< campaign | table3-check
    CellConfig cell;
    ChannelConfig channel;
    DatagenConfig datagen;
    TrainOptions train;
    SweepConfig sweep;
    OutputConfig output;
    StavConfig stav;
    /// method name -> pre-trained model file; absent methods are trained in-run.
    std::map<std::string, std::string> models;
};

/// Strict parse: unknown keys anywhere raise ConfigError with the key path.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Full round-trip emission (every effective value made explicit).
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// DatasetSpec for the configured base channel at the configured cell.
DatasetSpec dataset_spec_from_config(const ExperimentConfig& cfg, std::size_t n_samples,
                                     std::uint64_t seed);

} // namespace smartpur
