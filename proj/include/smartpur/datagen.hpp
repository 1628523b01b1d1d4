#pragma once

#include "smartpur/channel.hpp"
#include "smartpur/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

namespace smartpur {

/// Recipe for one synthetic labeled dataset. Generation is a pure function of
/// this struct: identical spec (including seed) gives byte-identical CSV.
struct DatasetSpec {
    std::size_t n_samples = 0;
    CellConfig cell;
    PathLossModel pl;
    RadioConfig radio;
    MeasurementConfig meas;
    double velocity_max_kmh = 120.0;
    std::uint64_t seed = 1;
    std::size_t history_len = 1; ///< number of past (TA, RSRP) pairs kept per row
    /// Snap every sampled position onto the TA lattice (multiples of the
    /// quantization distance), making TA quantization lossless.
    bool snap_to_lattice = false;

    void validate() const;
};

/// One dataset row: the movement, its RSRP observation pair, and the trailing
/// history of (tau_q, rsrp) pairs. history.back() is the previous instant,
/// so history.back() == (sample.tau_q_prev, obs.rsrp_prev_dbm).
struct LabeledRow {
    TransitionSample sample;
    RsrpObservation obs;
    std::vector<std::pair<long, double>> history;
};

/// Radial UE distance drawn uniformly on [0, r_cell]. Only the radial
/// distance enters any formula, so the angle is never materialized.
double sample_position(const CellConfig& cfg, std::mt19937_64& rng);

/// Synthesize n_samples independent transitions. Each row chains
/// history_len + 1 independent uniform positions, measures RSRP at each with
/// one velocity draw shared across the chain, and labels the final movement.
/// Row i uses its own generator seeded with derive_seed(spec.seed, i), so the
/// output is identical under any worker count.
std::vector<LabeledRow> generate_dataset(const DatasetSpec& spec, int jobs = 1);

/// Fraction of rows whose movement exceeded the permissible movement
/// (p_{delta d > delta d_per}). Empty input throws DataError.
double movement_exceedance_rate(const std::vector<LabeledRow>& rows);

/// CSV header: d_prev_m,d_curr_m,velocity_kmh,tau_q_prev,tau_q_curr,
/// rsrp_prev_dbm,rsrp_curr_dbm,delta_p_db,label_valid[,tau_q_h{j},rsrp_h{j}_dbm...]
/// with history columns for j = 1..history_len-1 (instant i-1-j).
void write_dataset_csv(std::ostream& out, const std::vector<LabeledRow>& rows,
                       std::size_t history_len);

/// Parses a dataset CSV produced by write_dataset_csv; history length is
/// recovered from the header. Malformed input throws DataError.
std::vector<LabeledRow> read_dataset_csv(std::istream& in);

} // namespace smartpur
