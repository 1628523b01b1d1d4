#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smartpur/datagen.hpp"
#include "smartpur/errors.hpp"

#include <cmath>
#include <sstream>

using namespace smartpur;

namespace {

DatasetSpec noiseless_spec(std::size_t n, double r_cell, std::uint64_t seed) {
    DatasetSpec spec;
    spec.n_samples = n;
    spec.cell.r_cell_m = r_cell;
    spec.pl = PathLossModel::custom(3.9, 12.6, 0.0);
    spec.meas.base_noise_sigma_db = 0.0;
    spec.meas.doppler_coeff_db_per_kmh = 0.0;
    spec.seed = seed;
    return spec;
}

} // namespace

TEST_CASE("sample_position: uniform support and mean") {
    CellConfig cfg;
    std::mt19937_64 rng(11);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double d = sample_position(cfg, rng);
        REQUIRE(d >= 0.0);
        REQUIRE(d <= cfg.r_cell_m);
        sum += d;
    }
    CHECK(sum / n == doctest::Approx(cfg.r_cell_m / 2.0).epsilon(0.01));
}

TEST_CASE("sample_position: fixed seed reproduces the sequence") {
    CellConfig cfg;
    std::mt19937_64 a(77), b(77);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_position(cfg, a) == sample_position(cfg, b));
    }
}

TEST_CASE("noiseless rows satisfy the delta oracle exactly") {
    const auto rows = generate_dataset(noiseless_spec(3000, 1500.0, 2024));
    for (const auto& r : rows) {
        const double dp = std::max(r.sample.d_prev_m, kMinDistanceM);
        const double dc = std::max(r.sample.d_curr_m, kMinDistanceM);
        const double expect = 10.0 * 3.9 * std::log10(dc / dp);
        CHECK(r.obs.delta_p_db == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("rows satisfy the geometry invariants") {
    DatasetSpec spec = noiseless_spec(3000, 2500.0, 5);
    spec.pl = PathLossModel::uma();
    const auto rows = generate_dataset(spec);
    for (const auto& r : rows) {
        CHECK(r.sample.d_prev_m >= 0.0);
        CHECK(r.sample.d_prev_m <= spec.cell.r_cell_m);
        CHECK(r.sample.d_curr_m <= spec.cell.r_cell_m);
        CHECK(r.sample.tau_q_prev == quantize_ta(r.sample.d_prev_m, spec.cell));
        CHECK(r.sample.tau_q_curr == quantize_ta(r.sample.d_curr_m, spec.cell));
        CHECK(r.sample.label_valid ==
              label_validity(r.sample.d_prev_m, r.sample.d_curr_m, spec.cell));
        REQUIRE(r.history.size() == 1);
        CHECK(r.history.back().first == r.sample.tau_q_prev);
        CHECK(r.history.back().second == r.obs.rsrp_prev_dbm);
        CHECK(r.obs.delta_p_db == r.obs.rsrp_prev_dbm - r.obs.rsrp_curr_dbm);
    }
}

TEST_CASE("empirical invalid-label rate matches the two-uniform oracle") {
    // P(|U1-U2| > dper) = (1 - dper/r)^2 for U uniform on [0, r]
    const auto rows = generate_dataset(noiseless_spec(100000, 1500.0, 99));
    const double expect = (1.0 - 702.0 / 1500.0) * (1.0 - 702.0 / 1500.0);
    CHECK(movement_exceedance_rate(rows) == doctest::Approx(expect).epsilon(0.035));
    CHECK(std::abs(movement_exceedance_rate(rows) - expect) < 0.01);
}

TEST_CASE("movement_exceedance_rate edge cases") {
    auto rows = generate_dataset(noiseless_spec(500, 1500.0, 1));
    auto all_valid = rows;
    all_valid.erase(std::remove_if(all_valid.begin(), all_valid.end(),
                                   [](const LabeledRow& r) { return !r.sample.label_valid; }),
                    all_valid.end());
    CHECK(movement_exceedance_rate(all_valid) == 0.0);
    auto all_invalid = rows;
    all_invalid.erase(std::remove_if(all_invalid.begin(), all_invalid.end(),
                                     [](const LabeledRow& r) { return r.sample.label_valid; }),
                      all_invalid.end());
    CHECK(movement_exceedance_rate(all_invalid) == 1.0);
    CHECK_THROWS_AS(movement_exceedance_rate({}), DataError);
}

TEST_CASE("generation is identical under different worker counts") {
    DatasetSpec spec = noiseless_spec(4000, 1500.0, 31);
    spec.pl = PathLossModel::umi();
    const auto serial = generate_dataset(spec, 1);
    const auto parallel = generate_dataset(spec, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].sample.d_prev_m == parallel[i].sample.d_prev_m);
        CHECK(serial[i].obs.rsrp_curr_dbm == parallel[i].obs.rsrp_curr_dbm);
    }
}

TEST_CASE("csv round trip, including histories") {
    DatasetSpec spec = noiseless_spec(200, 1500.0, 8);
    spec.pl = PathLossModel::rma();
    spec.history_len = 3;
    const auto rows = generate_dataset(spec);
    std::stringstream ss;
    write_dataset_csv(ss, rows, spec.history_len);
    const auto parsed = read_dataset_csv(ss);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].sample.tau_q_prev == rows[i].sample.tau_q_prev);
        CHECK(parsed[i].sample.label_valid == rows[i].sample.label_valid);
        CHECK(parsed[i].sample.d_prev_m ==
              doctest::Approx(rows[i].sample.d_prev_m).epsilon(1e-10));
        REQUIRE(parsed[i].history.size() == 3);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(parsed[i].history[j].first == rows[i].history[j].first);
            CHECK(parsed[i].history[j].second ==
                  doctest::Approx(rows[i].history[j].second).epsilon(1e-10));
        }
    }
}

TEST_CASE("byte-identical csv for identical spec") {
    DatasetSpec spec = noiseless_spec(500, 2500.0, 77);
    spec.pl = PathLossModel::uma();
    std::stringstream a, b;
    write_dataset_csv(a, generate_dataset(spec, 1), spec.history_len);
    write_dataset_csv(b, generate_dataset(spec, 3), spec.history_len);
    CHECK(a.str() == b.str());
}

TEST_CASE("empty dataset is not an error") {
    DatasetSpec spec = noiseless_spec(0, 1500.0, 1);
    const auto rows = generate_dataset(spec);
    CHECK(rows.empty());
    std::stringstream ss;
    write_dataset_csv(ss, rows, 1);
    CHECK(read_dataset_csv(ss).empty());
}

TEST_CASE("history chaining uses independent positions") {
    DatasetSpec spec = noiseless_spec(2000, 1500.0, 404);
    spec.history_len = 2;
    const auto rows = generate_dataset(spec);
    // oldest history entry differs from the previous-instant entry essentially always
    std::size_t distinct = 0;
    for (const auto& r : rows) {
        REQUIRE(r.history.size() == 2);
        if (r.history[0].first != r.history[1].first) ++distinct;
    }
    CHECK(distinct > rows.size() / 2);
}

TEST_CASE("snap_to_lattice makes TA quantization lossless") {
    DatasetSpec spec = noiseless_spec(2000, 1500.0, 12);
    spec.snap_to_lattice = true;
    const auto rows = generate_dataset(spec);
    for (const auto& r : rows) {
        CHECK(dequantize_ta(r.sample.tau_q_prev, spec.cell) == r.sample.d_prev_m);
        CHECK(dequantize_ta(r.sample.tau_q_curr, spec.cell) == r.sample.d_curr_m);
    }
}

TEST_CASE("all labels valid when the cell cannot exceed the permissible movement") {
    DatasetSpec spec = noiseless_spec(2000, 702.9, 3);
    spec.cell.delta_d_per_m = 702.0;
    const auto rows = generate_dataset(spec);
    std::size_t invalid = 0;
    for (const auto& r : rows) {
        if (!r.sample.label_valid) ++invalid;
    }
    // movement can exceed 702 only inside a sliver of measure (0.9/702.9)^2 / 2
    CHECK(invalid == 0);
}
