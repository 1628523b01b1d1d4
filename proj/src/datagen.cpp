#include "smartpur/datagen.hpp"

#include "smartpur/errors.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace smartpur {

void DatasetSpec::validate() const {
    cell.validate();
    radio.validate();
    meas.validate();
    if (velocity_max_kmh < 0.0) {
        throw std::invalid_argument("DatasetSpec: velocity_max_kmh must be >= 0");
    }
    if (history_len < 1) {
        throw std::invalid_argument("DatasetSpec: history_len must be >= 1");
    }
}

double sample_position(const CellConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, cfg.r_cell_m);
    return dist(rng);
}

namespace {

LabeledRow generate_row(const DatasetSpec& spec, std::uint64_t row_index) {
    std::mt19937_64 rng(derive_seed(spec.seed, row_index));

    // Chain of history_len + 1 independent positions ending at the current one.
    std::vector<double> positions(spec.history_len + 1);
    for (double& p : positions) {
        p = sample_position(spec.cell, rng);
        if (spec.snap_to_lattice) {
            p = dequantize_ta(quantize_ta(p, spec.cell), spec.cell);
        }
    }
    std::uniform_real_distribution<double> vel(0.0, spec.velocity_max_kmh);
    const double velocity = spec.velocity_max_kmh > 0.0 ? vel(rng) : 0.0;

    const std::vector<double> rsrps =
        measure_rsrp_chain(rng, positions, velocity, spec.pl, spec.radio, spec.meas);

    LabeledRow row;
    const std::size_t prev = spec.history_len - 1; // index of instant i-1
    const std::size_t curr = spec.history_len;
    row.sample.d_prev_m = positions[prev];
    row.sample.d_curr_m = positions[curr];
    row.sample.velocity_kmh = velocity;
    row.sample.tau_q_prev = quantize_ta(positions[prev], spec.cell);
    row.sample.tau_q_curr = quantize_ta(positions[curr], spec.cell);
    row.sample.label_valid = label_validity(positions[prev], positions[curr], spec.cell);
    row.obs = delta_rsrp(rsrps[prev], rsrps[curr], spec.pl.k);
    row.history.reserve(spec.history_len);
    for (std::size_t j = 0; j < spec.history_len; ++j) {
        row.history.emplace_back(quantize_ta(positions[j], spec.cell), rsrps[j]);
    }
    return row;
}

} // namespace

std::vector<LabeledRow> generate_dataset(const DatasetSpec& spec, int jobs) {
    spec.validate();
    std::vector<LabeledRow> rows(spec.n_samples);
    const std::size_t n = spec.n_samples;
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            rows[i] = generate_row(spec, static_cast<std::uint64_t>(i));
        }
        return rows;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                rows[i] = generate_row(spec, static_cast<std::uint64_t>(i));
            }
        });
    }
    for (auto& t : pool) t.join();
    return rows;
}

double movement_exceedance_rate(const std::vector<LabeledRow>& rows) {
    if (rows.empty()) {
        throw DataError("movement_exceedance_rate: empty dataset");
    }
    std::size_t exceeded = 0;
    for (const auto& r : rows) {
        if (!r.sample.label_valid) ++exceeded;
    }
    return static_cast<double>(exceeded) / static_cast<double>(rows.size());
}

namespace {

void append_number(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    line += buf;
}

} // namespace

void write_dataset_csv(std::ostream& out, const std::vector<LabeledRow>& rows,
                       std::size_t history_len) {
    std::string header = "d_prev_m,d_curr_m,velocity_kmh,tau_q_prev,tau_q_curr,"
                         "rsrp_prev_dbm,rsrp_curr_dbm,delta_p_db,label_valid";
    for (std::size_t j = 1; j < history_len; ++j) {
        header += ",tau_q_h" + std::to_string(j) + ",rsrp_h" + std::to_string(j) + "_dbm";
    }
    out << header << "\n";
    std::string line;
    for (const auto& r : rows) {
        line.clear();
        append_number(line, r.sample.d_prev_m);
        line += ',';
        append_number(line, r.sample.d_curr_m);
        line += ',';
        append_number(line, r.sample.velocity_kmh);
        line += ',';
        line += std::to_string(r.sample.tau_q_prev);
        line += ',';
        line += std::to_string(r.sample.tau_q_curr);
        line += ',';
        append_number(line, r.obs.rsrp_prev_dbm);
        line += ',';
        append_number(line, r.obs.rsrp_curr_dbm);
        line += ',';
        append_number(line, r.obs.delta_p_db);
        line += ',';
        line += r.sample.label_valid ? '1' : '0';
        // history columns hold instants i-1-j, i.e. history entries before the last
        for (std::size_t j = 1; j < history_len; ++j) {
            const auto& h = r.history[history_len - 1 - j];
            line += ',';
            line += std::to_string(h.first);
            line += ',';
            append_number(line, h.second);
        }
        out << line << "\n";
    }
}

std::vector<LabeledRow> read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("dataset CSV: missing header");
    }
    const std::string base = "d_prev_m,d_curr_m,velocity_kmh,tau_q_prev,tau_q_curr,"
                             "rsrp_prev_dbm,rsrp_curr_dbm,delta_p_db,label_valid";
    if (line.rfind(base, 0) != 0) {
        throw DataError("dataset CSV: unexpected header '" + line + "'");
    }
    std::size_t n_cols = 1;
    for (char c : line) {
        if (c == ',') ++n_cols;
    }
    if (n_cols < 9 || (n_cols - 9) % 2 != 0) {
        throw DataError("dataset CSV: malformed header column count");
    }
    const std::size_t history_len = 1 + (n_cols - 9) / 2;

    std::vector<LabeledRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            fields.push_back(f);
        }
        if (fields.size() != n_cols) {
            throw DataError("dataset CSV: line " + std::to_string(line_no) +
                            " has " + std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(n_cols));
        }
        try {
            LabeledRow r;
            r.sample.d_prev_m = std::stod(fields[0]);
            r.sample.d_curr_m = std::stod(fields[1]);
            r.sample.velocity_kmh = std::stod(fields[2]);
            r.sample.tau_q_prev = std::stol(fields[3]);
            r.sample.tau_q_curr = std::stol(fields[4]);
            r.obs.rsrp_prev_dbm = std::stod(fields[5]);
            r.obs.rsrp_curr_dbm = std::stod(fields[6]);
            r.obs.delta_p_db = std::stod(fields[7]);
            r.sample.label_valid = fields[8] == "1";
            r.history.assign(history_len, {0, 0.0});
            r.history[history_len - 1] = {r.sample.tau_q_prev, r.obs.rsrp_prev_dbm};
            for (std::size_t j = 1; j < history_len; ++j) {
                r.history[history_len - 1 - j] = {std::stol(fields[9 + 2 * (j - 1)]),
                                                  std::stod(fields[9 + 2 * (j - 1) + 1])};
            }
            rows.push_back(std::move(r));
        } catch (const std::invalid_argument&) {
            throw DataError("dataset CSV: unparsable number at line " + std::to_string(line_no));
        } catch (const std::out_of_range&) {
            throw DataError("dataset CSV: value out of range at line " + std::to_string(line_no));
        }
    }
    return rows;
}

} // namespace smartpur
