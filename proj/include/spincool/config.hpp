#pragma once

#include <cstdint>

#include <filesystem>
#include <string>
#include <vector>

#include "spincool/model.hpp"

namespace spincool {

struct TimeGridSpec {
    double start = 0.0;
    double stop = -1.0; // <= 0 means auto-sized from the cooling-time guess
    std::size_t count = 400;
    bool log_spacing = false;

    bool operator==(const TimeGridSpec&) const = default;

    // Concrete grid in scaled time; start = 0 is dropped for log spacing.
    std::vector<double> build(double auto_stop) const;
};

/// Everything a run needs, bound from the key/value config file. Frequencies
/// stay in linear Hz exactly as written; physical() converts.
struct RunConfig {
    // [model]
    double omega_c_hz = 0.0;
    double omega_s_hz = 0.0;
    double rabi_hz = 0.0;
    double g_hz = 0.0;
    double kappa_hz = 0.0;
    double nbar = 0.0;
    double temperature_k = -1.0; // >= 0 selects temperature input instead of nbar
    std::int64_t n_spins = 0;
    double j_subspace = -1.0; // < 0 means Dicke default N_s/2

    // [markov_engine]
    std::size_t max_dimension = 2'000'001;

    // [lindblad_engine]
    int n_max = -1; // < 0 means N_s
    double leakage_threshold = 1e-6;
    int dense_dim_limit = 24;

    // [analysis]
    std::vector<std::int64_t> n_spins_list;
    std::vector<double> nbar_list;
    std::vector<double> kappa_ratio_list;
    double grid_extent = 6.0;
    std::size_t grid_points = 400;
    double fit_window_fraction = 0.99;
    double noise_floor = 1e-3;
    double agreement_threshold = 0.05;

    // [cli_io]
    std::string engine = "markov"; // markov | full | both
    TimeGridSpec time_grid;
    std::string out_dir = "out";
    int workers = 1;

    bool operator==(const RunConfig&) const = default;

    // Angular-frequency physical parameters; resolves temperature to nbar
    // and the Dicke default for j_subspace.
    PhysicalParams physical() const;
    double effective_nbar() const;
};

// Parses the sectioned key/value format. Unknown sections or keys, duplicate
// keys, malformed values and missing required keys raise ValidationError
// with the offending line. overrides are "section.key=value" strings applied
// after the file content.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

} // namespace spincool
