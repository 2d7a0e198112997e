#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "spincool/analysis.hpp"
#include "spincool/config.hpp"
#include "spincool/model.hpp"
#include "spincool/trajectory.hpp"

namespace spincool {

// Shortest round-trip decimal form; '.' decimal point, locale-free, so
// identical inputs always produce byte-identical files.
std::string format_double(double v);

// Columns: time_scaled (dimensionless, Gamma_s*t), time_seconds (s, when
// known), jx_norm (dimensionless), leakage (dimensionless, full engine only).
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          bool with_leakage = false);

struct SweepCsvRow {
    std::int64_t n_spins = 0;
    double nbar = 0.0;
    double t1_eff_scaled = 0.0;
    double t1_eff_seconds = -1.0; // < 0 omits the column value
    double residual_rms = 0.0;
};
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepCsvRow>& rows, bool with_seconds);

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows);

// JSON summary skeleton shared by every subcommand: tool metadata, command,
// config echo (linear and angular frequencies), and a deterministic config
// hash standing in for run provenance.
nlohmann::ordered_json summary_skeleton(const std::string& command,
                                        const RunConfig& config);

nlohmann::ordered_json regime_to_json(const RegimeReport& report);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

} // namespace spincool
