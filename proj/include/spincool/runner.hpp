#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "spincool/config.hpp"

namespace spincool {

// Executes one subcommand end to end: runs the physics, writes the CSV
// artifacts and the JSON summary under out_dir, and returns the summary.
// ValidationError / NumericsError propagate to the caller; a numerical
// abort flushes the partial artifacts and summary first.
nlohmann::ordered_json run_command(const std::string& command,
                                   const RunConfig& config,
                                   const std::filesystem::path& out_dir);

} // namespace spincool
