#include "spincool/output.hpp"

#include <charconv>
#include <fstream>

#include <nlohmann/json.hpp>

#include "spincool/constants.hpp"
#include "spincool/errors.hpp"
#include "spincool/version.hpp"

namespace spincool {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary); // binary: no platform newline games
    if (!out)
        throw ValidationError("cannot write '" + path.string() + "'");
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          bool with_leakage) {
    const bool with_seconds = !traj.times_seconds.empty();
    auto out = open_for_write(path);
    out << "time_scaled";
    if (with_seconds) out << ",time_seconds";
    out << ",jx_norm";
    if (with_leakage) out << ",leakage";
    out << "\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_double(traj.times[i]);
        if (with_seconds) out << "," << format_double(traj.times_seconds[i]);
        out << "," << format_double(traj.jx_norm[i]);
        if (with_leakage) out << "," << format_double(traj.leakage[i]);
        out << "\n";
    }
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepCsvRow>& rows, bool with_seconds) {
    auto out = open_for_write(path);
    out << "n_spins,nbar,t1_eff_scaled";
    if (with_seconds) out << ",t1_eff_seconds";
    out << ",residual_rms\n";
    for (const SweepCsvRow& r : rows) {
        out << r.n_spins << "," << format_double(r.nbar) << ","
            << format_double(r.t1_eff_scaled);
        if (with_seconds) out << "," << format_double(r.t1_eff_seconds);
        out << "," << format_double(r.residual_rms) << "\n";
    }
}

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows) {
    auto out = open_for_write(path);
    out << "kappa_ratio,max_abs_deviation,rms_deviation,oscillating,"
           "oscillation_amplitude,max_leakage\n";
    for (const ComparisonRow& r : rows)
        out << format_double(r.kappa_ratio) << "," << format_double(r.max_abs_deviation)
            << "," << format_double(r.rms_deviation) << "," << (r.oscillating ? 1 : 0)
            << "," << format_double(r.oscillation_amplitude) << ","
            << format_double(r.max_leakage) << "\n";
}

nlohmann::ordered_json summary_skeleton(const std::string& command,
                                        const RunConfig& config) {
    nlohmann::ordered_json doc;
    doc["tool"] = {{"name", "spincool"}, {"version", version_string}};
    doc["command"] = command;

    const std::string canonical = serialize_config(config);
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical)));
    doc["run"] = {{"config_hash", hash}};

    nlohmann::ordered_json model;
    const auto both = [](double hz) {
        return nlohmann::ordered_json{{"hz", hz}, {"rad_per_s", constants::two_pi * hz}};
    };
    model["omega_c"] = both(config.omega_c_hz);
    model["omega_s"] = both(config.omega_s_hz);
    model["rabi"] = both(config.rabi_hz);
    model["g"] = both(config.g_hz);
    model["kappa"] = both(config.kappa_hz);
    model["nbar"] = config.effective_nbar();
    if (config.temperature_k >= 0.0) model["temperature_k"] = config.temperature_k;
    model["n_spins"] = config.n_spins;
    model["j_subspace"] = config.j_subspace >= 0.0
                              ? config.j_subspace
                              : 0.5 * static_cast<double>(config.n_spins);
    doc["config"] = {{"model", model},
                     {"engine", config.engine},
                     {"serialized", canonical}};
    doc["units"] = {{"time_scaled", "dimensionless (Gamma_s * t)"},
                    {"time_seconds", "s"},
                    {"t1_eff_scaled", "dimensionless (T1 * Gamma_s)"},
                    {"t1_eff_seconds", "s"},
                    {"frequencies", "hz = linear; rad_per_s = angular"}};
    doc["warnings"] = nlohmann::ordered_json::array();
    return doc;
}

nlohmann::ordered_json regime_to_json(const RegimeReport& r) {
    const auto check = [](const RegimeCheck& c) {
        return nlohmann::ordered_json{
            {"ratio", c.ratio}, {"margin", c.margin}, {"ok", c.ok}};
    };
    nlohmann::ordered_json doc;
    doc["rwa1"] = {{"omega_c_vs_kappa", check(r.rwa1_vs_kappa)},
                   {"omega_c_vs_rabi", check(r.rwa1_vs_rabi)},
                   {"omega_c_vs_g", check(r.rwa1_vs_g)},
                   {"ok", r.rwa1_ok}};
    doc["rwa2"] = {{"rabi_vs_kappa", check(r.rwa2)}, {"ok", r.rwa2_ok}};
    doc["markov_strict"] = {{"kappa_vs_10_g_sqrt_ns", check(r.markov)},
                            {"ok", r.markov_ok}};
    doc["ensemble_size"] = {{"n_spins_bound", r.n_spins_bound},
                            {"bound_vs_10_n_spins", check(r.size)},
                            {"ok", r.size_ok}};
    doc["dominance"] = {{"gamma_plus_over_minus", r.dominance_plus},
                        {"gamma_zero_over_minus", r.dominance_zero}};
    doc["all_ok"] = r.all_ok();
    return doc;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
    auto out = open_for_write(path);
    out << doc.dump(2) << "\n";
}

} // namespace spincool
