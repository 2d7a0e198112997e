#include "spincool/runner.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "spincool/analysis.hpp"
#include "spincool/errors.hpp"
#include "spincool/lindblad.hpp"
#include "spincool/operators.hpp"
#include "spincool/output.hpp"
#include "spincool/propagate.hpp"
#include "spincool/rate_matrix.hpp"

namespace spincool {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

double t1_guess_scaled(double n_spins, double nbar) {
    return 1.0 / (n_spins / 2.04 + 2.0 * nbar);
}

SweepOptions sweep_options(const RunConfig& cfg) {
    SweepOptions o;
    o.grid_extent = cfg.grid_extent;
    o.grid_points = cfg.grid_points;
    o.max_dimension = cfg.max_dimension;
    o.workers = cfg.workers;
    return o;
}

json fit_to_json(const FitResult& fit, double gamma_s) {
    return json{{"t1_eff_scaled", fit.t1_eff},
                {"t1_eff_seconds", fit.t1_eff / gamma_s},
                {"unit_scaled", "1/Gamma_s"},
                {"unit_seconds", "s"},
                {"residual_rms", fit.residual_rms},
                {"fit_window_scaled", {fit.window_start, fit.window_end}},
                {"saturation", fit.saturation}};
}

json trajectory_checks(const Trajectory& traj) {
    bool range_ok = true;
    for (double y : traj.jx_norm)
        if (y < -1.0 - 1e-9 || y > 1.0 + 1e-9) range_ok = false;
    return json{{"probability_error", traj.max_probability_error},
                {"probability_conservation_ok", traj.max_probability_error <= 1e-10},
                {"min_population", traj.min_population},
                {"positivity_ok", traj.min_population >= -1e-12},
                {"jx_norm_in_range", range_ok}};
}

void append_warnings(json& doc, const Trajectory& traj) {
    for (const std::string& w : traj.warnings) doc["warnings"].push_back(w);
}

double resolve_j(const RunConfig& cfg, std::int64_t n_spins) {
    if (cfg.j_subspace >= 0.0 && n_spins == cfg.n_spins) return cfg.j_subspace;
    return 0.5 * static_cast<double>(n_spins);
}

std::string n_tag(std::int64_t n) { return "ns" + std::to_string(n); }

json run_simulate_markov(const RunConfig& cfg, const fs::path& out) {
    const PhysicalParams params = cfg.physical();
    const DerivedRates rates = derived_rates(params);
    const double nbar = params.nbar;
    std::vector<std::int64_t> sizes = cfg.n_spins_list;
    if (sizes.empty()) sizes = {cfg.n_spins};

    json doc = summary_skeleton("simulate-markov", cfg);
    doc["gamma_s_per_s"] = rates.gamma_s;
    json curves = json::array();
    for (std::int64_t n : sizes) {
        const double j = resolve_j(cfg, n);
        const RateMatrix m = build_rate_matrix(j, nbar, cfg.max_dimension);
        const std::vector<double> grid =
            cfg.time_grid.build(cfg.grid_extent * t1_guess_scaled(double(n), nbar));
        const Trajectory traj =
            propagate(m, maximally_mixed(j), grid, rates.gamma_s);
        const fs::path file = out / ("markov_" + n_tag(n) + ".csv");
        write_trajectory_csv(file, traj);
        append_warnings(doc, traj);
        curves.push_back(json{{"n_spins", n},
                              {"j", j},
                              {"file", file.filename().string()},
                              {"final_jx_norm", traj.jx_norm.back()},
                              {"checks", trajectory_checks(traj)}});
    }
    doc["curves"] = std::move(curves);
    return doc;
}

json run_simulate_full(const RunConfig& cfg, const fs::path& out) {
    const PhysicalParams params = cfg.physical();
    const DerivedRates rates = derived_rates(params);
    const double j = resolve_j(cfg, cfg.n_spins);
    const int n_max =
        cfg.n_max >= 0 ? cfg.n_max : static_cast<int>(cfg.n_spins);
    const double dim = (2.0 * j + 1.0) * (n_max + 1);
    if (dim > 4096)
        throw ValidationError(
            "simulate-full: joint dimension " + std::to_string(int(dim)) +
            " too large for the full simulator; reduce n_spins or n_max");

    const std::vector<double> grid = cfg.time_grid.build(
        cfg.grid_extent * t1_guess_scaled(double(cfg.n_spins), params.nbar));
    std::vector<double> seconds(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) seconds[i] = grid[i] / rates.gamma_s;

    const SparseOp h = exchange_hamiltonian(j, n_max, params.g);
    const Liouvillian liou(h, params.kappa, params.nbar, n_max);
    EvolveOptions eopt;
    eopt.leakage_threshold = cfg.leakage_threshold;
    eopt.dense_dim_limit = cfg.dense_dim_limit;
    const Trajectory traj =
        evolve(initial_state(j, n_max, params.nbar), liou, seconds, rates.gamma_s, eopt);

    json doc = summary_skeleton("simulate-full", cfg);
    doc["gamma_s_per_s"] = rates.gamma_s;
    doc["n_max"] = n_max;
    if (params.nbar > 0.0)
        doc["warnings"].push_back(
            "full-simulator runs with nbar > 0 extend beyond the regime the "
            "rate-equation agreement has been validated in (zero-temperature, "
            "matched detuning); interpret accordingly");
    const fs::path file = out / ("full_" + n_tag(cfg.n_spins) + ".csv");
    write_trajectory_csv(file, traj, /*with_leakage=*/true);
    append_warnings(doc, traj);
    double max_leak = 0.0;
    for (double l : traj.leakage) max_leak = std::max(max_leak, l);
    doc["curve"] = json{{"n_spins", cfg.n_spins},
                        {"j", j},
                        {"file", file.filename().string()},
                        {"final_jx_norm", traj.jx_norm.back()},
                        {"max_leakage", max_leak},
                        {"final_cavity_occupation", traj.cavity_occupation.back()},
                        {"checks", trajectory_checks(traj)}};
    return doc;
}

json run_compare(const RunConfig& cfg, const fs::path& out) {
    const PhysicalParams params = cfg.physical();
    const double j = resolve_j(cfg, cfg.n_spins);
    std::vector<double> ratios = cfg.kappa_ratio_list;
    if (ratios.empty()) ratios = {0.5, 1.0, 5.0, 10.0};
    const std::vector<double> grid =
        cfg.time_grid.build(/*auto_stop=*/5.0);

    CompareOptions copt;
    copt.n_max = cfg.n_max;
    copt.leakage_threshold = cfg.leakage_threshold;
    copt.noise_floor = cfg.noise_floor;
    copt.workers = cfg.workers;
    const MarkovFullComparison cmp =
        compare_markov_full(j, params.g, ratios, grid, copt);

    json doc = summary_skeleton("compare", cfg);
    doc["tolerances"] = {{"agreement_threshold", cfg.agreement_threshold},
                         {"noise_floor", cfg.noise_floor},
                         {"leakage_threshold", cfg.leakage_threshold}};
    write_comparison_csv(out / "compare_summary.csv", cmp.rows);
    json rows = json::array();
    bool monotone = true;
    for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
        const ComparisonRow& r = cmp.rows[i];
        if (i > 0 && r.max_abs_deviation > cmp.rows[i - 1].max_abs_deviation + 1e-12)
            monotone = false;
        const std::string tag = "r" + format_double(r.kappa_ratio);
        write_trajectory_csv(out / ("compare_markov_" + tag + ".csv"), cmp.markov[i]);
        write_trajectory_csv(out / ("compare_full_" + tag + ".csv"), cmp.full[i],
                             /*with_leakage=*/true);
        for (const std::string& w : r.warnings) doc["warnings"].push_back(w);
        rows.push_back(json{{"kappa_ratio", r.kappa_ratio},
                            {"kappa_rad_per_s", r.kappa},
                            {"gamma_s_per_s", r.gamma_s},
                            {"max_abs_deviation", r.max_abs_deviation},
                            {"rms_deviation", r.rms_deviation},
                            {"oscillating", r.oscillating},
                            {"oscillation_amplitude", r.oscillation_amplitude},
                            {"max_leakage", r.max_leakage}});
    }
    doc["rows"] = std::move(rows);
    doc["checks"] = {
        {"deviation_at_largest_ratio",
         cmp.rows.back().max_abs_deviation},
        {"agreement_at_largest_ratio_ok",
         cmp.rows.back().max_abs_deviation <= cfg.agreement_threshold},
        {"deviation_monotone_decreasing", monotone}};
    return doc;
}

json run_fit_t1(const RunConfig& cfg, const fs::path& out) {
    const PhysicalParams params = cfg.physical();
    const DerivedRates rates = derived_rates(params);
    const FitResult fit = cooling_fit(cfg.n_spins, params.nbar, sweep_options(cfg));

    json doc = summary_skeleton("fit-t1", cfg);
    doc["gamma_s_per_s"] = rates.gamma_s;
    doc["fit"] = fit_to_json(fit, rates.gamma_s);
    write_sweep_csv(out / "fit_t1.csv",
                    {SweepCsvRow{cfg.n_spins, params.nbar, fit.t1_eff,
                                 fit.t1_eff / rates.gamma_s, fit.residual_rms}},
                    /*with_seconds=*/true);
    return doc;
}

json run_sweep_size(const RunConfig& cfg, const fs::path& out) {
    if (cfg.n_spins_list.size() < 4)
        throw ValidationError(
            "sweep-size: analysis.n_spins_list needs at least 4 sizes");
    const PhysicalParams params = cfg.physical();
    const DerivedRates rates = derived_rates(params);
    const SizeSweepResult sweep =
        sweep_t1_vs_size(cfg.n_spins_list, params.nbar, rates.gamma_s,
                         sweep_options(cfg));

    std::vector<SweepCsvRow> rows;
    for (const SizeSweepPoint& p : sweep.points)
        rows.push_back(SweepCsvRow{p.n_spins, params.nbar, p.fit.t1_eff,
                                   p.fit.t1_eff / rates.gamma_s,
                                   p.fit.residual_rms});
    write_sweep_csv(out / "sweep_size.csv", rows, /*with_seconds=*/true);

    json doc = summary_skeleton("sweep-size", cfg);
    doc["gamma_s_per_s"] = rates.gamma_s;
    json points = json::array();
    for (const SizeSweepPoint& p : sweep.points)
        points.push_back(json{{"n_spins", p.n_spins},
                              {"fit", fit_to_json(p.fit, rates.gamma_s)}});
    doc["points"] = std::move(points);
    if (sweep.aborted) {
        doc["error"] = sweep.error;
        write_json(out / "sweep_size_summary.json", doc);
        throw NumericsError("sweep-size aborted (partial results written): " +
                            sweep.error);
    }
    doc["power_law"] = json{{"lambda", sweep.power_law.lambda},
                            {"gamma", sweep.power_law.gamma},
                            {"r_squared", sweep.power_law.r_squared}};
    // consequence of the power law at the configured parameters
    doc["analytic_t1_seconds_at_n_spins"] =
        1.0 / (rates.gamma_s * 0.5 * static_cast<double>(cfg.n_spins));
    return doc;
}

json run_sweep_thermal(const RunConfig& cfg, const fs::path& out) {
    if (cfg.nbar_list.empty())
        throw ValidationError("sweep-thermal: analysis.nbar_list is required");
    std::vector<std::int64_t> sizes = cfg.n_spins_list;
    if (sizes.empty()) sizes = {cfg.n_spins};
    const PhysicalParams params = cfg.physical();
    const DerivedRates rates = derived_rates(params);
    const ThermalSweepResult sweep =
        thermal_sweep(sizes, cfg.nbar_list, sweep_options(cfg));

    std::vector<SweepCsvRow> rows;
    for (const ThermalCell& c : sweep.cells)
        if (c.ok)
            rows.push_back(SweepCsvRow{c.n_spins, c.nbar, c.fit.t1_eff,
                                       c.fit.t1_eff / rates.gamma_s,
                                       c.fit.residual_rms});
    write_sweep_csv(out / "sweep_thermal.csv", rows, /*with_seconds=*/true);

    json doc = summary_skeleton("sweep-thermal", cfg);
    doc["gamma_s_per_s"] = rates.gamma_s;
    json cells = json::array();
    for (const ThermalCell& c : sweep.cells) {
        json cell{{"n_spins", c.n_spins},
                  {"nbar", c.nbar},
                  {"reference_t1_scaled",
                   {{"small_nbar_2_over_ns", c.ref_small_nbar},
                    {"large_nbar_1_over_2nbar",
                     std::isfinite(c.ref_large_nbar) ? json(c.ref_large_nbar)
                                                     : json()}}},
                  {"equilibrium_jx", c.equilibrium_jx},
                  {"equilibrium_polarization", c.equilibrium_polarization}};
        if (c.ok)
            cell["fit"] = fit_to_json(c.fit, rates.gamma_s);
        else {
            cell["error"] = c.error;
            doc["warnings"].push_back("cell (N_s=" + std::to_string(c.n_spins) +
                                      ", nbar=" + format_double(c.nbar) +
                                      "): " + c.error);
        }
        cells.push_back(std::move(cell));
    }
    doc["cells"] = std::move(cells);
    return doc;
}

json run_check_regime(const RunConfig& cfg, const fs::path&) {
    const PhysicalParams params = cfg.physical();
    const RegimeReport report = check_regime(params);
    const DerivedRates rates = derived_rates(params);

    json doc = summary_skeleton("check-regime", cfg);
    doc["rates"] = {{"detuning_rad_per_s", rates.detuning},
                    {"delta_minus_rad_per_s", rates.delta_minus},
                    {"delta_plus_rad_per_s", rates.delta_plus},
                    {"gamma_s_per_s", rates.gamma_s},
                    {"omega_s_eff_rad_per_s", rates.omega_s_eff},
                    {"gamma_0_per_s", rates.gamma_0},
                    {"gamma_minus_per_s", rates.gamma_minus},
                    {"gamma_plus_per_s", rates.gamma_plus}};
    doc["regime"] = regime_to_json(report);

    const auto line = [](const std::string& name, bool ok, double margin) {
        std::cout << "  " << name << ": " << (ok ? "pass" : "FAIL")
                  << " (margin " << format_double(margin) << ")\n";
    };
    std::cout << "regime report:\n";
    line("rwa1 omega_c >> kappa", report.rwa1_vs_kappa.ok, report.rwa1_vs_kappa.margin);
    line("rwa1 omega_c >> rabi", report.rwa1_vs_rabi.ok, report.rwa1_vs_rabi.margin);
    line("rwa1 omega_c >> g", report.rwa1_vs_g.ok, report.rwa1_vs_g.margin);
    line("rwa2 rabi >> kappa", report.rwa2.ok, report.rwa2.margin);
    line("ensemble size N_s << kappa^2/g^2", report.size_ok, report.size.margin);
    line("markov strict kappa >= 10 g sqrt(N_s)", report.markov_ok,
         report.markov.margin);
    std::cout << "  N_s << kappa^2/g^2 bound = " << format_double(report.n_spins_bound)
              << " (N_s = " << cfg.n_spins << ")\n";
    std::cout << "  overall: " << (report.all_ok() ? "pass" : "FAIL") << "\n";
    return doc;
}

} // namespace

json run_command(const std::string& command, const RunConfig& cfg,
                 const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    json doc;
    if (command == "simulate-markov") doc = run_simulate_markov(cfg, out_dir);
    else if (command == "simulate-full") doc = run_simulate_full(cfg, out_dir);
    else if (command == "compare") doc = run_compare(cfg, out_dir);
    else if (command == "fit-t1") doc = run_fit_t1(cfg, out_dir);
    else if (command == "sweep-size") doc = run_sweep_size(cfg, out_dir);
    else if (command == "sweep-thermal") doc = run_sweep_thermal(cfg, out_dir);
    else if (command == "check-regime") doc = run_check_regime(cfg, out_dir);
    else throw ValidationError("unknown command '" + command + "'");

    const std::string stem =
        command == "check-regime" ? "check_regime" : std::string(command);
    std::string file = stem;
    std::replace(file.begin(), file.end(), '-', '_');
    write_json(out_dir / (file + "_summary.json"), doc);
    return doc;
}

} // namespace spincool
