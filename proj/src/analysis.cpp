#include "spincool/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spincool/errors.hpp"
#include "spincool/lindblad.hpp"
#include "spincool/operators.hpp"
#include "spincool/parallel.hpp"
#include "spincool/propagate.hpp"
#include "spincool/rate_matrix.hpp"

namespace spincool {

namespace {

std::vector<double> linear_grid(double stop, std::size_t count) {
    // excludes 0 (the initial point carries no fit information)
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = stop * static_cast<double>(i + 1) / static_cast<double>(count);
    return g;
}

// Guess for the cooling time constant in scaled units, combining the
// zero-temperature law T1 ~ 2/N_s with the hot-cavity law T1 ~ 1/(2 nbar)
// as parallel rates; used only to size the simulation grid.
double t1_guess_scaled(double n_spins, double nbar) {
    return 1.0 / (n_spins / 2.04 + 2.0 * nbar);
}

} // namespace

FitResult cooling_fit(std::int64_t n_spins, double nbar,
                      const SweepOptions& opts) {
    const double j = 0.5 * static_cast<double>(n_spins);
    const RateMatrix m = build_rate_matrix(j, nbar, opts.max_dimension);
    const PopulationVector p0 = maximally_mixed(j);

    FitOptions fopt;
    fopt.saturation = j > 0.0 ? -equilibrium_jx(j, nbar) / j : 1.0;

    double extent = opts.grid_extent * t1_guess_scaled(double(n_spins), nbar);
    for (int attempt = 0;; ++attempt) {
        const std::vector<double> grid = linear_grid(extent, opts.grid_points);
        const Trajectory traj = propagate(m, p0, grid);
        try {
            return fit_t1_eff(traj, fopt);
        } catch (const ValidationError&) {
            if (attempt >= opts.saturation_retries) throw;
            extent *= 4.0;
        }
    }
}

PowerLawResult fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("fit_power_law: need >= 2 matching samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw ValidationError("fit_power_law: samples must be positive");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw ValidationError("fit_power_law: degenerate abscissae");
    PowerLawResult out;
    out.gamma = (n * sxy - sx * sy) / denom;
    out.lambda = std::exp((sy - out.gamma * sx) / n);
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    const double intercept = (sy - out.gamma * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = std::log(y[i]) - (intercept + out.gamma * std::log(x[i]));
        ss_res += r * r;
    }
    out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return out;
}

SizeSweepResult sweep_t1_vs_size(std::span<const std::int64_t> n_list,
                                 double nbar, double gamma_s,
                                 const SweepOptions& opts) {
    (void)gamma_s; // the regression is scale-free; seconds enter at output time
    if (n_list.size() < 4)
        throw ValidationError("sweep_t1_vs_size: need at least 4 ensemble sizes");
    for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
        if (n_list[i + 1] <= n_list[i])
            throw ValidationError("sweep_t1_vs_size: sizes must be strictly increasing");
    if (nbar < 0.0) throw ValidationError("sweep_t1_vs_size: nbar must be >= 0");

    struct Slot {
        bool ok = false;
        std::string error;
        SizeSweepPoint point;
    };
    std::vector<Slot> slots(n_list.size());
    parallel_for(n_list.size(), opts.workers, [&](std::size_t i) {
        Slot& s = slots[i];
        s.point.n_spins = n_list[i];
        s.point.j = 0.5 * static_cast<double>(n_list[i]);
        try {
            s.point.fit = cooling_fit(n_list[i], nbar, opts);
            s.ok = true;
        } catch (const std::exception& e) {
            s.error = e.what();
        }
    });

    SizeSweepResult out;
    for (const Slot& s : slots) {
        if (!s.ok) {
            out.aborted = true;
            out.error = "N_s = " + std::to_string(s.point.n_spins) + ": " + s.error;
            break; // keep the completed prefix
        }
        out.points.push_back(s.point);
    }
    if (!out.aborted) {
        std::vector<double> two_j(out.points.size()), t1(out.points.size());
        for (std::size_t i = 0; i < out.points.size(); ++i) {
            two_j[i] = 2.0 * out.points[i].j;
            t1[i] = out.points[i].fit.t1_eff;
        }
        out.power_law = fit_power_law(two_j, t1);
    }
    return out;
}

OscillationReport detect_oscillations(std::span<const double> values,
                                      double noise_floor) {
    if (values.size() < 10)
        throw ValidationError("detect_oscillations: need at least 10 samples");
    OscillationReport rep;
    double running_max = values.front();
    for (double v : values) {
        rep.amplitude = std::max(rep.amplitude, running_max - v);
        running_max = std::max(running_max, v);
    }
    rep.oscillating = rep.amplitude > noise_floor;
    return rep;
}

OscillationReport detect_oscillations(const Trajectory& traj, double noise_floor) {
    return detect_oscillations(std::span<const double>(traj.jx_norm), noise_floor);
}

MarkovFullComparison compare_markov_full(double j, double g,
                                         std::span<const double> kappa_ratios,
                                         std::span<const double> times_scaled,
                                         const CompareOptions& opts) {
    if (!(g > 0.0)) throw ValidationError("compare_markov_full: g must be positive");
    if (kappa_ratios.empty() || times_scaled.empty())
        throw ValidationError("compare_markov_full: empty ratio or time grid");
    const double n_spins = 2.0 * j;
    const int n_max = opts.n_max >= 1 ? opts.n_max
                                      : static_cast<int>(std::llround(n_spins));

    MarkovFullComparison cmp;
    cmp.times_scaled.assign(times_scaled.begin(), times_scaled.end());
    cmp.rows.resize(kappa_ratios.size());
    cmp.markov.resize(kappa_ratios.size());
    cmp.full.resize(kappa_ratios.size());

    const RateMatrix m = build_rate_matrix(j, 0.0);
    const PopulationVector p0 = maximally_mixed(j);
    const SparseOp h = exchange_hamiltonian(j, n_max, g);

    parallel_for(kappa_ratios.size(), opts.workers, [&](std::size_t i) {
        ComparisonRow& row = cmp.rows[i];
        row.kappa_ratio = kappa_ratios[i];
        row.kappa = kappa_ratios[i] * g * std::sqrt(n_spins);
        row.gamma_s = g * g / row.kappa;

        cmp.markov[i] = propagate(m, p0, times_scaled, row.gamma_s);

        std::vector<double> seconds(times_scaled.size());
        for (std::size_t k = 0; k < times_scaled.size(); ++k)
            seconds[k] = times_scaled[k] / row.gamma_s;
        const Liouvillian liou(h, row.kappa, 0.0, n_max);
        EvolveOptions eopt;
        eopt.leakage_threshold = opts.leakage_threshold;
        cmp.full[i] = evolve(initial_state(j, n_max, 0.0), liou, seconds,
                             row.gamma_s, eopt);

        double max_abs = 0.0, sumsq = 0.0;
        for (std::size_t k = 0; k < times_scaled.size(); ++k) {
            const double d = std::abs(cmp.full[i].jx_norm[k] - cmp.markov[i].jx_norm[k]);
            max_abs = std::max(max_abs, d);
            sumsq += d * d;
        }
        row.max_abs_deviation = max_abs;
        row.rms_deviation = std::sqrt(sumsq / static_cast<double>(times_scaled.size()));
        const OscillationReport osc =
            detect_oscillations(cmp.full[i], opts.noise_floor);
        row.oscillating = osc.oscillating;
        row.oscillation_amplitude = osc.amplitude;
        for (double leak : cmp.full[i].leakage)
            row.max_leakage = std::max(row.max_leakage, leak);
        row.warnings = cmp.full[i].warnings;
    });
    return cmp;
}

ThermalSweepResult thermal_sweep(std::span<const std::int64_t> n_list,
                                 std::span<const double> nbar_grid,
                                 const SweepOptions& opts) {
    if (n_list.empty() || nbar_grid.empty())
        throw ValidationError("thermal_sweep: empty grid");
    for (double nb : nbar_grid)
        if (nb < 0.0) throw ValidationError("thermal_sweep: nbar must be >= 0");

    ThermalSweepResult out;
    out.cells.resize(n_list.size() * nbar_grid.size());
    parallel_for(out.cells.size(), opts.workers, [&](std::size_t idx) {
        const std::size_t in = idx / nbar_grid.size();
        const std::size_t ib = idx % nbar_grid.size();
        ThermalCell& cell = out.cells[idx];
        cell.n_spins = n_list[in];
        cell.nbar = nbar_grid[ib];
        const double j = 0.5 * static_cast<double>(cell.n_spins);
        cell.equilibrium_jx = equilibrium_jx(j, cell.nbar);
        cell.equilibrium_polarization = j > 0.0 ? -cell.equilibrium_jx / j : 0.0;
        cell.ref_small_nbar = 2.0 / static_cast<double>(cell.n_spins);
        cell.ref_large_nbar = cell.nbar > 0.0
                                  ? 1.0 / (2.0 * cell.nbar)
                                  : std::numeric_limits<double>::infinity();
        try {
            cell.fit = cooling_fit(cell.n_spins, cell.nbar, opts);
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    });
    return out;
}

} // namespace spincool
