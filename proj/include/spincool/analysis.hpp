#pragma once

#include <cstdint>

#include <span>
#include <string>
#include <vector>

#include "spincool/fit.hpp"
#include "spincool/trajectory.hpp"

namespace spincool {

struct PowerLawResult {
    double lambda = 0.0;    // prefactor of T1*Gamma_s = lambda * (2J)^gamma
    double gamma = 0.0;     // exponent
    double r_squared = 0.0; // goodness of the log-log regression
};

struct SweepOptions {
    // Time grid protocol for the per-point simulations: `grid_points` linear
    // samples over [0, grid_extent * T1_guess].
    double grid_extent = 6.0;
    std::size_t grid_points = 400;
    // Retries with a 4x longer grid when a trajectory has not saturated.
    int saturation_retries = 2;
    std::size_t max_dimension = 2'000'001;
    int workers = 1;
};

// Propagate one Dicke subspace from the maximally mixed state and fit the
// saturation curve (scaled units). Retries with longer grids until the
// trajectory saturates, then gives up with the fit-window error.
FitResult cooling_fit(std::int64_t n_spins, double nbar,
                      const SweepOptions& opts = {});

struct SizeSweepPoint {
    std::int64_t n_spins = 0;
    double j = 0.0;
    FitResult fit; // scaled units (T1 * Gamma_s)
};

struct SizeSweepResult {
    std::vector<SizeSweepPoint> points;
    PowerLawResult power_law;
    bool aborted = false;  // propagation failed; points holds the completed prefix
    std::string error;
};

// T1 power law across ensemble sizes at fixed nbar, Dicke subspace J = N_s/2.
// Requires at least 4 sizes, strictly increasing. gamma_s only scales the
// seconds-facing outputs; the regression runs on scaled time constants.
SizeSweepResult sweep_t1_vs_size(std::span<const std::int64_t> n_list,
                                 double nbar, double gamma_s,
                                 const SweepOptions& opts = {});

struct OscillationReport {
    bool oscillating = false;
    double amplitude = 0.0; // largest drop below the running maximum
};

// A curve oscillates when some sample sits more than noise_floor below the
// running maximum of the samples before it. Requires >= 10 samples.
OscillationReport detect_oscillations(std::span<const double> values,
                                      double noise_floor = 1e-3);
OscillationReport detect_oscillations(const Trajectory& traj,
                                      double noise_floor = 1e-3);

struct CompareOptions {
    int n_max = -1; // cavity truncation; -1 means N_s
    double leakage_threshold = 1e-6;
    double noise_floor = 1e-3;
    int workers = 1;
};

struct ComparisonRow {
    double kappa_ratio = 0.0; // kappa / (g sqrt(N_s))
    double kappa = 0.0;       // rad/s
    double gamma_s = 0.0;     // g^2 / kappa
    double max_abs_deviation = 0.0;
    double rms_deviation = 0.0;
    bool oscillating = false;
    double oscillation_amplitude = 0.0;
    double max_leakage = 0.0;
    std::vector<std::string> warnings;
};

struct MarkovFullComparison {
    std::vector<double> times_scaled;
    std::vector<ComparisonRow> rows;
    std::vector<Trajectory> markov;
    std::vector<Trajectory> full;
};

// Full joint simulation against the rate equation on a shared scaled-time
// grid, one row per kappa ratio. The joint dimension (2j+1)(n_max+1) caps
// the feasible j; N_s = 2j up to ~20 is the intended range.
MarkovFullComparison compare_markov_full(double j, double g,
                                         std::span<const double> kappa_ratios,
                                         std::span<const double> times_scaled,
                                         const CompareOptions& opts = {});

struct ThermalCell {
    std::int64_t n_spins = 0;
    double nbar = 0.0;
    bool ok = false;
    std::string error;                    // fit-window failures recorded here
    FitResult fit;                        // scaled units, valid when ok
    double equilibrium_jx = 0.0;          // closed form <Jx> at equilibrium
    double equilibrium_polarization = 0.0; // -<Jx>_eq / J
    double ref_small_nbar = 0.0;          // 2 / N_s
    double ref_large_nbar = 0.0;          // 1 / (2 nbar); infinity at nbar = 0
};

struct ThermalSweepResult {
    std::vector<ThermalCell> cells; // n_list-major, nbar_grid-minor ordering
};

// Fitted T1 and equilibrium polarization over the (N_s, nbar) grid. Fit
// failures mark their cell and the sweep continues.
ThermalSweepResult thermal_sweep(std::span<const std::int64_t> n_list,
                                 std::span<const double> nbar_grid,
                                 const SweepOptions& opts = {});

// Log-log linear regression helper used by the sweeps.
PowerLawResult fit_power_law(std::span<const double> x, std::span<const double> y);

} // namespace spincool
