#pragma once

#include <span>

#include "spincool/rate_matrix.hpp"
#include "spincool/trajectory.hpp"

namespace spincool {

struct PropagateOptions {
    // Poisson tail mass discarded per uniformization substep.
    double tail_tolerance = 1e-14;
    // Cap on alpha * h per substep; larger substeps amortize the Poisson
    // tail overhead (weights are tracked in log space, so the cap is not an
    // underflow limit).
    double max_step_rate = 4096.0;
    // Hard cap on series terms per substep before giving up.
    std::size_t max_terms_per_step = 100'000;
    bool keep_populations = false;
};

// Advance p in place by tau under dP/dtau = M P using uniformization
// (Jensen's method). Exact for a stochastic generator up to the Poisson
// tail tolerance; preserves nonnegativity and total probability.
void advance(const RateMatrix& m, std::vector<double>& p, double tau,
             const PropagateOptions& opts = {});

// Populations and <Jx> observables over an increasing, nonnegative grid of
// scaled times tau = Gamma_s t. Pass gamma_s > 0 to also fill seconds.
Trajectory propagate(const RateMatrix& m, const PopulationVector& p0,
                     std::span<const double> times, double gamma_s = 0.0,
                     const PropagateOptions& opts = {});

} // namespace spincool
