#include "spincool/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spincool/errors.hpp"

namespace spincool {

namespace {

// Three diagonals of the stochastic matrix P = I + M/alpha used by
// uniformization. alpha >= max exit rate makes every entry nonnegative and
// every column sum to one.
struct StochasticDiagonals {
    std::vector<double> sub, diag, super;
    bool bidiagonal = false;
};

StochasticDiagonals scale_to_stochastic(const RateMatrix& m, double alpha) {
    StochasticDiagonals p;
    const double inv = 1.0 / alpha;
    p.diag.resize(m.dim());
    p.sub.resize(m.sub.size());
    p.super.resize(m.super.size());
    for (std::size_t i = 0; i < m.dim(); ++i) p.diag[i] = 1.0 + m.diag[i] * inv;
    for (std::size_t i = 0; i < m.sub.size(); ++i) p.sub[i] = m.sub[i] * inv;
    for (std::size_t i = 0; i < m.super.size(); ++i) p.super[i] = m.super[i] * inv;
    p.bidiagonal =
        std::all_of(p.sub.begin(), p.sub.end(), [](double v) { return v == 0.0; });
    return p;
}

// One substep: p <- exp(h M) p. Poisson weights are tracked in log space so
// rate = alpha*h may exceed the underflow limit of exp(-rate); terms whose
// weight is negligible against the tail tolerance advance the power series
// without touching the accumulator. Every term is nonnegative, so the
// truncated sum can be renormalized by the Poisson mass actually summed.
void uniformization_substep(const StochasticDiagonals& sd, double rate,
                            std::vector<double>& p, std::vector<double>& term,
                            std::vector<double>& next,
                            const PropagateOptions& opts) {
    const std::size_t d = p.size();
    const double ln_rate = std::log(rate);
    const double skip_below = opts.tail_tolerance * 1e-3 / (rate + 100.0);

    double ln_weight = -rate; // log Poisson(0)
    double weight = std::exp(ln_weight);
    term = p;
    for (std::size_t i = 0; i < d; ++i) p[i] = weight * term[i];

    double mass = weight;
    std::size_t k = 0;
    while (1.0 - mass > opts.tail_tolerance) {
        ++k;
        if (k > opts.max_terms_per_step)
            throw NumericsError(
                "uniformization: series did not reach the tail tolerance after " +
                std::to_string(opts.max_terms_per_step) +
                " terms (alpha*h = " + std::to_string(rate) + ")");
        ln_weight += ln_rate - std::log(static_cast<double>(k));
        weight = std::exp(ln_weight);
        if (weight < skip_below) {
            // past the mode the weights only decay; everything left is tail
            // mass below the tolerance (the mass test alone cannot see this:
            // a ~k*eps summation error floor hides tails below ~1e-13)
            if (static_cast<double>(k) > rate) break;
            // left tail: advance the power series only, the weight cannot
            // matter yet
            if (sd.bidiagonal) {
                for (std::size_t i = 0; i + 1 < d; ++i)
                    next[i] = sd.diag[i] * term[i] + sd.super[i] * term[i + 1];
                next[d - 1] = sd.diag[d - 1] * term[d - 1];
            } else {
                next[0] = sd.diag[0] * term[0] + sd.super[0] * term[1];
                for (std::size_t i = 1; i + 1 < d; ++i)
                    next[i] = sd.sub[i - 1] * term[i - 1] + sd.diag[i] * term[i] +
                              sd.super[i] * term[i + 1];
                next[d - 1] = sd.sub[d - 2] * term[d - 2] + sd.diag[d - 1] * term[d - 1];
            }
            term.swap(next);
            continue;
        }
        // next = P term; p += weight * next, fused
        if (sd.bidiagonal) {
            // nbar = 0: pure cooling, the sub-diagonal vanishes
            for (std::size_t i = 0; i + 1 < d; ++i) {
                const double v = sd.diag[i] * term[i] + sd.super[i] * term[i + 1];
                next[i] = v;
                p[i] += weight * v;
            }
            next[d - 1] = sd.diag[d - 1] * term[d - 1];
            p[d - 1] += weight * next[d - 1];
        } else {
            next[0] = sd.diag[0] * term[0] + sd.super[0] * term[1];
            p[0] += weight * next[0];
            for (std::size_t i = 1; i + 1 < d; ++i) {
                const double v = sd.sub[i - 1] * term[i - 1] + sd.diag[i] * term[i] +
                                 sd.super[i] * term[i + 1];
                next[i] = v;
                p[i] += weight * v;
            }
            next[d - 1] = sd.sub[d - 2] * term[d - 2] + sd.diag[d - 1] * term[d - 1];
            p[d - 1] += weight * next[d - 1];
        }
        term.swap(next);
        mass += weight;
    }
    const double inv = 1.0 / mass;
    for (std::size_t i = 0; i < d; ++i) p[i] *= inv;
}

} // namespace

void advance(const RateMatrix& m, std::vector<double>& p, double tau,
             const PropagateOptions& opts) {
    if (p.size() != m.dim())
        throw ValidationError("advance: population size does not match matrix");
    if (!(tau >= 0.0))
        throw ValidationError("advance: tau must be nonnegative");
    if (tau == 0.0 || m.dim() == 1) return; // 1-state generator is identically 0

    double alpha = 0.0;
    for (double b : m.diag) alpha = std::max(alpha, -b);
    if (alpha == 0.0) return;

    const std::size_t substeps = static_cast<std::size_t>(
        std::max(1.0, std::ceil(alpha * tau / opts.max_step_rate)));
    const double h = tau / static_cast<double>(substeps);
    const StochasticDiagonals sd = scale_to_stochastic(m, alpha);

    std::vector<double> term(p.size()), next(p.size());
    for (std::size_t s = 0; s < substeps; ++s)
        uniformization_substep(sd, alpha * h, p, term, next, opts);
}

Trajectory propagate(const RateMatrix& m, const PopulationVector& p0,
                     std::span<const double> times, double gamma_s,
                     const PropagateOptions& opts) {
    p0.validate();
    if (p0.dim() != m.dim() || p0.j != m.j)
        throw ValidationError("propagate: initial state does not match matrix subspace");
    if (times.empty())
        throw ValidationError("propagate: empty time grid");
    double prev = -1.0;
    for (double t : times) {
        if (!(t >= 0.0) || t <= prev)
            throw ValidationError("propagate: times must be nonnegative and strictly increasing");
        prev = t;
    }

    Trajectory traj;
    traj.j = m.j;
    traj.times.assign(times.begin(), times.end());
    if (gamma_s > 0.0) {
        traj.times_seconds.resize(times.size());
        for (std::size_t i = 0; i < times.size(); ++i)
            traj.times_seconds[i] = times[i] / gamma_s;
    }
    traj.jx.reserve(times.size());
    traj.jx_norm.reserve(times.size());

    PopulationVector state = p0;
    double tau_now = 0.0;
    for (double t : times) {
        advance(m, state.p, t - tau_now, opts);
        tau_now = t;
        traj.jx.push_back(expectation_jx(state));
        traj.jx_norm.push_back(normalized_jx(state));
        double sum = 0.0, lo = state.p[0];
        for (double v : state.p) {
            sum += v;
            lo = std::min(lo, v);
        }
        traj.max_probability_error =
            std::max(traj.max_probability_error, std::abs(sum - 1.0));
        traj.min_population = std::min(traj.min_population, lo);
        if (opts.keep_populations) traj.populations.push_back(state);
    }
    return traj;
}

} // namespace spincool
