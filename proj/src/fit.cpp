#include "spincool/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spincool/errors.hpp"

namespace spincool {

namespace {

constexpr double inv_e_level = 1.0 - 0.36787944117144233; // 1 - 1/e

double sse_for(std::span<const double> t, std::span<const double> y, double sat,
               double time_constant) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - sat * (1.0 - std::exp(-t[i] / time_constant));
        acc += r * r;
    }
    return acc;
}

// Golden-section minimization of f over [a, b]; f unimodal on the bracket.
template <typename F>
double golden_minimize(F&& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

FitResult fit_exponential_rise(std::span<const double> times,
                               std::span<const double> values,
                               const FitOptions& opts) {
    if (times.size() != values.size())
        throw ValidationError("fit: time and value arrays differ in length");
    if (times.size() < 5)
        throw ValidationError("fit: need at least 5 samples");

    const double sat = opts.saturation >= 0.0 ? opts.saturation : values.back();
    if (!(sat > 0.0))
        throw ValidationError("fit: saturation level is not positive");

    // initial guess: first crossing of (1 - 1/e) of saturation
    std::size_t cross = times.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= inv_e_level * sat) {
            cross = i;
            break;
        }
    }
    const double t_mid = 0.5 * (times.front() + times.back());
    if (cross == times.size() || times[cross] > t_mid)
        throw ValidationError(
            "fit: trajectory has not saturated (the 1-1/e crossing must fall in "
            "the first half of the record); extend the time grid");
    const double t_guess = std::max(times[cross], times.front() > 0.0
                                                      ? times.front()
                                                      : times[1]);

    // window: up to the first crossing of window_fraction * saturation
    std::size_t wend = times.size() - 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= opts.window_fraction * sat) {
            wend = i;
            break;
        }
    }
    if (wend + 1 < 5) wend = std::min<std::size_t>(4, times.size() - 1);
    const auto tw = times.subspan(0, wend + 1);
    const auto yw = values.subspan(0, wend + 1);

    const double span = std::log(50.0);
    const double ln_t1 = golden_minimize(
        [&](double ln_t) { return sse_for(tw, yw, sat, std::exp(ln_t)); },
        std::log(t_guess) - span, std::log(t_guess) + span, 1e-12);

    FitResult fit;
    fit.t1_eff = std::exp(ln_t1);
    fit.saturation = sat;
    fit.residual_rms =
        std::sqrt(sse_for(tw, yw, sat, fit.t1_eff) / static_cast<double>(tw.size()));
    fit.window_start = tw.front();
    fit.window_end = tw.back();
    return fit;
}

FitResult fit_t1_eff(const Trajectory& traj, const FitOptions& opts) {
    return fit_exponential_rise(traj.times, traj.jx_norm, opts);
}

FitResult fit_in_seconds(const FitResult& scaled, double gamma_s) {
    if (!(gamma_s > 0.0))
        throw ValidationError("fit_in_seconds: gamma_s must be positive");
    FitResult out = scaled;
    out.t1_eff /= gamma_s;
    out.window_start /= gamma_s;
    out.window_end /= gamma_s;
    out.in_seconds = true;
    return out;
}

} // namespace spincool
