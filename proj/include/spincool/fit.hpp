#pragma once

#include <span>

#include "spincool/trajectory.hpp"

namespace spincool {

/// Fitted exponential time constant. Units follow the time axis that was
/// fitted (engine-native scaled time unless stated otherwise); in_seconds
/// tags the converted form.
struct FitResult {
    double t1_eff = 0.0;
    double residual_rms = 0.0;
    double window_start = 0.0;
    double window_end = 0.0;
    double saturation = 1.0; // amplitude the model was pinned to
    bool in_seconds = false;
};

struct FitOptions {
    // Amplitude of the model sat*(1 - exp(-t/T)). Negative means estimate
    // from the trajectory's final value.
    double saturation = -1.0;
    // Fit window ends at the first crossing of this fraction of saturation.
    double window_fraction = 0.99;
};

// Unweighted least-squares fit of sat*(1 - exp(-t/T)) to jx_norm(times).
// The initial guess is the first crossing of (1 - 1/e)*sat; a trajectory
// whose crossing falls in the second half of the record (or never happens)
// has not saturated and raises ValidationError.
FitResult fit_t1_eff(const Trajectory& traj, const FitOptions& opts = {});

// Same fit on raw arrays; used by the sweeps.
FitResult fit_exponential_rise(std::span<const double> times,
                               std::span<const double> values,
                               const FitOptions& opts = {});

// Convert a scaled-time fit to seconds (divides times by gamma_s).
FitResult fit_in_seconds(const FitResult& scaled, double gamma_s);

} // namespace spincool
