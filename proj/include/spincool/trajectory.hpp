#pragma once

#include <string>
#include <vector>

#include "spincool/population.hpp"

namespace spincool {

/// Time series of cooling observables for one subspace.
///
/// Engine-native time is dimensionless tau = Gamma_s * t; times_seconds is
/// filled in when the caller supplied a physical Gamma_s. The full-simulator
/// columns (cavity occupation, top-Fock-level leakage) stay empty for rate
/// equation runs, as do the population snapshots unless requested.
struct Trajectory {
    double j = 0.0;
    std::vector<double> times;         // scaled, strictly increasing
    std::vector<double> times_seconds; // empty unless Gamma_s was given
    std::vector<double> jx;            // <Jx>
    std::vector<double> jx_norm;       // -<Jx>/J
    std::vector<PopulationVector> populations;
    std::vector<double> cavity_occupation;
    std::vector<double> leakage;
    std::vector<std::string> warnings;

    // Conservation diagnostics accumulated over the output times: largest
    // |sum(p) - 1| (or |trace - 1|) and the most negative population seen.
    double max_probability_error = 0.0;
    double min_population = 0.0;

    std::size_t size() const { return times.size(); }
};

} // namespace spincool
