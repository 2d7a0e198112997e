#pragma once

#include <vector>

namespace spincool {

/// Diagonal populations of one spin-J subspace.
///
/// Index i holds P_{J,m} with m = -j + i, so p.front() is the ground state
/// of the cooling dynamics and p.back() the fully inverted state.
struct PopulationVector {
    double j = 0.0;
    std::vector<double> p;

    std::size_t dim() const { return p.size(); }
    double m_of(std::size_t i) const { return -j + static_cast<double>(i); }

    // Throws ValidationError unless entries lie in [0,1] (up to rounding)
    // and sum to 1 within 1e-10.
    void validate() const;
};

PopulationVector maximally_mixed(double j);
PopulationVector ground_state(double j);
PopulationVector make_population(double j, std::vector<double> p);

// Sum over m of m * P_m.
double expectation_jx(const PopulationVector& p);

// -<Jx>/J, the saturation observable; 0 for the degenerate j = 0 subspace.
double normalized_jx(const PopulationVector& p);

} // namespace spincool
