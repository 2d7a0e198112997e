#pragma once

#include <cstddef>

#include <vector>

#include "spincool/population.hpp"

namespace spincool {

/// Per-level transition coefficients of the rate equation.
///
/// down is the cooling (m -> m-1) rate, up the thermally activated
/// (m -> m+1) rate, both dimensionless; the physical rates are Gamma_s
/// times these. stay = -(down + up) keeps each column of the generator
/// summing to zero.
struct RateCoefficients {
    double down = 0.0; // A_{J,m} = (1+nbar) [J(J+1) - m(m-1)]
    double stay = 0.0; // B_{J,m} = -(A + C)
    double up = 0.0;   // C_{J,m} = nbar   [J(J+1) - m(m+1)]
};

RateCoefficients coefficients(double j, double m, double nbar);

/// Tridiagonal generator M_J of the population rate equation, stored by
/// diagonals. Index i corresponds to m = -j + i, matching PopulationVector.
///
/// Layout: entry (i-1, i) = down coefficient of level i (super-diagonal),
/// entry (i, i) = stay, entry (i+1, i) = up (sub-diagonal). Columns sum to
/// zero and off-diagonals are nonnegative, so exp(tau M) is stochastic.
struct RateMatrix {
    double j = 0.0;
    double nbar = 0.0;
    std::vector<double> sub;   // length dim-1, sub[i] = up coefficient of level i
    std::vector<double> diag;  // length dim
    std::vector<double> super; // length dim-1, super[i] = down coefficient of level i+1

    std::size_t dim() const { return diag.size(); }

    // y = M x, tridiagonal multiply.
    void apply(const std::vector<double>& x, std::vector<double>& y) const;

    // Dense copy, column-major not required; for small-J oracles and I/O.
    std::vector<std::vector<double>> dense() const;
};

inline constexpr std::size_t default_max_dimension = 2'000'001;

RateMatrix build_rate_matrix(double j, double nbar,
                             std::size_t max_dimension = default_max_dimension);

// Equilibrium populations of Eq. M_J P = 0 in closed geometric form:
// P_m proportional to q^(J+m) with q = nbar/(1+nbar).
PopulationVector steady_state(double j, double nbar);

// Closed-form equilibrium <Jx>; equals expectation_jx(steady_state(j, nbar)).
double equilibrium_jx(double j, double nbar);

} // namespace spincool
