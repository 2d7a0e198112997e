#include "spincool/rate_matrix.hpp"

#include <cmath>
#include <string>

#include "spincool/errors.hpp"

namespace spincool {

namespace {

std::size_t subspace_dim(double j) {
    const double d = 2.0 * j + 1.0;
    if (j < 0.0 || std::abs(d - std::round(d)) > 1e-9)
        throw ValidationError("spin j must be a nonnegative half-integer");
    return static_cast<std::size_t>(std::llround(d));
}

void check_half_integer_pair(double j, double m) {
    subspace_dim(j);
    if (std::abs(m) > j + 1e-12)
        throw ValidationError("coefficients: |m| exceeds j");
    const double step = m + j; // must be a nonnegative integer
    if (std::abs(step - std::round(step)) > 1e-9)
        throw ValidationError("coefficients: m is not of the form -j + integer");
}

} // namespace

RateCoefficients coefficients(double j, double m, double nbar) {
    check_half_integer_pair(j, m);
    if (nbar < 0.0)
        throw ValidationError("coefficients: nbar must be >= 0");
    const double jj = j * (j + 1.0);
    RateCoefficients c;
    c.down = (1.0 + nbar) * (jj - m * (m - 1.0));
    c.up = nbar * (jj - m * (m + 1.0));
    c.stay = -(c.down + c.up);
    return c;
}

RateMatrix build_rate_matrix(double j, double nbar, std::size_t max_dimension) {
    if (nbar < 0.0)
        throw ValidationError("build_rate_matrix: nbar must be >= 0");
    const std::size_t d = subspace_dim(j);
    if (d > max_dimension)
        throw ValidationError("build_rate_matrix: 2j+1 = " + std::to_string(d) +
                              " exceeds the configured maximum of " +
                              std::to_string(max_dimension));

    RateMatrix m;
    m.j = j;
    m.nbar = nbar;
    m.diag.resize(d);
    m.sub.resize(d > 0 ? d - 1 : 0);
    m.super.resize(d > 0 ? d - 1 : 0);
    for (std::size_t i = 0; i < d; ++i) {
        const double mi = -j + static_cast<double>(i);
        const RateCoefficients c = coefficients(j, mi, nbar);
        m.diag[i] = c.stay;
        if (i + 1 < d) m.sub[i] = c.up; // (i+1, i)
        if (i > 0) m.super[i - 1] = c.down; // (i-1, i)
    }
    return m;
}

void RateMatrix::apply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t d = dim();
    y.resize(d);
    if (d == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + super[0] * x[1];
    for (std::size_t i = 1; i + 1 < d; ++i)
        y[i] = sub[i - 1] * x[i - 1] + diag[i] * x[i] + super[i] * x[i + 1];
    y[d - 1] = sub[d - 2] * x[d - 2] + diag[d - 1] * x[d - 1];
}

std::vector<std::vector<double>> RateMatrix::dense() const {
    const std::size_t d = dim();
    std::vector<std::vector<double>> out(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        out[i][i] = diag[i];
        if (i + 1 < d) {
            out[i + 1][i] = sub[i];
            out[i][i + 1] = super[i];
        }
    }
    return out;
}

PopulationVector steady_state(double j, double nbar) {
    if (nbar < 0.0)
        throw ValidationError("steady_state: nbar must be >= 0");
    if (nbar == 0.0) return ground_state(j);
    const std::size_t d = subspace_dim(j);
    const double q = nbar / (1.0 + nbar);
    PopulationVector out;
    out.j = j;
    out.p.resize(d);
    // geometric ladder, normalized by (1 - q^d)/(1 - q)
    double w = 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        out.p[i] = w;
        sum += w;
        w *= q;
    }
    for (double& v : out.p) v /= sum;
    return out;
}

double equilibrium_jx(double j, double nbar) {
    subspace_dim(j);
    if (nbar < 0.0)
        throw ValidationError("equilibrium_jx: nbar must be >= 0");
    if (nbar == 0.0) return -j;
    const double d = 2.0 * j + 1.0;
    const double q = nbar / (1.0 + nbar);
    // -J + nbar - d q^d / (1 - q^d), the stable form of the closed expression
    const double qd = std::pow(q, d);
    return -j + nbar - d * qd / (1.0 - qd);
}

} // namespace spincool
