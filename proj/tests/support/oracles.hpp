#pragma once

// Test-only reference implementations. These deliberately share no code with
// the propagation kernels they check: dense scaling-and-squaring expm (Eigen
// unsupported), a detailed-balance symmetrized eigendecomposition propagator,
// and a null-space steady-state solver.

#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "spincool/rate_matrix.hpp"

namespace spincool::testing {

inline Eigen::MatrixXd dense_generator(const RateMatrix& m) {
    const auto rows = m.dense();
    const Eigen::Index d = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index k = 0; k < d; ++k) out(i, k) = rows[i][k];
    return out;
}

// exp(tau * M) p0 by dense Pade scaling-and-squaring.
inline std::vector<Eigen::VectorXd> expm_propagate(const Eigen::MatrixXd& gen,
                                                   const Eigen::VectorXd& p0,
                                                   const std::vector<double>& taus) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(taus.size());
    for (double tau : taus) out.push_back((gen * tau).exp() * p0);
    return out;
}

// exp(tau * M) p0 through the symmetric similarity transform that detailed
// balance provides for nbar > 0: S = D^{-1/2} M D^{1/2} with D = diag(pi)
// is symmetric, so a self-adjoint eigendecomposition is exact and stable.
inline std::vector<Eigen::VectorXd> eig_propagate(const RateMatrix& m,
                                                  const Eigen::VectorXd& p0,
                                                  const std::vector<double>& taus) {
    const PopulationVector pi = steady_state(m.j, m.nbar);
    const Eigen::Index d = static_cast<Eigen::Index>(m.dim());
    Eigen::VectorXd sqrt_pi(d);
    for (Eigen::Index i = 0; i < d; ++i) sqrt_pi[i] = std::sqrt(pi.p[i]);

    const Eigen::MatrixXd gen = dense_generator(m);
    Eigen::MatrixXd sym(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index k = 0; k < d; ++k)
            sym(i, k) = gen(i, k) * sqrt_pi[k] / sqrt_pi[i];
    sym = 0.5 * (sym + sym.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const Eigen::VectorXd w = p0.cwiseQuotient(sqrt_pi);
    const Eigen::VectorXd coeff = es.eigenvectors().transpose() * w;

    std::vector<Eigen::VectorXd> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        Eigen::VectorXd scaled = coeff;
        for (Eigen::Index i = 0; i < d; ++i)
            scaled[i] *= std::exp(tau * es.eigenvalues()[i]);
        out.push_back(sqrt_pi.cwiseProduct(es.eigenvectors() * scaled));
    }
    return out;
}

// Normalized kernel of the generator, via full-pivot LU.
inline Eigen::VectorXd null_space_steady_state(const RateMatrix& m) {
    const Eigen::MatrixXd gen = dense_generator(m);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gen);
    lu.setThreshold(1e-12);
    Eigen::MatrixXd kernel = lu.kernel();
    Eigen::VectorXd v = kernel.col(0);
    if (v.sum() < 0.0) v = -v;
    return v / v.sum();
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

// Random probability vector, Dirichlet-ish via exponentials.
inline PopulationVector random_population(double j, std::mt19937& rng) {
    std::exponential_distribution<double> exp_dist(1.0);
    PopulationVector p = maximally_mixed(j);
    double sum = 0.0;
    for (double& v : p.p) {
        v = exp_dist(rng);
        sum += v;
    }
    for (double& v : p.p) v /= sum;
    return p;
}

} // namespace spincool::testing
