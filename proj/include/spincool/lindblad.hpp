#pragma once

#include <span>

#include "spincool/operators.hpp"
#include "spincool/trajectory.hpp"

namespace spincool {

/// Density matrix of one spin-J subspace joined to a truncated cavity.
/// Layout matches kron(cavity, spin): index = n * (2j+1) + (m + j).
struct JointState {
    double j = 0.0;
    int n_max = 0;
    DenseOp rho;

    int dim() const { return static_cast<int>(rho.rows()); }

    // Hermiticity within 1e-12, unit trace within 1e-10, minimum eigenvalue
    // >= -1e-8; throws ValidationError otherwise.
    void validate() const;
};

// Maximally mixed spin joined to the truncated thermal cavity state
// (ground state when nbar = 0).
JointState initial_state(double j, int n_max, double nbar);

/// Lindblad generator on column-stacked density matrices:
///   L(rho) = -i[H, rho] + (kappa/2) ((1+nbar) D[a] + nbar D[a^dag]) rho
/// with D[A] rho = 2 A rho A^dag - {A^dag A, rho}.
class Liouvillian {
public:
    Liouvillian(const SparseOp& hamiltonian, double kappa, double nbar, int n_max);

    int joint_dim() const { return joint_dim_; }
    int n_max() const { return n_max_; }
    double spin_j() const { return 0.5 * (spin_dim_ - 1); }
    double kappa() const { return kappa_; }
    double nbar() const { return nbar_; }

    const SparseOp& matrix() const { return mat_; }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& vec_rho) const { return mat_ * vec_rho; }

private:
    SparseOp mat_;
    int joint_dim_;
    int spin_dim_;
    int n_max_;
    double kappa_;
    double nbar_;
};

inline Liouvillian build_liouvillian(const SparseOp& hamiltonian, double kappa,
                                     double nbar, int n_max) {
    return Liouvillian(hamiltonian, kappa, nbar, n_max);
}

struct EvolveOptions {
    // Population on the top Fock level above which a truncation warning is
    // recorded in the trajectory.
    double leakage_threshold = 1e-6;
    // Joint dimension up to which the dense scaling-and-squaring exponential
    // is used; larger problems integrate the vectorized ODE adaptively.
    int dense_dim_limit = 24;
    double rk_rel_tol = 1e-10;
    double rk_abs_tol = 1e-12;
    enum class Integrator { automatic, dense_expm, adaptive_rk };
    Integrator integrator = Integrator::automatic;
};

// Joint evolution over an increasing grid of times in seconds. Pass
// gamma_s > 0 to also fill the scaled time axis used by the rate equation.
Trajectory evolve(const JointState& state0, const Liouvillian& liouville,
                  std::span<const double> times_seconds, double gamma_s = 0.0,
                  const EvolveOptions& opts = {});

} // namespace spincool
