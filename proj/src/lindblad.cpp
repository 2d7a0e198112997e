#include "spincool/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "spincool/errors.hpp"

namespace spincool {

namespace {

int spin_dim_from(double j) {
    const double d = 2.0 * j + 1.0;
    if (j < 0.0 || std::abs(d - std::round(d)) > 1e-9)
        throw ValidationError("spin j must be a nonnegative half-integer");
    return static_cast<int>(std::llround(d));
}

// Embedded Dormand-Prince 5(4) for the time-independent linear system
// dv/dt = L v. FSAL; PI-free step control with the usual safety factors.
class Dopri5 {
public:
    Dopri5(const Liouvillian& l, double rel_tol, double abs_tol)
        : l_(l), rtol_(rel_tol), atol_(abs_tol) {}

    void integrate(Eigen::VectorXcd& v, double t0, double t1) {
        if (t1 <= t0) return;
        double t = t0;
        double h = initial_step(v, t1 - t0);
        Eigen::VectorXcd k1 = l_.apply(v);
        std::size_t rejected_in_a_row = 0;
        while (t < t1) {
            h = std::min(h, t1 - t);
            const Eigen::VectorXcd k2 = l_.apply(v + h * (a21 * k1));
            const Eigen::VectorXcd k3 = l_.apply(v + h * (a31 * k1 + a32 * k2));
            const Eigen::VectorXcd k4 = l_.apply(v + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const Eigen::VectorXcd k5 =
                l_.apply(v + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Eigen::VectorXcd k6 =
                l_.apply(v + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Eigen::VectorXcd vnew =
                v + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Eigen::VectorXcd k7 = l_.apply(vnew);
            const Eigen::VectorXcd err =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double scaled = 0.0;
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                const double sc =
                    atol_ + rtol_ * std::max(std::abs(v[i]), std::abs(vnew[i]));
                const double e = std::abs(err[i]) / sc;
                scaled += e * e;
            }
            scaled = std::sqrt(scaled / static_cast<double>(v.size()));

            if (scaled <= 1.0) {
                t += h;
                v = vnew;
                k1 = k7; // first-same-as-last
                rejected_in_a_row = 0;
            } else if (++rejected_in_a_row > 60) {
                throw NumericsError("dopri5: step size control failed at t = " +
                                    std::to_string(t) + " (error " +
                                    std::to_string(scaled) + ")");
            }
            const double factor =
                scaled > 0.0 ? 0.9 * std::pow(scaled, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
            if (!(h > 0.0) || t + h == t)
                throw NumericsError("dopri5: step size underflow at t = " +
                                    std::to_string(t));
        }
    }

private:
    double initial_step(const Eigen::VectorXcd& v, double span) const {
        // crude spectral estimate from the generator action on the state
        const double rate = l_.apply(v).norm() / std::max(v.norm(), 1e-300);
        double h = 0.1 / std::max(rate, 1e-300);
        return std::min(h, span);
    }

    const Liouvillian& l_;
    double rtol_, atol_;

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // difference between the 5th and embedded 4th order weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

} // namespace

void JointState::validate() const {
    const int d = dim();
    if (rho.cols() != d || d != spin_dim_from(j) * (n_max + 1))
        throw ValidationError("JointState: density matrix dimension mismatch");
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12)
        throw ValidationError("JointState: not Hermitian (deviation " +
                              std::to_string(herm) + ")");
    const double tr = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
    if (tr > 1e-10)
        throw ValidationError("JointState: trace differs from 1 by " +
                              std::to_string(tr));
    Eigen::SelfAdjointEigenSolver<DenseOp> es(0.5 * (rho + rho.adjoint()),
                                              Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-8)
        throw ValidationError("JointState: negative eigenvalue " +
                              std::to_string(min_eig));
}

JointState initial_state(double j, int n_max, double nbar) {
    if (n_max < 0) throw ValidationError("initial_state: n_max must be >= 0");
    if (nbar < 0.0) throw ValidationError("initial_state: nbar must be >= 0");
    const int ds = spin_dim_from(j);
    const int dc = n_max + 1;

    Eigen::VectorXd cavity = Eigen::VectorXd::Zero(dc);
    if (nbar == 0.0) {
        cavity[0] = 1.0;
    } else {
        const double q = nbar / (1.0 + nbar);
        double w = 1.0;
        for (int n = 0; n < dc; ++n, w *= q) cavity[n] = w;
        cavity /= cavity.sum();
    }

    JointState s;
    s.j = j;
    s.n_max = n_max;
    s.rho = DenseOp::Zero(ds * dc, ds * dc);
    const double spin_w = 1.0 / static_cast<double>(ds);
    for (int n = 0; n < dc; ++n)
        for (int i = 0; i < ds; ++i)
            s.rho(n * ds + i, n * ds + i) = cavity[n] * spin_w;
    return s;
}

Liouvillian::Liouvillian(const SparseOp& hamiltonian, double kappa, double nbar,
                         int n_max)
    : joint_dim_(static_cast<int>(hamiltonian.rows())),
      n_max_(n_max),
      kappa_(kappa),
      nbar_(nbar) {
    if (hamiltonian.rows() != hamiltonian.cols())
        throw ValidationError("Liouvillian: Hamiltonian must be square");
    if (n_max < 0 || joint_dim_ % (n_max + 1) != 0)
        throw ValidationError("Liouvillian: dimension not divisible by n_max + 1");
    if (kappa < 0.0 || nbar < 0.0)
        throw ValidationError("Liouvillian: kappa and nbar must be >= 0");
    spin_dim_ = joint_dim_ / (n_max + 1);

    const int d = joint_dim_;
    const SparseOp id = sparse_identity(d);
    const SparseOp a = kron(cavity_annihilate(n_max), sparse_identity(spin_dim_));
    const SparseOp at = SparseOp(a.adjoint());

    // vec(X rho Y) = (Y^T kron X) vec(rho), column-stacking
    auto left = [&](const SparseOp& x) { return kron(id, x); };
    auto right = [&](const SparseOp& y) { return kron(SparseOp(y.transpose()), id); };
    auto dissipator = [&](const SparseOp& op) {
        const SparseOp opd_op = SparseOp(op.adjoint()) * op;
        return SparseOp(2.0 * kron(SparseOp(op.conjugate()), op) - left(opd_op) -
                        right(opd_op));
    };

    const std::complex<double> im(0.0, 1.0);
    mat_ = SparseOp(-im * (left(hamiltonian) - right(hamiltonian)));
    if (kappa > 0.0) {
        mat_ += SparseOp(0.5 * kappa * (1.0 + nbar) * dissipator(a));
        if (nbar > 0.0) mat_ += SparseOp(0.5 * kappa * nbar * dissipator(at));
    }
    mat_.makeCompressed();
}

Trajectory evolve(const JointState& state0, const Liouvillian& liouville,
                  std::span<const double> times_seconds, double gamma_s,
                  const EvolveOptions& opts) {
    state0.validate();
    const int d = liouville.joint_dim();
    if (state0.dim() != d)
        throw ValidationError("evolve: state dimension does not match Liouvillian");
    if (times_seconds.empty()) throw ValidationError("evolve: empty time grid");
    double prev = -1.0;
    for (double t : times_seconds) {
        if (!(t >= 0.0) || t <= prev)
            throw ValidationError("evolve: times must be nonnegative and strictly increasing");
        prev = t;
    }

    const double j = state0.j;
    const int ds = spin_dim_from(j);
    const int dc = state0.n_max + 1;

    const bool dense = opts.integrator == EvolveOptions::Integrator::dense_expm ||
                       (opts.integrator == EvolveOptions::Integrator::automatic &&
                        d <= opts.dense_dim_limit);

    Eigen::VectorXcd v(d * d);
    for (int c = 0; c < d; ++c) v.segment(static_cast<Eigen::Index>(c) * d, d) = state0.rho.col(c);

    Trajectory traj;
    traj.j = j;
    traj.times_seconds.assign(times_seconds.begin(), times_seconds.end());
    if (gamma_s > 0.0) {
        traj.times.resize(times_seconds.size());
        for (std::size_t i = 0; i < times_seconds.size(); ++i)
            traj.times[i] = times_seconds[i] * gamma_s;
    } else {
        traj.times = traj.times_seconds;
    }

    Dopri5 stepper(liouville, opts.rk_rel_tol, opts.rk_abs_tol);
    DenseOp dense_l;
    DenseOp cached_propagator;
    double cached_dt = -1.0;
    if (dense) dense_l = DenseOp(liouville.matrix());

    double max_leakage = 0.0;
    double t_now = 0.0;
    for (double t : times_seconds) {
        const double dt = t - t_now;
        if (dt > 0.0) {
            if (dense) {
                if (std::abs(dt - cached_dt) > 1e-15 * std::max(dt, cached_dt)) {
                    cached_propagator = DenseOp(dense_l * dt).exp();
                    cached_dt = dt;
                }
                v = cached_propagator * v;
            } else {
                stepper.integrate(v, t_now, t);
            }
        }
        t_now = t;

        // observables from the diagonal of rho
        double jx = 0.0, occupation = 0.0, top = 0.0, trace = 0.0;
        double lo = 0.0;
        for (int n = 0; n < dc; ++n)
            for (int i = 0; i < ds; ++i) {
                const double pop = v[(static_cast<Eigen::Index>(n * ds + i)) * d + (n * ds + i)].real();
                jx += (-j + i) * pop;
                occupation += n * pop;
                trace += pop;
                lo = std::min(lo, pop);
                if (n == dc - 1) top += pop;
            }
        traj.max_probability_error =
            std::max(traj.max_probability_error, std::abs(trace - 1.0));
        traj.min_population = std::min(traj.min_population, lo);
        traj.jx.push_back(jx);
        traj.jx_norm.push_back(j > 0.0 ? -jx / j : 0.0);
        traj.cavity_occupation.push_back(occupation);
        traj.leakage.push_back(top);
        max_leakage = std::max(max_leakage, top);
    }

    if (max_leakage > opts.leakage_threshold)
        traj.warnings.push_back(
            "cavity truncation leakage " + std::to_string(max_leakage) +
            " exceeds threshold " + std::to_string(opts.leakage_threshold) +
            "; increase n_max");
    return traj;
}

} // namespace spincool
