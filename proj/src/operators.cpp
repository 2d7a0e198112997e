#include "spincool/operators.hpp"

#include <cmath>
#include <vector>

#include "spincool/errors.hpp"

namespace spincool {

namespace {

using Triplet = Eigen::Triplet<std::complex<double>>;

int spin_dim(double j) {
    const double d = 2.0 * j + 1.0;
    if (j < 0.0 || std::abs(d - std::round(d)) > 1e-9)
        throw ValidationError("spin j must be a nonnegative half-integer");
    return static_cast<int>(std::llround(d));
}

double ladder_element(double j, double m) {
    // <j, m+1| J+ |j, m>
    return std::sqrt(j * (j + 1.0) - m * (m + 1.0));
}

} // namespace

SparseOp spin_jx(double j) {
    const int d = spin_dim(j);
    SparseOp op(d, d);
    std::vector<Triplet> t;
    t.reserve(d);
    for (int i = 0; i < d; ++i) t.emplace_back(i, i, -j + i);
    op.setFromTriplets(t.begin(), t.end());
    return op;
}

SparseOp spin_raise(double j) {
    const int d = spin_dim(j);
    SparseOp op(d, d);
    std::vector<Triplet> t;
    t.reserve(d);
    for (int i = 0; i + 1 < d; ++i)
        t.emplace_back(i + 1, i, ladder_element(j, -j + i));
    op.setFromTriplets(t.begin(), t.end());
    return op;
}

SparseOp spin_lower(double j) {
    return SparseOp(spin_raise(j).adjoint());
}

SparseOp cavity_annihilate(int n_max) {
    if (n_max < 0) throw ValidationError("cavity truncation must be >= 0");
    const int d = n_max + 1;
    SparseOp op(d, d);
    std::vector<Triplet> t;
    t.reserve(d);
    for (int n = 1; n < d; ++n) t.emplace_back(n - 1, n, std::sqrt(double(n)));
    op.setFromTriplets(t.begin(), t.end());
    return op;
}

SparseOp cavity_number(int n_max) {
    if (n_max < 0) throw ValidationError("cavity truncation must be >= 0");
    const int d = n_max + 1;
    SparseOp op(d, d);
    std::vector<Triplet> t;
    t.reserve(d);
    for (int n = 0; n < d; ++n) t.emplace_back(n, n, double(n));
    op.setFromTriplets(t.begin(), t.end());
    return op;
}

SparseOp sparse_identity(int dim) {
    SparseOp op(dim, dim);
    op.setIdentity();
    return op;
}

SparseOp kron(const SparseOp& a, const SparseOp& b) {
    SparseOp out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(a.nonZeros()) * b.nonZeros());
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseOp::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseOp::InnerIterator ib(b, kb); ib; ++ib)
                    t.emplace_back(ia.row() * b.rows() + ib.row(),
                                   ia.col() * b.cols() + ib.col(),
                                   ia.value() * ib.value());
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

SparseOp exchange_hamiltonian(double j, int n_max, double g) {
    if (n_max < 1)
        throw ValidationError("exchange_hamiltonian: n_max must be >= 1");
    const SparseOp a = cavity_annihilate(n_max);
    const SparseOp is = sparse_identity(spin_dim(j));
    const SparseOp ic = sparse_identity(n_max + 1);
    const SparseOp aj = kron(a, is);
    const SparseOp jp = kron(ic, spin_raise(j));
    const std::complex<double> half_ig(0.0, 0.5 * g);
    SparseOp h = half_ig * (aj * jp).eval();
    h += SparseOp(h.adjoint()); // - (ig/2) a^dag J- is the adjoint of the first term
    return h;
}

SparseOp excitation_number(double j, int n_max) {
    const SparseOp ic = sparse_identity(n_max + 1);
    const SparseOp is = sparse_identity(spin_dim(j));
    SparseOp nex = kron(cavity_number(n_max), is);
    nex += kron(ic, SparseOp(spin_jx(j) + j * is));
    return nex;
}

} // namespace spincool
