#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace spincool {

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;
using DenseOp = Eigen::MatrixXcd;

// Spin operators on the (2j+1)-dimensional subspace, basis ordered
// m = -j ... j to match PopulationVector. The quantization label is the
// drive axis, so these are the x-basis operators of the cooling problem;
// the matrices themselves are the standard spin-J ladder construction.
SparseOp spin_jx(double j);            // diag(m)
SparseOp spin_raise(double j);         // J+ |j,m> = sqrt(j(j+1)-m(m+1)) |j,m+1>
SparseOp spin_lower(double j);         // adjoint of spin_raise

// Cavity operators on Fock levels 0..n_max.
SparseOp cavity_annihilate(int n_max); // a|n> = sqrt(n) |n-1>
SparseOp cavity_number(int n_max);

SparseOp sparse_identity(int dim);

// Kronecker product, cavity factor first: joint index = n * (2j+1) + (m+j).
SparseOp kron(const SparseOp& a, const SparseOp& b);

// Resonant exchange Hamiltonian (i g / 2)(a J+ - a^dag J-) on the joint
// cavity (x) spin space; Hermitian, commutes with the excitation number.
SparseOp exchange_hamiltonian(double j, int n_max, double g);

// N_ex = a^dag a + (Jx + j), conserved by the exchange Hamiltonian.
SparseOp excitation_number(double j, int n_max);

} // namespace spincool
