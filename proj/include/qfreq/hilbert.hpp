#pragma once

#include <Eigen/Dense>
#include <complex>

// Probe states and operators on the (N+1)-dimensional symmetric (Dicke)
// subspace of N two-level atoms. |n> is the symmetric state with n atoms
// excited; amplitudes are stored in that basis.

namespace qfreq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Hermitian PSD unit-trace matrix in the |n> basis. The "relaxed" variants
// appearing in the estimation equations (rho-bar-prime) are Hermitian only
// and are passed around as plain Matrix.
using DensityMatrix = Matrix;
using Observable = Matrix;

struct SymmetricState {
    int n_atoms = 0;
    Vector amplitudes;  // length n_atoms + 1, entry n is c_n

    int dim() const { return n_atoms + 1; }
};

struct Spectral {
    Eigen::VectorXd eigenvalues;  // ascending
    Matrix eigenvectors;          // unitary, columns
};

// (|0...0> + |1...1>)/sqrt(2) in the Dicke basis: c_0 = c_N = 1/sqrt(2).
SymmetricState make_ghz(int n_atoms);

// Product state ((|0>+|1>)/sqrt(2))^{(x)N}: c_n = sqrt(binom(N,n))/2^{N/2}.
SymmetricState make_product(int n_atoms);

// Sine state: c_n proportional to sin(pi (n+1)/(N+2)), normalized.
SymmetricState make_sine(int n_atoms);

// Pure-state projector |psi><psi| in the |n> basis.
DensityMatrix to_density(const SymmetricState& state);

// H = diag(0, 1, ..., N), the generator of the frequency evolution.
Observable number_operator(int n_atoms);

// Dense Hermitian eigendecomposition. Rejects inputs whose Hermiticity
// violation (max-norm of A - A^dagger) exceeds `hermiticity_tol` relative
// to max(1, ||A||_max).
Spectral eigh(const Matrix& a, double hermiticity_tol = 1e-10);

double state_norm_error(const SymmetricState& state);

// Max-norm Hermiticity defect ||A - A^dagger||_max.
double hermiticity_defect(const Matrix& a);

// Throws std::invalid_argument unless `rho` is Hermitian (1e-12), unit
// trace (1e-10) and PSD up to -1e-10.
void check_density(const DensityMatrix& rho);

}  // namespace qfreq
