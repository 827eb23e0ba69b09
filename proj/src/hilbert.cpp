#include "qfreq/hilbert.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace qfreq {

namespace {

void require_atoms(int n_atoms) {
    if (n_atoms < 1)
        throw std::invalid_argument("n_atoms must be >= 1, got " +
                                    std::to_string(n_atoms));
}

}  // namespace

SymmetricState make_ghz(int n_atoms) {
    require_atoms(n_atoms);
    SymmetricState s{n_atoms, Vector::Zero(n_atoms + 1)};
    const double r = 1.0 / std::sqrt(2.0);
    s.amplitudes(0) = r;
    s.amplitudes(n_atoms) = r;
    return s;
}

SymmetricState make_product(int n_atoms) {
    require_atoms(n_atoms);
    SymmetricState s{n_atoms, Vector::Zero(n_atoms + 1)};
    // c_n = sqrt(binom(N,n)) / 2^{N/2}, built up multiplicatively to stay
    // finite for large N.
    double log_half_n = -0.5 * n_atoms * std::log(2.0);
    double log_binom = 0.0;
    for (int n = 0; n <= n_atoms; ++n) {
        s.amplitudes(n) = std::exp(0.5 * log_binom + log_half_n);
        log_binom += std::log(double(n_atoms - n)) - std::log(double(n + 1));
    }
    return s;
}

SymmetricState make_sine(int n_atoms) {
    require_atoms(n_atoms);
    SymmetricState s{n_atoms, Vector::Zero(n_atoms + 1)};
    for (int n = 0; n <= n_atoms; ++n)
        s.amplitudes(n) = std::sin(M_PI * (n + 1) / (n_atoms + 2));
    s.amplitudes /= s.amplitudes.norm();
    return s;
}

DensityMatrix to_density(const SymmetricState& state) {
    return state.amplitudes * state.amplitudes.adjoint();
}

Observable number_operator(int n_atoms) {
    require_atoms(n_atoms);
    Matrix h = Matrix::Zero(n_atoms + 1, n_atoms + 1);
    for (int n = 0; n <= n_atoms; ++n) h(n, n) = double(n);
    return h;
}

double state_norm_error(const SymmetricState& state) {
    return std::abs(state.amplitudes.squaredNorm() - 1.0);
}

double hermiticity_defect(const Matrix& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Spectral eigh(const Matrix& a, double hermiticity_tol) {
    const double defect = hermiticity_defect(a);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (defect > hermiticity_tol * scale) {
        char msg[96];
        std::snprintf(msg, sizeof msg,
                      "eigh: matrix is not Hermitian, symmetry violation %.3g",
                      defect);
        throw std::invalid_argument(msg);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigh: eigendecomposition failed");
    return Spectral{solver.eigenvalues(), solver.eigenvectors()};
}

void check_density(const DensityMatrix& rho) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("density matrix must be square");
    if (hermiticity_defect(rho) > 1e-12)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 ||
        std::abs(rho.trace().imag()) > 1e-10)
        throw std::invalid_argument("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("density matrix is not PSD");
}

}  // namespace qfreq
