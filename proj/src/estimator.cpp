#include "qfreq/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qfreq {

DensityMatrix average_state(const DensityMatrix& rho, double t,
                            double effective_variance) {
    if (t < 0.0) throw std::invalid_argument("average_state: t must be >= 0");
    if (effective_variance < 0.0)
        throw std::invalid_argument("average_state: variance must be >= 0");
    const Eigen::Index d = rho.rows();
    DensityMatrix out(d, d);
    for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index m = 0; m < d; ++m) {
            const double k = double(n - m);
            out(n, m) =
                rho(n, m) * std::exp(-0.5 * k * k * t * t * effective_variance);
        }
    return out;
}

Matrix rho_prime_gaussian(const DensityMatrix& rho_bar, const Observable& h,
                          double t, double weight) {
    if (rho_bar.rows() != h.rows() || rho_bar.cols() != h.cols())
        throw std::invalid_argument(
            "rho_prime_gaussian: dimension mismatch between rho_bar and H");
    const Complex i_t_w(0.0, t * weight);
    return i_t_w * (rho_bar * h - h * rho_bar);
}

Observable solve_sld(const DensityMatrix& rho_bar, const Matrix& rho_prime,
                     double rank_cutoff) {
    const Spectral spec = eigh(rho_bar);
    if (hermiticity_defect(rho_prime) > 1e-10)
        throw std::invalid_argument("solve_sld: rho_prime is not Hermitian");
    const Eigen::Index d = spec.eigenvalues.size();
    const double cutoff = rank_cutoff * spec.eigenvalues.maxCoeff();

    Matrix rp = spec.eigenvectors.adjoint() * rho_prime * spec.eigenvectors;
    Matrix l = Matrix::Zero(d, d);
    bool any_retained = false;
    double discarded_weight = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            const double s = spec.eigenvalues(i) + spec.eigenvalues(j);
            if (s > cutoff) {
                l(i, j) = 2.0 * rp(i, j) / s;
                any_retained = true;
            } else {
                discarded_weight += std::norm(rp(i, j));
            }
        }
    if (!any_retained && discarded_weight > 0.0)
        throw std::invalid_argument(
            "solve_sld: rho_prime is supported entirely in the kernel of "
            "rho_bar (degenerate instance)");
    // Rounding in the basis changes can leave a tiny anti-Hermitian part;
    // project it out so downstream spectral code sees an exact observable.
    const Matrix out = spec.eigenvectors * l * spec.eigenvectors.adjoint();
    return 0.5 * (out + out.adjoint());
}

double qfi(const DensityMatrix& rho, const Observable& h, double t,
           double rank_cutoff) {
    const Spectral spec = eigh(rho);
    const Eigen::Index d = spec.eigenvalues.size();
    const double cutoff = rank_cutoff * spec.eigenvalues.maxCoeff();
    const Matrix hb = spec.eigenvectors.adjoint() * h * spec.eigenvectors;

    double f = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            const double s = spec.eigenvalues(i) + spec.eigenvalues(j);
            if (s <= cutoff) continue;
            const double diff = spec.eigenvalues(i) - spec.eigenvalues(j);
            f += std::norm(hb(i, j)) * diff * diff / s;
        }
    return 2.0 * t * t * f;
}

double bayes_variance(double prior_variance, const DensityMatrix& rho_bar,
                      const Matrix& rho_prime, const Observable& l) {
    const double extracted = (rho_bar * l * l).trace().real();
    const double extracted_alt = (rho_prime * l).trace().real();
    if (std::abs(extracted - extracted_alt) >
        1e-10 * std::max(1.0, std::abs(extracted)))
        throw std::invalid_argument(
            "bayes_variance: Tr(rho_bar L^2) and Tr(rho_prime L) disagree; L "
            "does not solve the anticommutator equation for these inputs");
    const double result = prior_variance - extracted;
    if (result < -1e-9 || result > prior_variance + 1e-9)
        throw std::invalid_argument(
            "bayes_variance: result " + std::to_string(result) +
            " outside [0, prior]; inconsistent inputs");
    return result;
}

double variance_via_qfi(double prior_variance, const DensityMatrix& rho_bar,
                        const Observable& h, double t) {
    return prior_variance *
           (1.0 - prior_variance * qfi(rho_bar, h, t));
}

EstimationStrategy strategy_from_L(const Observable& l) {
    Spectral spec = eigh(l, 1e-9);
    return EstimationStrategy{std::move(spec.eigenvectors),
                              std::move(spec.eigenvalues)};
}

}  // namespace qfreq
