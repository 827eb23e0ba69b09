#pragma once

#include "qfreq/hilbert.hpp"

// Core Bayesian estimation machinery: Gaussian-averaged states, the
// anticommutator equation for the optimal estimator observable L, the
// quantum Fisher information, and the minimal-variance formulas.
//
// Conventions: omega and its estimator are angular frequencies (rad/s),
// t is in seconds, variances in Hz^2, so omega*t is a plain phase.

namespace qfreq {

struct EstimationStrategy {
    Matrix projectors;          // orthonormal columns |x>
    Eigen::VectorXd estimates;  // omega-tilde_x, one per column (Hz)
};

struct GaussianPriorSpec {
    double variance = 1.0;  // Hz^2, zero-mean prior
};

// Relative eigenvalue cutoff below which lambda_i + lambda_j pairs are
// treated as lying outside the support of rho-bar.
inline constexpr double kDefaultRankCutoff = 1e-12;

// rho-bar: multiplies each coherence by exp(-(n-m)^2 t^2 v / 2) where v is
// the (effective) prior variance. Populations are untouched.
DensityMatrix average_state(const DensityMatrix& rho, double t,
                            double effective_variance);

// rho-bar-prime = i t w [rho_bar, H]. For a Gaussian prior w is the prior
// variance; under dephasing w is the K1 kernel value. Hermitian, traceless.
Matrix rho_prime_gaussian(const DensityMatrix& rho_bar, const Observable& h,
                          double t, double weight);

// Solves (1/2){L, rho_bar} = rho_prime in the eigenbasis of rho_bar:
// L_ij = 2 <i|rho_prime|j> / (lambda_i + lambda_j), entries with
// lambda_i + lambda_j below rank_cutoff * lambda_max dropped.
Observable solve_sld(const DensityMatrix& rho_bar, const Matrix& rho_prime,
                     double rank_cutoff = kDefaultRankCutoff);

// F(rho, H t) = 2 t^2 sum_ij |<i|H|j>|^2 (l_i - l_j)^2 / (l_i + l_j).
double qfi(const DensityMatrix& rho, const Observable& h, double t,
           double rank_cutoff = kDefaultRankCutoff);

// Minimal Bayesian variance: prior - Tr(rho_bar L^2). Also checks the
// alternate route prior - Tr(rho_prime L) and flags inconsistent inputs.
double bayes_variance(double prior_variance, const DensityMatrix& rho_bar,
                      const Matrix& rho_prime, const Observable& l);

// Same quantity through the QFI link: prior [1 - prior F(rho_bar, H t)].
double variance_via_qfi(double prior_variance, const DensityMatrix& rho_bar,
                        const Observable& h, double t);

// Spectral decomposition of L: eigenvectors are the measurement projectors,
// eigenvalues the frequency estimates.
EstimationStrategy strategy_from_L(const Observable& l);

}  // namespace qfreq
