#pragma once

#include <cstdint>

#include "qfreq/estimator.hpp"
#include "qfreq/noise.hpp"

// Independent verification engines: Monte Carlo trajectory averaging of the
// dephasing channel and direct quadrature of the Bayesian cost. Used by the
// test suites and exposed through the CLI `oracle` subcommand.

namespace qfreq {

struct McMatrixEstimate {
    Matrix value;                 // entrywise trajectory mean
    Eigen::MatrixXd stderr_re;    // standard error of the real part
    Eigen::MatrixXd stderr_im;    // standard error of the imaginary part
    long long samples = 0;
};

struct McKernelEstimate {
    double k1 = 0.0;
    double k1_stderr = 0.0;
    double k2 = 0.0;
    double k2_stderr = 0.0;
    long long samples = 0;
};

// Worker threads used by the Monte Carlo loops (0 = machine parallelism).
// The chunked accumulation makes results identical for any setting.
void set_mc_threads(unsigned n);

// <U rho U^dagger> over OU trajectories (trapezoidal phase integral) plus an
// exact Gaussian white-noise phase kick of variance beta t per trajectory.
McMatrixEstimate mc_average_state(const SymmetricState& state,
                                  const OUParams& ou,
                                  const WhiteNoiseParams& wn, double t,
                                  long long n_samples, double dt,
                                  std::uint64_t seed);

// <omega(t) U rho U^dagger> over OU trajectories; the Monte Carlo estimate
// of rho-bar-prime (LO noise only).
McMatrixEstimate mc_rho_prime(const SymmetricState& state, const OUParams& ou,
                              double t, long long n_samples, double dt,
                              std::uint64_t seed);

// Sample estimates of the K1/K2 kernels from OU trajectories:
// K2 = <phi^2>/t^2, K1 = <phi omega(t)>/t with phi the phase integral.
McKernelEstimate mc_kernels(const OUParams& ou, double t, long long n_samples,
                            double dt, std::uint64_t seed);

// Direct Gauss-Hermite quadrature of the average estimation variance for the
// decoherence-free channel and a zero-mean Gaussian prior. Rejects
// non-orthonormal strategies.
double direct_cost(const SymmetricState& state,
                   const EstimationStrategy& strategy,
                   const GaussianPriorSpec& prior, double t,
                   int quad_points = 128);

// Gauss-Hermite rule for weight e^{-x^2} (Golub-Welsch).
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};
GaussHermiteRule gauss_hermite(int points);

// Haar-random orthonormal basis (QR of a complex Ginibre matrix).
Matrix random_unitary(int dim, std::uint64_t seed);

// Strategy measuring in `basis` with the Bayes-optimal estimate for each
// outcome: the posterior mean <x|rho_bar'|x> / <x|rho_bar|x>.
EstimationStrategy strategy_with_optimal_estimates(const Matrix& basis,
                                                   const SymmetricState& state,
                                                   const GaussianPriorSpec& prior,
                                                   double t);

}  // namespace qfreq
