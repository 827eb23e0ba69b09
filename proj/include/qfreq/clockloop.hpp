#pragma once

#include <vector>

#include "qfreq/noise.hpp"
#include "qfreq/optimizer.hpp"

// Estimation performance under LO noise and atomic dephasing, the
// stationary-operation analysis and the scaling tables.

namespace qfreq {

struct ClockScenario {
    OUParams ou;
    WhiteNoiseParams wn;
    int n_atoms = 1;
    StateFamily family = StateFamily::optimal;
};

// Post-estimation variance Delta^2 omega-tilde(t) =
// Delta^2 omega(t) - K1(t)^2 F(rho_bar, H t), with rho_bar averaged over
// the effective prior K2^omega + K2^Omega. `warm_start` carries the
// optimizer state between neighbouring grid points for family = optimal.
double variance_after_estimation(
    const ClockScenario& s, double t,
    std::optional<SymmetricState>* warm_start = nullptr);

// Same quantity through the decoherence-free reduction factor:
// Delta^2 omega(t) - K1^2 / Delta^2 omega_K [1 - R(t sqrt(Delta^2 omega_K))],
// with R recomputed exactly at the queried argument.
double variance_after_estimation_via_r(
    const ClockScenario& s, double t,
    std::optional<SymmetricState>* warm_start = nullptr);

struct ReductionRow {
    double t;          // s
    double var_prior;  // Delta^2 omega(t), Hz^2
    double var_post;   // Delta^2 omega-tilde(t), Hz^2
    double ratio;      // var_post / Delta^2 omega(0)
};

std::vector<ReductionRow> reduction_curve(const ClockScenario& s,
                                          const std::vector<double>& t_grid);

// Post-estimation variance minimized over the interrogation time:
// coarse log-spaced scan over [1e-3/gamma, 10/gamma] plus golden-section
// refinement.
struct TimeMinimum {
    double variance;  // Hz^2
    double time;      // s
};
TimeMinimum minimize_over_time(const ClockScenario& s);

struct StationaryResult {
    double variance = 0.0;  // smallest stationary Delta^2 omega(0), Hz^2
    double time = 0.0;      // minimizing interrogation time, s
    bool found = false;
};

// Smallest Delta^2 omega(0) for which estimation compensates the
// noise-induced spread: min_t Delta^2 omega-tilde(t) <= Delta^2 omega(0).
// Bisection over [1e-6 alpha, alpha] to relative width 1e-4.
StationaryResult stationary_variance(int n_atoms, double ou_alpha,
                                     double ou_gamma,
                                     const WhiteNoiseParams& wn,
                                     StateFamily family);

enum class ScalingMode { decoherence_free_opt_tau, stationary };

struct ScalingRow {
    int n_atoms;
    double variance;     // best variance (dimensionless R or Hz^2)
    double argmin_time;  // tau or t at the optimum
};

// Per-N best variance. In decoherence-free mode this is min_tau R(tau)
// (prior = 1); in stationary mode it is the minimal stationary
// Delta^2 omega(0) for the given noise model.
std::vector<ScalingRow> scaling_table(const std::vector<int>& n_grid,
                                      StateFamily family, ScalingMode mode,
                                      double ou_alpha = 1.0,
                                      double ou_gamma = 0.2,
                                      const WhiteNoiseParams& wn = {});

}  // namespace qfreq
