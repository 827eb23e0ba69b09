#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfreq/estimator.hpp"
#include "qfreq/hilbert.hpp"

// Alternating measurement/state iteration for the optimal probe state:
// starting from a random pure state, compute the optimal estimator L for
// it, then replace the state by the eigenvector of the dual-channel update
// operator with the most negative eigenvalue, and repeat.

namespace qfreq {

enum class StateFamily { optimal, ghz, product, sine };

StateFamily family_from_string(const std::string& name);
std::string to_string(StateFamily family);

// Fixed family constructor (ghz/product/sine); throws for `optimal`.
SymmetricState make_family_state(StateFamily family, int n_atoms);

struct OptimizerConfig {
    int max_iterations = 1000;
    double cost_tolerance = 1e-12;  // absolute cost change, Hz^2
    std::uint64_t seed = 0;
    int restarts = 4;
};

struct OptimizationResult {
    SymmetricState state;
    double variance = 0.0;  // Hz^2, equals cost_history.back()
    int iterations = 0;
    bool converged = false;
    std::vector<double> cost_history;
};

// Haar-uniform pure state: i.i.d. standard complex Gaussian amplitudes,
// normalized. Deterministic per seed.
SymmetricState random_state(int n_atoms, std::uint64_t seed);

// M_nm = g(n-m) [ (L^2)_nm - 2 i (n-m) t k1_weight L_nm ] with
// g(k) = exp(-k^2 t^2 effective_variance / 2); the Gaussian average of the
// dual channel applied to L^2 - 2 omega L.
Matrix state_update_operator(const Observable& l, double t,
                             double effective_variance, double k1_weight);

// Cost of a fixed probe state with its optimal measurement:
// prior_variance - Tr(rho_bar L^2), L from solve_sld.
double state_cost(const SymmetricState& state, double t, double prior_variance,
                  double effective_variance, double k1_weight);

// As above but also returns the optimal L.
std::pair<double, Observable> state_cost_and_L(const SymmetricState& state,
                                               double t, double prior_variance,
                                               double effective_variance,
                                               double k1_weight);

struct IterationStep {
    Observable l;          // optimal measurement of the input state
    SymmetricState state;  // updated probe state
    double variance;       // cost of the updated state
};

// One measurement + state update. Degenerate minimal eigenvalues (gap
// below 1e-12) are tie-broken toward maximal overlap with the input state.
IterationStep iterate_once(const SymmetricState& state, double t,
                           double prior_variance, double effective_variance,
                           double k1_weight);

// Full iteration with restarts; best result over `config.restarts`
// independent seeds (plus `warm_start` as the first candidate if given).
OptimizationResult optimize_state(
    int n_atoms, double t, double prior_variance, double effective_variance,
    double k1_weight, const OptimizerConfig& config = {},
    const std::optional<SymmetricState>& warm_start = std::nullopt);

struct RCurvePoint {
    double tau;
    double r;
};

// Decoherence-free variance reduction factor R(tau) on a grid, in the
// dimensionless convention prior = 1, t = tau. Fixed families keep the
// state and optimize the measurement only.
std::vector<RCurvePoint> r_curve(int n_atoms, const std::vector<double>& taus,
                                 StateFamily family,
                                 const OptimizerConfig& config = {});

}  // namespace qfreq
