#include "qfreq/optimizer.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace qfreq {

StateFamily family_from_string(const std::string& name) {
    if (name == "optimal") return StateFamily::optimal;
    if (name == "ghz") return StateFamily::ghz;
    if (name == "product") return StateFamily::product;
    if (name == "sine") return StateFamily::sine;
    throw std::invalid_argument("unknown state family: " + name);
}

std::string to_string(StateFamily family) {
    switch (family) {
        case StateFamily::optimal: return "optimal";
        case StateFamily::ghz: return "ghz";
        case StateFamily::product: return "product";
        case StateFamily::sine: return "sine";
    }
    throw std::logic_error("unreachable");
}

SymmetricState make_family_state(StateFamily family, int n_atoms) {
    switch (family) {
        case StateFamily::ghz: return make_ghz(n_atoms);
        case StateFamily::product: return make_product(n_atoms);
        case StateFamily::sine: return make_sine(n_atoms);
        case StateFamily::optimal:
            throw std::invalid_argument(
                "make_family_state: `optimal` has no fixed state; run the "
                "optimizer");
    }
    throw std::logic_error("unreachable");
}

SymmetricState random_state(int n_atoms, std::uint64_t seed) {
    if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SymmetricState s{n_atoms, Vector(n_atoms + 1)};
    for (int n = 0; n <= n_atoms; ++n) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        s.amplitudes(n) = Complex(re, im);
    }
    s.amplitudes /= s.amplitudes.norm();
    return s;
}

Matrix state_update_operator(const Observable& l, double t,
                             double effective_variance, double k1_weight) {
    const Eigen::Index d = l.rows();
    const Matrix l2 = l * l;
    Matrix m(d, d);
    for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index j = 0; j < d; ++j) {
            const double k = double(n - j);
            const double g = std::exp(-0.5 * k * k * t * t * effective_variance);
            m(n, j) = g * (l2(n, j) -
                           Complex(0.0, 2.0 * k * t * k1_weight) * l(n, j));
        }
    // L^2 is Hermitian only up to rounding; symmetrize explicitly.
    return 0.5 * (m + m.adjoint());
}

std::pair<double, Observable> state_cost_and_L(const SymmetricState& state,
                                               double t, double prior_variance,
                                               double effective_variance,
                                               double k1_weight) {
    const DensityMatrix rho_bar =
        average_state(to_density(state), t, effective_variance);
    const Observable h = number_operator(state.n_atoms);
    const Matrix rho_prime = rho_prime_gaussian(rho_bar, h, t, k1_weight);
    Observable l = solve_sld(rho_bar, rho_prime);
    const double cost = prior_variance - (rho_bar * l * l).trace().real();
    return {cost, std::move(l)};
}

double state_cost(const SymmetricState& state, double t, double prior_variance,
                  double effective_variance, double k1_weight) {
    return state_cost_and_L(state, t, prior_variance, effective_variance,
                            k1_weight)
        .first;
}

IterationStep iterate_once(const SymmetricState& state, double t,
                           double prior_variance, double effective_variance,
                           double k1_weight) {
    if (t <= 0.0) throw std::invalid_argument("iterate_once: t must be > 0");
    auto [cost, l] =
        state_cost_and_L(state, t, prior_variance, effective_variance,
                         k1_weight);
    (void)cost;
    const Matrix m = state_update_operator(l, t, effective_variance, k1_weight);
    const Spectral spec = eigh(m);

    // Most negative eigenvalue; among near-degenerate candidates prefer the
    // eigenvector closest to the current state to keep trajectories stable.
    Eigen::Index pick = 0;
    double best_overlap =
        std::abs(spec.eigenvectors.col(0).dot(state.amplitudes));
    for (Eigen::Index i = 1; i < spec.eigenvalues.size(); ++i) {
        if (spec.eigenvalues(i) - spec.eigenvalues(0) >= 1e-12) break;
        const double overlap =
            std::abs(spec.eigenvectors.col(i).dot(state.amplitudes));
        if (overlap > best_overlap) {
            best_overlap = overlap;
            pick = i;
        }
    }

    SymmetricState next{state.n_atoms, spec.eigenvectors.col(pick)};
    const double next_cost = state_cost(next, t, prior_variance,
                                        effective_variance, k1_weight);
    return IterationStep{std::move(l), std::move(next), next_cost};
}

namespace {

OptimizationResult run_single(const SymmetricState& start, double t,
                              double prior_variance, double effective_variance,
                              double k1_weight, const OptimizerConfig& config) {
    OptimizationResult res;
    res.state = start;
    res.cost_history.push_back(state_cost(start, t, prior_variance,
                                          effective_variance, k1_weight));
    int small_changes = 0;
    for (int it = 0; it < config.max_iterations; ++it) {
        IterationStep step = iterate_once(res.state, t, prior_variance,
                                          effective_variance, k1_weight);
        res.state = std::move(step.state);
        res.iterations = it + 1;
        const double change = res.cost_history.back() - step.variance;
        res.cost_history.push_back(step.variance);
        // Two consecutive sub-tolerance changes count as converged.
        small_changes = (std::abs(change) < config.cost_tolerance)
                            ? small_changes + 1
                            : 0;
        if (small_changes >= 2) {
            res.converged = true;
            break;
        }
    }
    res.variance = res.cost_history.back();
    return res;
}

}  // namespace

OptimizationResult optimize_state(
    int n_atoms, double t, double prior_variance, double effective_variance,
    double k1_weight, const OptimizerConfig& config,
    const std::optional<SymmetricState>& warm_start) {
    if (config.max_iterations < 1 || config.restarts < 1 ||
        config.cost_tolerance <= 0.0)
        throw std::invalid_argument("optimize_state: invalid config");

    OptimizationResult best;
    best.variance = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r) {
        SymmetricState start =
            (r == 0 && warm_start) ? *warm_start
                                   : random_state(n_atoms, config.seed + r);
        OptimizationResult res = run_single(start, t, prior_variance,
                                            effective_variance, k1_weight,
                                            config);
        if (res.variance < best.variance) best = std::move(res);
    }
    return best;
}

std::vector<RCurvePoint> r_curve(int n_atoms, const std::vector<double>& taus,
                                 StateFamily family,
                                 const OptimizerConfig& config) {
    std::vector<RCurvePoint> out;
    out.reserve(taus.size());
    std::optional<SymmetricState> warm;
    for (double tau : taus) {
        if (tau <= 0.0)
            throw std::invalid_argument("r_curve: tau values must be > 0");
        double r;
        if (family == StateFamily::optimal) {
            OptimizationResult res =
                optimize_state(n_atoms, tau, 1.0, 1.0, 1.0, config, warm);
            warm = res.state;
            r = res.variance;
        } else {
            r = state_cost(make_family_state(family, n_atoms), tau, 1.0, 1.0,
                           1.0);
        }
        out.push_back(RCurvePoint{tau, r});
    }
    return out;
}

}  // namespace qfreq
