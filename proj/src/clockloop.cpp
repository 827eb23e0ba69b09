#include "qfreq/clockloop.hpp"

#include <cmath>
#include <stdexcept>

namespace qfreq {

namespace {

OptimizerConfig clock_optimizer_config() {
    OptimizerConfig cfg;
    cfg.max_iterations = 2000;
    cfg.cost_tolerance = 1e-13;
    cfg.restarts = 3;
    cfg.seed = 1;
    return cfg;
}

double family_cost(StateFamily family, int n_atoms, double t, double prior,
                   double effective_variance, double k1_weight,
                   std::optional<SymmetricState>* warm) {
    if (family == StateFamily::optimal) {
        std::optional<SymmetricState> none;
        std::optional<SymmetricState>& w = warm ? *warm : none;
        OptimizationResult res =
            optimize_state(n_atoms, t, prior, effective_variance, k1_weight,
                           clock_optimizer_config(), w);
        w = res.state;
        return res.variance;
    }
    return state_cost(make_family_state(family, n_atoms), t, prior,
                      effective_variance, k1_weight);
}

// Golden-section minimum of f on [a, b] to relative width `tol`.
template <typename F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol) {
    constexpr double kGolden = 0.6180339887498949;
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * (std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = lo * std::pow(hi / lo, double(i) / (points - 1));
    return g;
}

}  // namespace

double variance_after_estimation(const ClockScenario& s, double t,
                                 std::optional<SymmetricState>* warm_start) {
    if (t <= 0.0)
        throw std::invalid_argument(
            "variance_after_estimation: t must be > 0 (white noise diverges)");
    const double prior = ou_variance(s.ou, t);
    const double k1 = ou_k1(s.ou, t);
    const double eff = effective_prior_variance(s.ou, s.wn, t);
    return family_cost(s.family, s.n_atoms, t, prior, eff, k1, warm_start);
}

double variance_after_estimation_via_r(
    const ClockScenario& s, double t,
    std::optional<SymmetricState>* warm_start) {
    if (t <= 0.0)
        throw std::invalid_argument(
            "variance_after_estimation_via_r: t must be > 0");
    const double prior = ou_variance(s.ou, t);
    const double k1 = ou_k1(s.ou, t);
    const double eff = effective_prior_variance(s.ou, s.wn, t);
    // R is the decoherence-free reduction factor (unit prior) evaluated at
    // the rescaled time tau = t sqrt(eff); no tabulation or interpolation.
    const double tau = t * std::sqrt(eff);
    const double r =
        family_cost(s.family, s.n_atoms, tau, 1.0, 1.0, 1.0, warm_start);
    return prior - k1 * k1 / eff * (1.0 - r);
}

std::vector<ReductionRow> reduction_curve(const ClockScenario& s,
                                          const std::vector<double>& t_grid) {
    std::vector<ReductionRow> rows;
    rows.reserve(t_grid.size());
    std::optional<SymmetricState> warm;
    double prev = 0.0;
    for (double t : t_grid) {
        if (t <= prev)
            throw std::invalid_argument(
                "reduction_curve: t grid must be positive ascending");
        prev = t;
        ReductionRow row;
        row.t = t;
        row.var_prior = ou_variance(s.ou, t);
        row.var_post = variance_after_estimation(s, t, &warm);
        row.ratio = row.var_post / s.ou.initial_variance;
        rows.push_back(row);
    }
    return rows;
}

TimeMinimum minimize_over_time(const ClockScenario& s) {
    const double lo = 1e-3 / s.ou.gamma;
    const double hi = 10.0 / s.ou.gamma;
    const auto grid = log_grid(lo, hi, 200);

    std::optional<SymmetricState> warm;
    std::size_t best = 0;
    double best_v = variance_after_estimation(s, grid[0], &warm);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = variance_after_estimation(s, grid[i], &warm);
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    const double a = grid[best > 0 ? best - 1 : 0];
    const double b = grid[best + 1 < grid.size() ? best + 1 : best];
    auto [t_min, v_min] = golden_min(
        [&](double t) { return variance_after_estimation(s, t, &warm); }, a, b,
        1e-5);
    if (best_v < v_min) return TimeMinimum{best_v, grid[best]};
    return TimeMinimum{v_min, t_min};
}

StationaryResult stationary_variance(int n_atoms, double ou_alpha,
                                     double ou_gamma,
                                     const WhiteNoiseParams& wn,
                                     StateFamily family) {
    if (ou_alpha <= 0.0 || ou_gamma <= 0.0)
        throw std::invalid_argument("stationary_variance: invalid OU params");

    auto min_for = [&](double v0) {
        ClockScenario s{OUParams{ou_alpha, ou_gamma, v0}, wn, n_atoms, family};
        return minimize_over_time(s);
    };

    // Stationarity at v0: the best post-estimation variance does not exceed
    // the starting variance. Holds at v0 = alpha; bisect for the smallest.
    StationaryResult res;
    double lo = 1e-6 * ou_alpha;
    double hi = ou_alpha;
    TimeMinimum at_hi = min_for(hi);
    if (at_hi.variance > hi) return res;  // not found
    res.found = true;
    res.variance = hi;
    res.time = at_hi.time;
    TimeMinimum at_lo = min_for(lo);
    if (at_lo.variance <= lo) return StationaryResult{lo, at_lo.time, true};

    while (hi / lo > 1.0 + 1e-4) {
        const double mid = std::sqrt(lo * hi);
        TimeMinimum at_mid = min_for(mid);
        if (at_mid.variance <= mid) {
            hi = mid;
            res.variance = mid;
            res.time = at_mid.time;
        } else {
            lo = mid;
        }
    }
    return res;
}

std::vector<ScalingRow> scaling_table(const std::vector<int>& n_grid,
                                      StateFamily family, ScalingMode mode,
                                      double ou_alpha, double ou_gamma,
                                      const WhiteNoiseParams& wn) {
    std::vector<ScalingRow> rows;
    rows.reserve(n_grid.size());
    int prev_n = 0;
    for (int n : n_grid) {
        if (n <= prev_n)
            throw std::invalid_argument("scaling_table: n grid must ascend");
        prev_n = n;
        if (mode == ScalingMode::stationary) {
            StationaryResult s =
                stationary_variance(n, ou_alpha, ou_gamma, wn, family);
            rows.push_back(ScalingRow{n, s.variance, s.time});
            continue;
        }
        // Decoherence-free: minimize R(tau) over tau at unit prior.
        std::optional<SymmetricState> warm;
        auto cost = [&](double tau) {
            return family_cost(family, n, tau, 1.0, 1.0, 1.0, &warm);
        };
        const auto grid = log_grid(0.05, 2.0, 40);
        std::size_t best = 0;
        double best_v = cost(grid[0]);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double v = cost(grid[i]);
            if (v < best_v) {
                best_v = v;
                best = i;
            }
        }
        const double a = grid[best > 0 ? best - 1 : 0];
        const double b = grid[best + 1 < grid.size() ? best + 1 : best];
        auto [tau_min, v_min] = golden_min(cost, a, b, 1e-6);
        if (best_v < v_min) {
            tau_min = grid[best];
            v_min = best_v;
        }
        rows.push_back(ScalingRow{n, v_min, tau_min});
    }
    return rows;
}

}  // namespace qfreq
