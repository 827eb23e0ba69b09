#include "qfreq/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qfreq {

namespace {

constexpr double kSeriesThreshold = 1e-6;  // in gamma*t

// (1 - e^{-x}) / x to 4th order.
double expm1_over_x(double x) {
    return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0 +
           x * x * x * x / 120.0;
}

// 2 (x + e^{-x} - 1) / x^2 to 4th order.
double two_remainder_over_x2(double x) {
    return 1.0 - x / 3.0 + x * x / 12.0 - x * x * x / 60.0 +
           x * x * x * x / 360.0;
}

}  // namespace

void check_params(const OUParams& p) {
    if (p.alpha < 0.0) throw std::invalid_argument("OU alpha must be >= 0");
    if (p.gamma <= 0.0) throw std::invalid_argument("OU gamma must be > 0");
    if (p.initial_variance < 0.0)
        throw std::invalid_argument("OU initial_variance must be >= 0");
}

void check_params(const WhiteNoiseParams& p) {
    if (p.beta < 0.0) throw std::invalid_argument("beta must be >= 0");
}

double ou_variance(const OUParams& p, double t) {
    check_params(p);
    if (t < 0.0) throw std::invalid_argument("ou_variance: t must be >= 0");
    const double decay = std::exp(-2.0 * p.gamma * t);
    return p.initial_variance * decay + p.alpha * (1.0 - decay);
}

double ou_k1(const OUParams& p, double t) {
    check_params(p);
    if (t < 0.0) throw std::invalid_argument("ou_k1: t must be >= 0");
    const double x = p.gamma * t;
    if (x < kSeriesThreshold) {
        const double u = expm1_over_x(x);  // (1-e^{-x})/x
        return p.initial_variance * u + p.alpha * x * u * u;
    }
    const double e = -std::expm1(-x);  // 1 - e^{-x}, cancellation-free
    return (p.initial_variance * e + p.alpha * e * e) / x;
}

double ou_k1_sampled(const OUParams& p, double t) {
    check_params(p);
    if (t < 0.0)
        throw std::invalid_argument("ou_k1_sampled: t must be >= 0");
    const double x = p.gamma * t;
    if (x < kSeriesThreshold) {
        const double u = expm1_over_x(x);
        return p.initial_variance * u * (1.0 - x * u) +
               p.alpha * x * u * u;
    }
    const double e1 = -std::expm1(-x);  // 1 - e^{-x}
    const double e0 = std::exp(-x);
    return e1 * (p.alpha * e1 + p.initial_variance * e0) / x;
}

double ou_k2(const OUParams& p, double t) {
    check_params(p);
    if (t < 0.0) throw std::invalid_argument("ou_k2: t must be >= 0");
    const double x = p.gamma * t;
    if (x < kSeriesThreshold) {
        const double u = expm1_over_x(x);
        return (p.initial_variance - p.alpha) * u * u +
               p.alpha * two_remainder_over_x2(x);
    }
    const double e = std::expm1(-x);  // e^{-x} - 1
    return ((p.initial_variance - p.alpha) * e * e +
            2.0 * p.alpha * (x + e)) /
           (x * x);
}

double white_k2(const WhiteNoiseParams& p, double t) {
    check_params(p);
    if (t <= 0.0)
        throw std::invalid_argument("white_k2: divergent at t = 0");
    return p.beta / t;
}

double effective_prior_variance(const OUParams& ou, const WhiteNoiseParams& wn,
                                double t) {
    return ou_k2(ou, t) + white_k2(wn, t);
}

std::vector<double> sample_ou_path(const OUParams& p, double t_end, double dt,
                                   std::uint64_t seed) {
    check_params(p);
    if (dt <= 0.0) throw std::invalid_argument("sample_ou_path: dt must be > 0");
    if (t_end < dt)
        throw std::invalid_argument("sample_ou_path: t_end must be >= dt");
    const auto n_steps = static_cast<std::size_t>(std::llround(t_end / dt));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double decay = std::exp(-p.gamma * dt);
    const double kick = std::sqrt(p.alpha * (1.0 - decay * decay));

    std::vector<double> path(n_steps + 1);
    path[0] = std::sqrt(p.initial_variance) * gauss(rng);
    for (std::size_t k = 1; k <= n_steps; ++k)
        path[k] = path[k - 1] * decay + kick * gauss(rng);
    return path;
}

}  // namespace qfreq
