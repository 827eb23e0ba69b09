#include "qfreq/oracle.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qfreq {

namespace {

// Accumulates entrywise mean and variance of complex matrices plus two
// scalar channels (phase-integral statistics). Mergeable; chunk count is
// fixed so results do not depend on the thread count.
struct McAccumulator {
    Matrix sum;
    Eigen::MatrixXd sum_sq_re, sum_sq_im;
    double s_k1 = 0.0, s_k1_sq = 0.0;
    double s_k2 = 0.0, s_k2_sq = 0.0;
    long long count = 0;

    explicit McAccumulator(Eigen::Index d)
        : sum(Matrix::Zero(d, d)),
          sum_sq_re(Eigen::MatrixXd::Zero(d, d)),
          sum_sq_im(Eigen::MatrixXd::Zero(d, d)) {}

    void add_matrix(const Matrix& m) {
        sum += m;
        sum_sq_re += m.real().cwiseProduct(m.real());
        sum_sq_im += m.imag().cwiseProduct(m.imag());
    }

    void merge(const McAccumulator& o) {
        sum += o.sum;
        sum_sq_re += o.sum_sq_re;
        sum_sq_im += o.sum_sq_im;
        s_k1 += o.s_k1;
        s_k1_sq += o.s_k1_sq;
        s_k2 += o.s_k2;
        s_k2_sq += o.s_k2_sq;
        count += o.count;
    }
};

constexpr int kMcChunks = 128;

std::atomic<unsigned> g_mc_threads{0};

double stderr_of(double sum, double sum_sq, long long n) {
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
}

McMatrixEstimate finish_matrix(const McAccumulator& acc) {
    McMatrixEstimate est;
    const long long n = acc.count;
    est.samples = n;
    est.value = acc.sum / double(n);
    const Eigen::Index d = acc.sum.rows();
    est.stderr_re.resize(d, d);
    est.stderr_im.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            est.stderr_re(i, j) =
                stderr_of(acc.sum(i, j).real(), acc.sum_sq_re(i, j), n);
            est.stderr_im(i, j) =
                stderr_of(acc.sum(i, j).imag(), acc.sum_sq_im(i, j), n);
        }
    return est;
}

enum class McTarget { average_state, rho_prime, kernels };

// One pass over `n_samples` OU trajectories. The white-noise phase kick is
// drawn exactly (variance beta t); delta-correlated noise has no pathwise
// representation.
McAccumulator run_trajectories(const SymmetricState& state, const OUParams& ou,
                               double beta, double t, long long n_samples,
                               double dt, std::uint64_t seed,
                               McTarget target) {
    if (n_samples < 100)
        throw std::invalid_argument("Monte Carlo needs n_samples >= 100");
    const Eigen::Index d = state.dim();
    const double white_sigma = std::sqrt(beta * t);

    auto run_chunk = [&](std::uint64_t chunk_seed,
                         long long count) -> McAccumulator {
        McAccumulator acc(d);
        std::mt19937_64 kick_rng(chunk_seed ^ 0x9e3779b97f4a7c15ull);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Matrix m(d, d);
        for (long long k = 0; k < count; ++k) {
            const auto path =
                sample_ou_path(ou, t, dt, chunk_seed + std::uint64_t(k));
            // Trapezoidal phase integral of the sampled path.
            double phi = 0.5 * (path.front() + path.back());
            for (std::size_t i = 1; i + 1 < path.size(); ++i) phi += path[i];
            phi *= dt;

            acc.count += 1;
            if (target == McTarget::kernels) {
                const double k2s = phi * phi / (t * t);
                const double k1s = phi * path.back() / t;
                acc.s_k1 += k1s;
                acc.s_k1_sq += k1s * k1s;
                acc.s_k2 += k2s;
                acc.s_k2_sq += k2s * k2s;
                continue;
            }

            double total_phase = phi;
            if (white_sigma > 0.0) total_phase += white_sigma * gauss(kick_rng);
            const double scale =
                (target == McTarget::rho_prime) ? path.back() : 1.0;
            for (Eigen::Index n = 0; n < d; ++n)
                for (Eigen::Index mcol = 0; mcol < d; ++mcol) {
                    const double arg = -double(n - mcol) * total_phase;
                    m(n, mcol) = scale * state.amplitudes(n) *
                                 std::conj(state.amplitudes(mcol)) *
                                 Complex(std::cos(arg), std::sin(arg));
                }
            acc.add_matrix(m);
        }
        return acc;
    };

    // Fixed chunking with per-chunk seed blocks and ordered merging keeps
    // the estimate independent of the worker count.
    const long long per_chunk = n_samples / kMcChunks;
    const long long remainder = n_samples % kMcChunks;
    std::vector<McAccumulator> results(kMcChunks, McAccumulator(d));
    std::atomic<int> next_chunk{0};
    auto worker = [&]() {
        for (int c = next_chunk.fetch_add(1); c < kMcChunks;
             c = next_chunk.fetch_add(1)) {
            const long long count = per_chunk + (c < remainder ? 1 : 0);
            const std::uint64_t chunk_seed =
                seed + std::uint64_t(c) * 0x100000000ull;
            results[c] = run_chunk(chunk_seed, count);
        }
    };
    unsigned n_threads = g_mc_threads.load();
    if (n_threads == 0)
        n_threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    McAccumulator total(d);
    for (const auto& acc : results) total.merge(acc);
    return total;
}

}  // namespace

void set_mc_threads(unsigned n) { g_mc_threads.store(n); }

McMatrixEstimate mc_average_state(const SymmetricState& state,
                                  const OUParams& ou,
                                  const WhiteNoiseParams& wn, double t,
                                  long long n_samples, double dt,
                                  std::uint64_t seed) {
    check_params(wn);
    return finish_matrix(run_trajectories(state, ou, wn.beta, t, n_samples, dt,
                                          seed, McTarget::average_state));
}

McMatrixEstimate mc_rho_prime(const SymmetricState& state, const OUParams& ou,
                              double t, long long n_samples, double dt,
                              std::uint64_t seed) {
    return finish_matrix(run_trajectories(state, ou, 0.0, t, n_samples, dt,
                                          seed, McTarget::rho_prime));
}

McKernelEstimate mc_kernels(const OUParams& ou, double t, long long n_samples,
                            double dt, std::uint64_t seed) {
    SymmetricState dummy{1, Vector::Zero(2)};
    dummy.amplitudes(0) = 1.0;
    McAccumulator acc = run_trajectories(dummy, ou, 0.0, t, n_samples, dt, seed,
                                         McTarget::kernels);
    McKernelEstimate est;
    est.samples = acc.count;
    est.k1 = acc.s_k1 / acc.count;
    est.k1_stderr = stderr_of(acc.s_k1, acc.s_k1_sq, acc.count);
    est.k2 = acc.s_k2 / acc.count;
    est.k2_stderr = stderr_of(acc.s_k2, acc.s_k2_sq, acc.count);
    return est;
}

GaussHermiteRule gauss_hermite(int points) {
    if (points < 1) throw std::invalid_argument("gauss_hermite: points >= 1");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
    for (int k = 1; k < points; ++k) {
        const double b = std::sqrt(k / 2.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    GaussHermiteRule rule;
    rule.nodes = solver.eigenvalues();
    rule.weights.resize(points);
    const double sqrt_pi = std::sqrt(M_PI);
    for (int i = 0; i < points; ++i) {
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights(i) = sqrt_pi * v0 * v0;
    }
    return rule;
}

double direct_cost(const SymmetricState& state,
                   const EstimationStrategy& strategy,
                   const GaussianPriorSpec& prior, double t, int quad_points) {
    if (quad_points < 32)
        throw std::invalid_argument("direct_cost: quad_points must be >= 32");
    if (prior.variance <= 0.0)
        throw std::invalid_argument("direct_cost: prior variance must be > 0");
    const Matrix& basis = strategy.projectors;
    const Matrix gram = basis.adjoint() * basis;
    if ((gram - Matrix::Identity(gram.rows(), gram.cols()))
            .cwiseAbs()
            .maxCoeff() > 1e-8)
        throw std::invalid_argument("direct_cost: strategy is not orthonormal");
    if (strategy.estimates.size() != basis.cols())
        throw std::invalid_argument(
            "direct_cost: estimate count does not match projector count");

    const GaussHermiteRule rule = gauss_hermite(quad_points);
    const double sigma = std::sqrt(prior.variance);
    const Eigen::Index d = state.dim();
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);

    double cost = 0.0;
    Vector psi(d);
    for (int k = 0; k < quad_points; ++k) {
        const double omega = std::sqrt(2.0) * sigma * rule.nodes(k);
        for (Eigen::Index n = 0; n < d; ++n) {
            const double arg = -double(n) * omega * t;
            psi(n) = state.amplitudes(n) * Complex(std::cos(arg), std::sin(arg));
        }
        const Vector amps = basis.adjoint() * psi;
        double inner = 0.0;
        for (Eigen::Index x = 0; x < amps.size(); ++x) {
            const double delta = omega - strategy.estimates(x);
            inner += std::norm(amps(x)) * delta * delta;
        }
        cost += rule.weights(k) * inv_sqrt_pi * inner;
    }
    return cost;
}

Matrix random_unitary(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column phases so the distribution is Haar.
    for (int j = 0; j < dim; ++j) {
        const Complex rjj = r(j, j);
        if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
    }
    return q;
}

EstimationStrategy strategy_with_optimal_estimates(
    const Matrix& basis, const SymmetricState& state,
    const GaussianPriorSpec& prior, double t) {
    const Observable h = number_operator(state.n_atoms);
    const DensityMatrix rho_bar =
        average_state(to_density(state), t, prior.variance);
    const Matrix rho_prime = rho_prime_gaussian(rho_bar, h, t, prior.variance);
    EstimationStrategy s;
    s.projectors = basis;
    s.estimates.resize(basis.cols());
    for (Eigen::Index x = 0; x < basis.cols(); ++x) {
        const Vector col = basis.col(x);
        const double num = (col.adjoint() * rho_prime * col)(0).real();
        const double den = (col.adjoint() * rho_bar * col)(0).real();
        s.estimates(x) = den > 1e-300 ? num / den : 0.0;
    }
    return s;
}

}  // namespace qfreq
