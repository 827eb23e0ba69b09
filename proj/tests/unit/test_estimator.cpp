#include <doctest.h>

#include <random>

#include "qfreq/estimator.hpp"

using namespace qfreq;

namespace {

DensityMatrix random_full_rank_density(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Matrix rho = a * a.adjoint() + 0.1 * Matrix::Identity(dim, dim);
    rho /= rho.trace().real();
    return rho;
}

Matrix random_hermitian(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    return Matrix(0.5 * (a + a.adjoint()));
}

SymmetricState random_pure(int n_atoms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    SymmetricState s{n_atoms, Vector(n_atoms + 1)};
    for (int n = 0; n <= n_atoms; ++n) s.amplitudes(n) = Complex(gauss(rng), gauss(rng));
    s.amplitudes /= s.amplitudes.norm();
    return s;
}

double ghz_variance(int n, double t, double prior) {
    const double x = double(n) * double(n) * t * t * prior;
    return prior * (1.0 - x * std::exp(-x));
}

}  // namespace

TEST_CASE("average_state") {
    const auto rho = to_density(make_ghz(2));

    auto rb = average_state(rho, 1.0, 1.0);
    // Coherence damping exp(-(n-m)^2 t^2 v / 2) at n-m = 2: e^{-2}.
    CHECK(std::abs(rb(0, 2).real() - 0.06766764161830635) < 1e-16);
    CHECK(std::abs(rb(0, 2).imag()) == 0.0);
    CHECK(std::abs(rb(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(rb(2, 2) - 0.5) < 1e-15);
    CHECK(hermiticity_defect(rb) < 1e-15);

    // t = 0 and v = 0 leave the state alone.
    CHECK((average_state(rho, 0.0, 3.0) - rho).cwiseAbs().maxCoeff() == 0.0);
    CHECK((average_state(rho, 3.0, 0.0) - rho).cwiseAbs().maxCoeff() == 0.0);

    // Populations untouched for a generic state.
    const auto r5 = to_density(random_pure(5, 11));
    const auto rb5 = average_state(r5, 0.7, 2.3);
    for (int n = 0; n <= 5; ++n) CHECK(rb5(n, n) == r5(n, n));
    for (int n = 0; n <= 5; ++n)
        for (int m = 0; m <= 5; ++m)
            CHECK(std::abs(rb5(n, m)) <= std::abs(r5(n, m)) + 1e-18);

    CHECK_THROWS_AS(average_state(rho, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(average_state(rho, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("rho_prime_gaussian") {
    const auto rho = to_density(make_ghz(2));
    const auto h = number_operator(2);
    const auto rb = average_state(rho, 1.0, 1.0);
    const auto rp = rho_prime_gaussian(rb, h, 1.0, 1.0);

    // i t w rho_bar_{nm} (m - n): entry (0,2) = i * 2 * 0.5 e^{-2}.
    CHECK(std::abs(rp(0, 2) - Complex(0.0, 0.1353352832366127)) < 1e-16);
    CHECK(std::abs(rp(2, 0) - Complex(0.0, -0.1353352832366127)) < 1e-16);
    CHECK(hermiticity_defect(rp) < 1e-15);
    CHECK(std::abs(rp.trace()) < 1e-15);

    // Linear in both t and the weight.
    const auto rp2 = rho_prime_gaussian(rb, h, 2.0, 3.0);
    CHECK((rp2 - 6.0 * rp).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("solve_sld against a direct linear solve") {
    // The anticommutator equation on a full-rank 4x4 state is a plain
    // linear system, (I (x) rho + rho^T (x) I) vec(L) = 2 vec(rp).
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const int d = 4;
        const auto rho = random_full_rank_density(d, seed);
        Matrix rp = random_hermitian(d, seed + 100);
        rp -= (rp.trace() / double(d)) * Matrix::Identity(d, d);

        Matrix sys = Matrix::Zero(d * d, d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    sys(i + d * j, i + d * k) += rho(k, j);  // L rho
                    sys(i + d * j, k + d * j) += rho(i, k);  // rho L
                }
        Eigen::VectorXcd rhs(d * d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) rhs(i + d * j) = 2.0 * rp(i, j);
        const Eigen::VectorXcd lv = sys.fullPivLu().solve(rhs);
        Matrix l_ref(d, d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) l_ref(i, j) = lv(i + d * j);

        const auto l = solve_sld(rho, rp);
        CHECK((l - l_ref).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(hermiticity_defect(l) < 1e-10);
        // (1/2){L, rho} reproduces rp.
        const Matrix lhs = 0.5 * (l * rho + rho * l);
        CHECK((lhs - rp).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("solve_sld support handling") {
    // Pure-state rho with rp overlapping the support still has a solution.
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    Matrix rp = Matrix::Zero(2, 2);
    rp(0, 1) = Complex(0.0, 0.5);
    rp(1, 0) = Complex(0.0, -0.5);
    const auto l = solve_sld(rho, rp);
    // lambda = (1, 0); L_01 = 2 rp_01 / 1.
    CHECK(std::abs(l(0, 1) - Complex(0.0, 1.0)) < 1e-12);
    CHECK(std::abs(l(0, 0)) < 1e-12);

    CHECK_THROWS_AS(solve_sld(Matrix::Zero(2, 2), rp), std::invalid_argument);
}

TEST_CASE("qfi") {
    // GHZ averaged state: F = 2 t^2 N^2 g^2 where g = e^{-N^2 t^2 v / 2}.
    for (int n : {1, 2, 5}) {
        const double t = 0.3, v = 0.4;
        const auto rb = average_state(to_density(make_ghz(n)), t, v);
        const double g = std::exp(-0.5 * n * n * t * t * v);
        // Eigenvalues (1±g)/2 in the |0>,|N> block; the matrix element of H
        // between the ± eigenvectors is N/2, hence F = N^2 t^2 g^2.
        CHECK(qfi(rb, number_operator(n), t) ==
              doctest::Approx(n * n * t * t * g * g).epsilon(1e-10));
    }

    // Incoherent mixture carries no phase information.
    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 0.2;
    diag(1, 1) = 0.3;
    diag(2, 2) = 0.5;
    CHECK(qfi(diag, number_operator(2), 1.0) == doctest::Approx(0.0));
}

TEST_CASE("bayes_variance frozen pipeline value") {
    // GHZ, N = 2, prior 0.01 Hz^2, t = 1 s: ratio 1 - x e^{-x} at x = 0.04.
    const double prior = 0.01, t = 1.0;
    const auto rho = to_density(make_ghz(2));
    const auto h = number_operator(2);
    const auto rb = average_state(rho, t, prior);
    const auto rp = rho_prime_gaussian(rb, h, t, prior);
    const auto l = solve_sld(rb, rp);
    const double var = bayes_variance(prior, rb, rp, l);
    CHECK(var / prior == doctest::Approx(0.961568422433907).epsilon(1e-12));
    CHECK(var == doctest::Approx(ghz_variance(2, t, prior)).epsilon(1e-12));

    // The two extraction routes agree by construction; inconsistent inputs
    // are rejected.
    CHECK_THROWS_AS(bayes_variance(prior, rb, rp, Observable(2.0 * l)),
                    std::invalid_argument);
}

TEST_CASE("variance_via_qfi matches bayes_variance on random states") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const int n = 3 + int(seed % 5);
        const double t = 0.2 + 0.1 * double(seed);
        const double prior = 0.05;
        const auto rho = to_density(random_pure(n, seed + 40));
        const auto h = number_operator(n);
        const auto rb = average_state(rho, t, prior);
        const auto rp = rho_prime_gaussian(rb, h, t, prior);
        const auto l = solve_sld(rb, rp);
        const double v1 = bayes_variance(prior, rb, rp, l);
        const double v2 = variance_via_qfi(prior, rb, h, t);
        CHECK(v1 == doctest::Approx(v2).epsilon(1e-9));
        CHECK(v1 >= 0.0);
        CHECK(v1 <= prior);
    }
}

TEST_CASE("strategy_from_L") {
    Matrix l = Matrix::Zero(2, 2);
    l(0, 1) = l(1, 0) = 1.0;
    const auto s = strategy_from_L(l);
    CHECK(s.estimates(0) == doctest::Approx(-1.0));
    CHECK(s.estimates(1) == doctest::Approx(1.0));
    const Matrix gram = s.projectors.adjoint() * s.projectors;
    CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

    const auto lr = random_hermitian(6, 77);
    const auto sr = strategy_from_L(lr);
    const Matrix rec = sr.projectors *
                       sr.estimates.asDiagonal().toDenseMatrix().cast<Complex>() *
                       sr.projectors.adjoint();
    CHECK((rec - lr).cwiseAbs().maxCoeff() < 1e-10);
}
