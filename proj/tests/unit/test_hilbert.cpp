#include <doctest.h>

#include <random>

#include "qfreq/hilbert.hpp"

using namespace qfreq;

namespace {

Matrix random_hermitian(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    return Matrix(0.5 * (a + a.adjoint()));
}

}  // namespace

TEST_CASE("make_ghz") {
    const double r = 1.0 / std::sqrt(2.0);

    auto s1 = make_ghz(1);
    CHECK(s1.amplitudes(0).real() == doctest::Approx(r).epsilon(1e-15));
    CHECK(s1.amplitudes(1).real() == doctest::Approx(r).epsilon(1e-15));

    auto s2 = make_ghz(2);
    CHECK(std::abs(s2.amplitudes(0) - r) < 1e-15);
    CHECK(std::abs(s2.amplitudes(1)) == 0.0);
    CHECK(std::abs(s2.amplitudes(2) - r) < 1e-15);

    auto s5 = make_ghz(5);
    CHECK(state_norm_error(s5) < 1e-12);
    int nonzero = 0;
    for (int n = 0; n <= 5; ++n)
        if (std::abs(s5.amplitudes(n)) > 0) ++nonzero;
    CHECK(nonzero == 2);

    CHECK_THROWS_AS(make_ghz(0), std::invalid_argument);
}

TEST_CASE("make_product") {
    auto s1 = make_product(1);
    CHECK(std::abs(s1.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s1.amplitudes(1) - 1.0 / std::sqrt(2.0)) < 1e-15);

    // (|0>+|1>)^(x)2 / 2 expanded onto the Dicke basis by hand.
    auto s2 = make_product(2);
    CHECK(std::abs(s2.amplitudes(0) - 0.5) < 1e-14);
    CHECK(std::abs(s2.amplitudes(1) - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(s2.amplitudes(2) - 0.5) < 1e-14);

    CHECK(state_norm_error(make_product(20)) < 1e-12);
    CHECK_THROWS_AS(make_product(0), std::invalid_argument);
}

TEST_CASE("make_sine") {
    // sin(pi/3) = sin(2pi/3), normalized.
    auto s1 = make_sine(1);
    CHECK(std::abs(s1.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(s1.amplitudes(1) - 1.0 / std::sqrt(2.0)) < 1e-14);

    // sin(pi/4), sin(pi/2), sin(3pi/4) normalized -> (1/2, 1/sqrt2, 1/2).
    auto s2 = make_sine(2);
    CHECK(std::abs(s2.amplitudes(0) - 0.5) < 1e-14);
    CHECK(std::abs(s2.amplitudes(1) - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(s2.amplitudes(2) - 0.5) < 1e-14);

    for (int n_atoms : {3, 7, 12}) {
        auto s = make_sine(n_atoms);
        CHECK(state_norm_error(s) < 1e-12);
        for (int n = 0; n <= n_atoms; ++n) {
            CHECK(s.amplitudes(n).real() >= 0.0);
            CHECK(std::abs(s.amplitudes(n) - s.amplitudes(n_atoms - n)) <
                  1e-13);
        }
    }
    CHECK_THROWS_AS(make_sine(0), std::invalid_argument);
}

TEST_CASE("to_density") {
    auto rho = to_density(make_ghz(2));
    CHECK(std::abs(rho(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(rho(2, 2) - 0.5) < 1e-15);
    CHECK(std::abs(rho(0, 2) - 0.5) < 1e-15);
    CHECK(std::abs(rho(2, 0) - 0.5) < 1e-15);
    CHECK(std::abs(rho(1, 1)) == 0.0);

    SymmetricState basis{2, Vector::Zero(3)};
    basis.amplitudes(0) = 1.0;
    auto rho0 = to_density(basis);
    CHECK(std::abs(rho0(0, 0) - 1.0) < 1e-15);
    CHECK(rho0.cwiseAbs().sum() == doctest::Approx(1.0));

    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 20; ++rep) {
        SymmetricState s{6, Vector(7)};
        for (int n = 0; n < 7; ++n) s.amplitudes(n) = Complex(gauss(rng), gauss(rng));
        s.amplitudes /= s.amplitudes.norm();
        auto d = to_density(s);
        CHECK(std::abs(d.trace().real() - 1.0) < 1e-12);
        check_density(d);

        // Pure state: exactly one unit eigenvalue.
        auto spec = eigh(d);
        CHECK(std::abs(spec.eigenvalues.maxCoeff() - 1.0) < 1e-10);
        CHECK(spec.eigenvalues.head(6).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("eigh basics") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 0.3;
    d(1, 1) = 0.7;
    auto spec = eigh(d);
    CHECK(spec.eigenvalues(0) == doctest::Approx(0.3));
    CHECK(spec.eigenvalues(1) == doctest::Approx(0.7));
    CHECK((spec.eigenvectors.cwiseAbs() - Eigen::MatrixXd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    // GHZ averaged state: 2x2 coherent block with factor g has eigenvalues
    // (1 -/+ g)/2.
    const double g = 0.37;
    Matrix blk = Matrix::Zero(2, 2);
    blk(0, 0) = blk(1, 1) = 0.5;
    blk(0, 1) = blk(1, 0) = 0.5 * g;
    auto bspec = eigh(blk);
    CHECK(bspec.eigenvalues(0) == doctest::Approx((1 - g) / 2).epsilon(1e-12));
    CHECK(bspec.eigenvalues(1) == doctest::Approx((1 + g) / 2).epsilon(1e-12));

    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_WITH_AS(eigh(bad), doctest::Contains("symmetry violation"),
                         std::invalid_argument);
}

TEST_CASE("eigh reconstruction on random 30x30") {
    const Matrix a = random_hermitian(30, 42);
    auto spec = eigh(a, 1e-9);
    const Matrix rec = spec.eigenvectors *
                       spec.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                       spec.eigenvectors.adjoint();
    CHECK((rec - a).cwiseAbs().maxCoeff() < 1e-10);
    const Matrix gram = spec.eigenvectors.adjoint() * spec.eigenvectors;
    CHECK((gram - Matrix::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 1; i < 30; ++i)
        CHECK(spec.eigenvalues(i) >= spec.eigenvalues(i - 1));
}
