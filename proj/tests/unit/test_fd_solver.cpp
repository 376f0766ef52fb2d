#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "defspec/analytic_spectrum.hpp"
#include "defspec/error.hpp"
#include "defspec/fd_solver.hpp"
#include "support/oracles.hpp"

using namespace defspec;
using doctest::Approx;
using std::numbers::pi;

TEST_CASE("discretization entries") {
    const OperatorParams p = canonical_params();
    const TridiagonalSymmetricMatrix a = discretize(p, 3);
    REQUIRE(a.dim() == 3);
    CHECK(fd_spacing(p, 3) == Approx(0.41282263558827819).epsilon(1e-15));
    const double h = fd_spacing(p, 3);
    const double s = 1.0 / (h * h);
    for (double d : a.diag()) {
        CHECK(d == Approx(pi * (1.0 - 2.0 * s)).epsilon(1e-15));
    }
    for (double e : a.offdiag()) {
        CHECK(e == Approx(pi * s).epsilon(1e-15));
    }
    const auto x = fd_interior_points(p, 3);
    REQUIRE(x.size() == 3);
    CHECK(x[1] == Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(discretize(p, 2), ValidationError);
}

TEST_CASE("m = 3 eigenvalues match the Toeplitz closed form") {
    const OperatorParams p = canonical_params();
    const auto lambda = eigenvalues_tridiagonal(discretize(p, 3));
    REQUIRE(lambda.size() == 3);
    CHECK(lambda[0] == Approx(-7.6568762208899367).epsilon(1e-12));
    CHECK(lambda[1] == Approx(-33.726686230522632).epsilon(1e-12));
    CHECK(lambda[2] == Approx(-59.796496240155326).epsilon(1e-12));
}

TEST_CASE("Toeplitz eigenvalues for several sizes") {
    const OperatorParams p = canonical_params();
    for (std::int64_t m : {3, 10, 100}) {
        const TridiagonalSymmetricMatrix a = discretize(p, m);
        const auto computed = eigenvalues_tridiagonal(a);
        const auto expected = oracle::toeplitz_eigenvalues(a.diag()[0], a.offdiag()[0], m);
        REQUIRE(computed.size() == expected.size());
        const double scale = a.norm_inf();
        for (std::size_t j = 0; j < computed.size(); ++j) {
            CHECK(std::abs(computed[j] - expected[j]) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("Sturm count against dense Jacobi eigenvalues") {
    std::mt19937_64 rng(20241015);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    std::uniform_int_distribution<int> size(1, 12);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = size(rng);
        std::vector<double> d(m);
        std::vector<double> e(m - 1);
        for (double& x : d) {
            x = dist(rng);
        }
        for (double& x : e) {
            x = dist(rng);
            if (std::abs(x) < 0.05) {
                x = 0.5;
            }
        }
        const TridiagonalSymmetricMatrix a(d, e);
        const auto roots = oracle::jacobi_eigenvalues(d, e);
        const auto computed = eigenvalues_tridiagonal(a);
        REQUIRE(computed.size() == roots.size());
        for (std::size_t j = 0; j < roots.size(); ++j) {
            CHECK(computed[j] == Approx(roots[j]).epsilon(1e-9).scale(1.0));
        }
        // Counts below points between consecutive roots.
        for (std::size_t j = 0; j + 1 < roots.size(); ++j) {
            const double mid = 0.5 * (roots[j] + roots[j + 1]);
            CHECK(a.count_below(mid) == roots.size() - 1 - j);
        }
        const auto [lo, hi] = a.gershgorin_bounds();
        CHECK(a.count_below(lo - 1.0) == 0);
        CHECK(a.count_below(hi + 1.0) == roots.size());
    }
}

TEST_CASE("matrix validation and basic operations") {
    CHECK_THROWS_AS(TridiagonalSymmetricMatrix({}, {}), ValidationError);
    CHECK_THROWS_AS(TridiagonalSymmetricMatrix({1.0, 2.0}, {}), ValidationError);
    CHECK_THROWS_AS(TridiagonalSymmetricMatrix({1.0, std::nan("")}, {0.0}), ValidationError);
    const TridiagonalSymmetricMatrix a({2.0, 3.0, 4.0}, {1.0, -1.0});
    const auto y = a.multiply(std::vector<double>{1.0, 1.0, 1.0});
    CHECK(y == std::vector<double>{3.0, 3.0, 3.0});
    CHECK(a.norm_inf() == 5.0);
    CHECK_THROWS_AS(eigenvalue_by_rank(a, 3), ValidationError);
    const TridiagonalSymmetricMatrix one({7.0}, {});
    CHECK(eigenvalue_by_rank(one, 0) == 7.0);
}

TEST_CASE("inverse iteration recovers sampled eigenfunctions") {
    const OperatorParams p = canonical_params();
    const std::int64_t m = 400;
    const TridiagonalSymmetricMatrix a = discretize(p, m);
    const auto x = fd_interior_points(p, m);
    const double h = fd_spacing(p, m);
    for (std::size_t rank : {0u, 1u, 5u}) {
        const double lambda = eigenvalue_by_rank(a, rank);
        const InverseIterationResult r = eigenvector_inverse_iteration(a, lambda);
        CHECK_FALSE(r.clustered);
        CHECK(r.residual <= 1e-8 * std::max(1.0, a.norm_inf()));
        CHECK(r.rayleigh_quotient == Approx(lambda).epsilon(1e-10));
        double norm = 0.0;
        for (double value : r.vector) {
            norm += value * value;
        }
        CHECK(norm == Approx(1.0).epsilon(1e-12));
        CHECK(r.vector.front() > 0.0);
        // The discrete eigenvector of a Toeplitz tridiagonal is exactly the
        // sampled sine; compare against psi_rank scaled to unit norm.
        double overlap = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            overlap += r.vector[i] * oracle::psi(static_cast<std::int64_t>(rank), x[i], p.v_c()) * std::sqrt(h);
        }
        CHECK(std::abs(overlap) == Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("inverse iteration is deterministic") {
    const TridiagonalSymmetricMatrix a = discretize(canonical_params(), 50);
    const double lambda = eigenvalue_by_rank(a, 2);
    const auto r1 = eigenvector_inverse_iteration(a, lambda);
    const auto r2 = eigenvector_inverse_iteration(a, lambda);
    CHECK(r1.vector == r2.vector);
    CHECK(r1.iterations == r2.iterations);
}

TEST_CASE("inverse iteration flags clustered eigenvalues") {
    const TridiagonalSymmetricMatrix a({1.0, 1.0, 5.0}, {0.0, 0.0});
    const auto r = eigenvector_inverse_iteration(a, 1.0);
    CHECK(r.clustered);
    CHECK(r.residual < 1e-8);
}

TEST_CASE("validation against the closed-form spectrum") {
    const OperatorParams p = canonical_params();
    const FDSpectrumReport r = validate_against_analytic(p, 1000, 10);
    REQUIRE(r.eigenvalues_fd.size() == 10);
    for (std::size_t n = 0; n < 10; ++n) {
        CHECK(r.eigenvalues_analytic[n] == eigenvalue(p, static_cast<std::int64_t>(n)));
        CHECK(r.abs_errors[n] == Approx(std::abs(r.eigenvalues_fd[n] - r.eigenvalues_analytic[n])));
        // Discretization error pi (hbar/c)^2 k^4 h^2 / 12 to leading order.
        const double k = wavenumber(p, static_cast<std::int64_t>(n));
        CHECK(r.abs_errors[n] == Approx(pi * std::pow(k, 4) * r.h * r.h / 12.0).epsilon(1e-3));
        CHECK(r.eigenvalues_fd[n] > r.eigenvalues_analytic[n]);
    }
    CHECK_FALSE(r.convergence_order.has_value());
    CHECK_THROWS_AS(validate_against_analytic(p, 100, 26), ValidationError);
    CHECK_THROWS_AS(validate_against_analytic(p, 100, 0), ValidationError);
}

TEST_CASE("refinement study shows second-order convergence") {
    const OperatorParams p = canonical_params();
    const std::vector<std::int64_t> sizes{250, 500, 1000, 2000};
    const RefinementStudy study = refinement_study(p, sizes, 10);
    REQUIRE(study.orders.size() == 10);
    for (double order : study.orders) {
        CHECK(order == Approx(2.0).epsilon(0.05));
    }
    for (const FDSpectrumReport& r : study.reports) {
        REQUIRE(r.convergence_order.has_value());
        CHECK(*r.convergence_order == study.orders[0]);
    }
    CHECK_THROWS_AS(refinement_study(p, std::vector<std::int64_t>{250}, 10), ValidationError);
}
