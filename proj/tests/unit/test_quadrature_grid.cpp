#include <doctest.h>

#include <cmath>
#include <numbers>

#include "defspec/error.hpp"
#include "defspec/quadrature_grid.hpp"
#include "support/oracles.hpp"

using namespace defspec;
using doctest::Approx;
using std::numbers::pi;

TEST_CASE("uniform grids") {
    const OperatorParams p = canonical_params();
    const Grid g = uniform_grid(p, 4);
    REQUIRE(g.size() == 5);
    CHECK(g.points().front() == -p.v_c());
    CHECK(g.points().back() == p.v_c());
    CHECK(g.points()[2] == 0.0);
    REQUIRE(g.is_uniform());
    CHECK(*g.spacing() == Approx(p.v_c() / 2.0).epsilon(1e-15));
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(g.points()[i] == -g.points()[g.size() - 1 - i]);
    }
    CHECK_THROWS_AS(uniform_grid(p, 1), ValidationError);
}

TEST_CASE("grids from explicit points") {
    const OperatorParams p = canonical_params();
    const double v = p.v_c();
    const Grid g = Grid::from_points(p, {-v, -0.1, 0.5, v});
    CHECK_FALSE(g.is_uniform());
    CHECK_THROWS_AS(Grid::from_points(p, {-v, 0.2, 0.1, v}), ValidationError);
    CHECK_THROWS_AS(Grid::from_points(p, {-v, 0.0, 0.0, v}), ValidationError);
    CHECK_THROWS_AS(Grid::from_points(p, {-0.5, 0.0, v}), ValidationError);
    CHECK_THROWS_AS(Grid::from_points(p, {-v, 0.0, 0.8}), ValidationError);
    CHECK_THROWS_AS(Grid::from_points(p, {-v}), ValidationError);

    const Grid snapped = Grid::from_points(p, {-v * (1.0 + 1e-15), v * (1.0 - 1e-15)});
    CHECK(snapped.points().front() == -v);
    CHECK(snapped.points().back() == v);
}

TEST_CASE("Gauss-Legendre rules") {
    const OperatorParams p = canonical_params();
    const double v = p.v_c();

    SUBCASE("two nodes at +-v_c / sqrt(3)") {
        const QuadratureRule r = gauss_legendre_rule(p, 2);
        REQUIRE(r.size() == 2);
        CHECK(std::abs(r.nodes[0]) == Approx(0.47668651956892639).epsilon(1e-15));
        CHECK(r.nodes[0] == Approx(-r.nodes[1]).epsilon(1e-15));
        CHECK(r.weights[0] == Approx(v).epsilon(1e-15));
    }
    SUBCASE("weights sum to the interval length and are positive") {
        for (std::int64_t m : {1, 3, 8, 64, 513, 4096}) {
            const QuadratureRule r = gauss_legendre_rule(p, m);
            double total = 0.0;
            for (double w : r.weights) {
                CHECK(w > 0.0);
                total += w;
            }
            CHECK(total == Approx(2.0 * v).epsilon(1e-13));
            for (std::size_t i = 1; i < r.size(); ++i) {
                CHECK(r.nodes[i] > r.nodes[i - 1]);
            }
        }
    }
    SUBCASE("exact for polynomials up to degree 2m - 1") {
        const QuadratureRule r = gauss_legendre_rule(p, 4);
        CHECK(integrate(r, [](double x) { return std::pow(x, 6); }) ==
              Approx(0.074728530236381805).epsilon(1e-14));
        for (int degree = 0; degree <= 7; ++degree) {
            const double exact =
                degree % 2 == 1 ? 0.0 : 2.0 * std::pow(v, degree + 1) / (degree + 1);
            CHECK(integrate(r, [degree](double x) { return std::pow(x, degree); }) ==
                  Approx(exact).epsilon(1e-14).scale(1.0));
        }
    }
    SUBCASE("matches the trapezoid oracle on a smooth integrand") {
        auto f = [](double x) { return std::exp(x) * std::cos(3.0 * x); };
        const double reference = oracle::trapezoid(f, -v, v, 1 << 16);
        CHECK(integrate(gauss_legendre_rule(p, 32), f) == Approx(reference).epsilon(1e-9));
    }
    SUBCASE("size limits") {
        CHECK_THROWS_AS(gauss_legendre_rule(p, 0), ValidationError);
        CHECK_THROWS_AS(gauss_legendre_rule(p, max_gauss_legendre_nodes + 1), ValidationError);
    }
}

TEST_CASE("composite Simpson rules") {
    const OperatorParams p = canonical_params();
    const double v = p.v_c();
    const QuadratureRule r = composite_simpson_rule(p, 5);
    REQUIRE(r.size() == 5);
    CHECK(integrate(r, [](double x) { return x * x * x + x * x; }) ==
          Approx(2.0 * v * v * v / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(composite_simpson_rule(p, 4), ValidationError);
    CHECK_THROWS_AS(composite_simpson_rule(p, 1), ValidationError);

    auto f = [](double x) { return std::exp(x); };
    const double exact = std::exp(v) - std::exp(-v);
    const double e1 = std::abs(integrate(composite_simpson_rule(p, 33), f) - exact);
    const double e2 = std::abs(integrate(composite_simpson_rule(p, 65), f) - exact);
    CHECK(std::log2(e1 / e2) == Approx(4.0).epsilon(0.05));
}

TEST_CASE("default projection rule size") {
    const OperatorParams p = canonical_params();
    CHECK(default_projection_rule(p, 0).size() == 256);
    CHECK(default_projection_rule(p, 31).size() == 256);
    CHECK(default_projection_rule(p, 100).size() == 808);
    CHECK(default_projection_rule(p, 100).resolves_mode(100));
    CHECK_FALSE(gauss_legendre_rule(p, 100).resolves_mode(100));
}

TEST_CASE("integration rejects non-finite integrands") {
    const OperatorParams p = canonical_params();
    const QuadratureRule r = gauss_legendre_rule(p, 8);
    CHECK_THROWS_AS(integrate(r, [](double) { return std::nan(""); }), EvaluationError);
    CHECK_THROWS_AS(integrate(r, [](double x) { return 1.0 / (x - x); }), EvaluationError);
}

TEST_CASE("sampled functions") {
    const OperatorParams p = canonical_params();
    const Grid g = uniform_grid(p, 10);
    CHECK_THROWS_AS(SampledFunction(g, std::vector<double>(10, 0.0)), ValidationError);
    std::vector<double> bad(11, 0.0);
    bad[3] = INFINITY;
    CHECK_THROWS_AS(SampledFunction(g, bad), ValidationError);
    const SampledFunction sf = sample(g, [](double x) { return -2.0 * x; });
    CHECK(sup_norm(sf.values()) == Approx(2.0 * p.v_c()));
}

TEST_CASE("finite-difference derivatives") {
    const OperatorParams p = canonical_params();

    SUBCASE("exact on quadratics including the boundary stencils") {
        const SampledFunction sf = sample(uniform_grid(p, 20), [](double x) { return 3.0 * x * x - x + 2.0; });
        const SampledFunction d1 = fd_derivative(sf, 1);
        const SampledFunction d2 = fd_derivative(sf, 2);
        for (std::size_t i = 0; i < sf.size(); ++i) {
            const double x = sf.grid().points()[i];
            CHECK(d1.values()[i] == Approx(6.0 * x - 1.0).epsilon(1e-10).scale(1.0));
            CHECK(d2.values()[i] == Approx(6.0).epsilon(1e-10));
        }
    }
    SUBCASE("third and fourth derivatives are exact on low-degree polynomials") {
        const SampledFunction cubic = sample(uniform_grid(p, 40), [](double x) { return x * x * x; });
        const SampledFunction d3 = fd_derivative(cubic, 3);
        for (double value : d3.values()) {
            CHECK(value == Approx(6.0).epsilon(1e-6));
        }
        const SampledFunction quartic = sample(uniform_grid(p, 40), [](double x) { return x * x * x * x; });
        const SampledFunction d4 = fd_derivative(quartic, 4);
        for (double value : d4.values()) {
            CHECK(value == Approx(24.0).epsilon(1e-5));
        }
    }
    SUBCASE("second-order convergence on a sine") {
        for (int order = 1; order <= 4; ++order) {
            auto error = [&](std::int64_t m) {
                const SampledFunction sf = sample(uniform_grid(p, m), [](double x) { return std::sin(2.0 * x); });
                const SampledFunction d = fd_derivative(sf, order);
                double worst = 0.0;
                for (std::size_t i = 0; i < sf.size(); ++i) {
                    const double x = sf.grid().points()[i];
                    const double exact = std::pow(2.0, order) * std::sin(2.0 * x + order * pi / 2.0);
                    worst = std::max(worst, std::abs(d.values()[i] - exact));
                }
                return worst;
            };
            const double rate = std::log2(error(200) / error(400));
            CHECK_MESSAGE(rate == Approx(2.0).epsilon(0.1), "order " << order);
        }
    }
    SUBCASE("errors") {
        const SampledFunction small = sample(uniform_grid(p, 6), [](double x) { return x; });
        CHECK_THROWS_AS(fd_derivative(small, 3), ResolutionError);
        CHECK_THROWS_AS(fd_derivative(small, 0), ValidationError);
        CHECK_THROWS_AS(fd_derivative(small, 5), ValidationError);
        const Grid irregular = Grid::from_points(p, {-p.v_c(), -0.5, -0.2, 0.0, 0.1, 0.3, 0.5, 0.7, p.v_c()});
        const SampledFunction sf = sample(irregular, [](double x) { return x; });
        CHECK_THROWS_AS(fd_derivative(sf, 1), ValidationError);
    }
}
