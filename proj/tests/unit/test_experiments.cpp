#include <doctest.h>

#include <cmath>
#include <numbers>

#include "defspec/analytic_spectrum.hpp"
#include "defspec/error.hpp"
#include "defspec/experiments.hpp"
#include "defspec/transform.hpp"
#include "support/oracles.hpp"

using namespace defspec;
using doctest::Approx;
using std::numbers::pi;

TEST_CASE("asymptotics report") {
    const OperatorParams p = canonical_params();
    const ExperimentReport r = asymptotics_report(p, 100, 1000);
    CHECK(r.name == "asymptotics");
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.column("n").size() == 901);
    const double alpha = 11.371103985475808;
    const auto& remainder = r.column("remainder");
    const auto& n = r.column("n");
    for (std::size_t i = 0; i < n.size(); i += 100) {
        CHECK(remainder[i] == Approx(-alpha * (2.0 * n[i] + 1.0)).epsilon(1e-12));
    }
    CHECK(std::abs(r.column("remainder_over_n").back() + 2.0 * alpha) <= alpha / 1000.0 + 1e-9);
    CHECK(r.column("ratio_to_leading").back() == Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(r.column("missing"), std::out_of_range);
    CHECK_THROWS_AS(asymptotics_report(p, 0, 10), ValidationError);
    CHECK_THROWS_AS(asymptotics_report(p, 10, 10), ValidationError);
}

TEST_CASE("rigidity: uniform coefficients cannot converge to a constant") {
    const OperatorParams p = canonical_params();
    const std::vector<std::int64_t> Ns{8, 16, 32, 64, 128, 256};
    const ExperimentReport r = rigidity_report(p, Ns);
    CHECK(r.verdict == Verdict::pass);
    const auto& norm_sq = r.column("norm_sq");
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        CHECK(norm_sq[i] == Approx(pi * pi * static_cast<double>(Ns[i] + 1)).epsilon(1e-10));
        CHECK(r.column("S_N_left")[i] == 0.0);
        CHECK(r.column("S_N_right")[i] == 0.0);
        CHECK(r.column("boundary_gap")[i] >= pi - 1e-9);
    }
    const auto& dist = r.column("l2_distance_to_pi");
    for (std::size_t i = 1; i < dist.size(); ++i) {
        CHECK(dist[i] > dist[i - 1]);
    }
}

TEST_CASE("rigidity partial sum against a direct sine sum") {
    const OperatorParams p = canonical_params();
    const Grid g = uniform_grid(p, 4000);
    const SampledFunction s = rigidity_partial_sum(p, 32, g);
    double sup = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double direct = 0.0;
        for (std::int64_t n = 0; n <= 32; ++n) {
            direct += oracle::psi(n, g.points()[i], p.v_c());
        }
        CHECK(s.values()[i] == Approx(pi * direct).epsilon(1e-11).scale(1.0));
        sup = std::max(sup, std::abs(direct));
    }
    CHECK(sup == Approx(26.71009516).epsilon(1e-8));
}

TEST_CASE("constant projection is a documented discrepancy") {
    const OperatorParams p = canonical_params();
    const ExperimentReport r = constant_projection_report(p, 20);
    CHECK(r.verdict == Verdict::documented_discrepancy);
    const auto& gl = r.column("gauss_legendre");
    const auto& simpson = r.column("simpson");
    for (std::int64_t n = 0; n <= 20; ++n) {
        const auto i = static_cast<std::size_t>(n);
        CHECK(std::abs(gl[i] - oracle::constant_projection(n, p.v_c())) < 1e-10);
        CHECK(std::abs(simpson[i] - oracle::constant_projection(n, p.v_c())) < 1e-10);
    }
    CHECK(r.metrics.at("max_abs_coefficient") == Approx(1.1569294266760277).epsilon(1e-12));
    CHECK_THROWS_AS(constant_projection_report(p, -1), ValidationError);
}

TEST_CASE("decay model") {
    const DecayModel model(1.0, 2.0, exponential_mode_weights(1.0), 32);
    CHECK(model.coefficient(0.0, 0) == Approx(pi + 1.0));
    CHECK(model.deviation(1.0, 3) == Approx(std::exp(-2.0) * std::exp(-3.0)).epsilon(1e-15));
    CHECK(model.deviation(300.0, 0) > 0.0);
    CHECK(exponential_mode_weights(0.0)(17) == 1.0);
    CHECK_THROWS_AS(DecayModel(-1.0, 2.0, exponential_mode_weights(1.0), 4), ValidationError);
    CHECK_THROWS_AS(DecayModel(1.0, 0.0, exponential_mode_weights(1.0), 4), ValidationError);
    CHECK_THROWS_AS(DecayModel(1.0, 1.0, [](std::int64_t) { return 2.0; }, 4), ValidationError);
    CHECK_THROWS_AS(exponential_mode_weights(-1.0), ValidationError);
}

TEST_CASE("inverse-limit trajectory and deviation agree") {
    const OperatorParams p = canonical_params();
    const DecayModel model(1.0, 2.0, exponential_mode_weights(1.0), 16);
    const Grid g = uniform_grid(p, 256);
    const SampledFunction c = inverse_limit_trajectory(model, p, 0.5, g);
    const SampledFunction d = inverse_limit_deviation(model, p, 0.5, g);
    const SampledFunction s = rigidity_partial_sum(p, 16, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(c.values()[i] - s.values()[i] == Approx(d.values()[i]).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("inverse-limit seminorms decay at the model rate") {
    const OperatorParams p = canonical_params();
    const DecayModel model(1.0, 2.0, exponential_mode_weights(1.0), 32);
    const std::vector<double> taus{1, 2, 3, 4, 5, 6, 7, 8};
    const Grid g = uniform_grid(p, seminorm_grid_points(32, 2));
    const ExperimentReport r = inverse_limit_report(model, p, taus, 2, g);
    CHECK(r.verdict == Verdict::pass);
    for (int k = 0; k <= 2; ++k) {
        CHECK(r.metrics.at("slope_k" + std::to_string(k)) == Approx(-2.0).epsilon(1e-9));
    }
    const auto& s0 = r.column("seminorm_k0");
    for (std::size_t i = 1; i < s0.size(); ++i) {
        CHECK(s0[i] / s0[i - 1] == Approx(std::exp(-2.0)).epsilon(1e-9));
    }
    CHECK(r.metrics.at("factorization_defect_k0") <= 1e-9);
}

TEST_CASE("inverse-limit error paths") {
    const OperatorParams p = canonical_params();
    const DecayModel model(1.0, 2.0, exponential_mode_weights(1.0), 8);
    const Grid g = uniform_grid(p, seminorm_grid_points(8, 4));
    CHECK_THROWS_WITH_AS(inverse_limit_report(model, p, std::vector<double>{2, 2, 2}, 2, g),
                         doctest::Contains("degenerate fit"), NumericalError);
    CHECK_THROWS_AS(inverse_limit_report(model, p, std::vector<double>{1, 2}, 2, g), ValidationError);
    CHECK_THROWS_AS(inverse_limit_report(model, p, std::vector<double>{1, 2, 3}, 5, g), ValidationError);
    const DecayModel flat(0.0, 2.0, exponential_mode_weights(1.0), 8);
    CHECK_THROWS_AS(inverse_limit_report(flat, p, std::vector<double>{1, 2, 3}, 2, g), NumericalError);
    CHECK_THROWS_AS(inverse_limit_report(model, p, std::vector<double>{1, 2, 3}, 2, uniform_grid(p, 16)),
                    ResolutionError);
    CHECK(seminorm_grid_points(8, 2) >= 64 * 9);
    CHECK(seminorm_grid_points(8, 4) >= 256 * 9);
}

TEST_CASE("reconstruction convergence of the deformation profile") {
    const OperatorParams p = canonical_params();
    auto profile = [&p](double v) { return deformation_profile(p, v); };
    const std::vector<std::int64_t> Ns{8, 16, 32, 64, 128};
    const ExperimentReport r = convergence_study(p, profile, Ns, gauss_legendre_rule(p, 2048));
    CHECK(r.verdict == Verdict::pass);
    const auto& l2 = r.column("l2_error");
    for (std::size_t i = 1; i < l2.size(); ++i) {
        CHECK(l2[i] <= l2[i - 1]);
    }
    CHECK(l2.back() < 0.08);
    // Tail of the even coefficients a_n ~ 1/n decays like N^(-1/2).
    CHECK(l2[3] / l2[4] == Approx(std::sqrt(2.0)).epsilon(0.05));
    const auto& sup = r.column("interior_sup_error");
    CHECK(sup.back() < sup.front());
}

TEST_CASE("reconstruction convergence of a single mode is exact") {
    const OperatorParams p = canonical_params();
    auto target = [&p](double v) { return eigenfunction_eval(p, 3, v); };
    const ExperimentReport r =
        convergence_study(p, target, std::vector<std::int64_t>{4, 8}, gauss_legendre_rule(p, 256));
    CHECK(r.column("l2_error").back() < 1e-12);
}
