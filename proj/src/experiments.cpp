#include "defspec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "defspec/analytic_spectrum.hpp"
#include "defspec/error.hpp"
#include "defspec/fit.hpp"
#include "defspec/transform.hpp"

namespace defspec {
namespace {

using std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();

std::vector<double> as_doubles(std::span<const std::int64_t> values) {
    return {values.begin(), values.end()};
}

void require_increasing(std::span<const std::int64_t> values, std::string_view what) {
    if (values.empty()) {
        throw ValidationError(fmt::format("{} must not be empty", what));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0 || (i > 0 && values[i] <= values[i - 1])) {
            throw ValidationError(
                fmt::format("{} must be non-negative and strictly increasing", what));
        }
    }
}

CoefficientVector uniform_coefficients(const OperatorParams& params, std::int64_t N, double value) {
    return CoefficientVector(params, std::vector<double>(static_cast<std::size_t>(N + 1), value));
}

}  // namespace

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::documented_discrepancy: return "documented_discrepancy";
    }
    return "unknown";
}

const std::vector<double>& ExperimentReport::column(std::string_view name) const {
    for (const auto& [key, values] : series) {
        if (key == name) {
            return values;
        }
    }
    throw std::out_of_range(fmt::format("report {} has no column {}", this->name, name));
}

ExperimentReport asymptotics_report(const OperatorParams& params, std::int64_t n_min,
                                    std::int64_t n_max, const AsymptoticsTolerances& tol) {
    if (n_min < 1 || n_max <= n_min) {
        throw ValidationError(
            fmt::format("asymptotics needs 1 <= n_min < n_max (got {}, {})", n_min, n_max));
    }
    const double alpha = asymptotic_coefficient(params);
    const auto rows = static_cast<std::size_t>(n_max - n_min + 1);
    std::vector<double> n_col, c_col, asym_col, rem_col, rem_n_col, ratio_col;
    for (auto* column : {&n_col, &c_col, &asym_col, &rem_col, &rem_n_col, &ratio_col}) {
        column->reserve(rows);
    }

    double worst_identity = 0.0;  // in units of the rounding allowance
    double worst_slope = 0.0;     // |remainder/n + 2 alpha| / (alpha / n)
    bool below_pi = true;
    for (std::int64_t n = n_min; n <= n_max; ++n) {
        const auto nd = static_cast<double>(n);
        const double c_n = eigenvalue(params, n);
        const double leading = asymptotic_eigenvalue(params, n);
        const double remainder = c_n - leading;
        const double expected = -alpha * (2.0 * nd + 1.0);
        const double allowance = tol.rounding_ulps * eps * (std::abs(c_n) + std::abs(leading));
        worst_identity = std::max(worst_identity, std::abs(remainder - expected) / allowance);
        const double slope_gap = std::abs(remainder / nd + 2.0 * alpha);
        worst_slope = std::max(worst_slope, (slope_gap - allowance / nd) / (alpha / nd));
        below_pi = below_pi && c_n < pi;

        n_col.push_back(nd);
        c_col.push_back(c_n);
        asym_col.push_back(leading);
        rem_col.push_back(remainder);
        rem_n_col.push_back(remainder / nd);
        ratio_col.push_back(c_n / (-alpha * nd * nd));
    }

    ExperimentReport report;
    report.name = "asymptotics";
    report.inputs["n_min"] = n_min;
    report.inputs["n_max"] = n_max;
    report.series = {{"n", std::move(n_col)},
                     {"C_n", std::move(c_col)},
                     {"asymptotic", std::move(asym_col)},
                     {"remainder", std::move(rem_col)},
                     {"remainder_over_n", std::move(rem_n_col)},
                     {"ratio_to_leading", std::move(ratio_col)}};
    report.tolerances["rounding_ulps"] = tol.rounding_ulps;
    report.metrics["alpha"] = alpha;
    report.metrics["identity_defect_over_allowance"] = worst_identity;
    report.metrics["slope_gap_over_alpha_per_n"] = worst_slope;
    report.metrics["all_below_pi"] = below_pi ? 1.0 : 0.0;
    report.verdict = (worst_identity <= 1.0 && worst_slope <= 1.0 && below_pi) ? Verdict::pass
                                                                               : Verdict::fail;
    return report;
}

SampledFunction rigidity_partial_sum(const OperatorParams& params, std::int64_t N, const Grid& grid) {
    return reconstruct(uniform_coefficients(params, N, pi), grid);
}

ExperimentReport rigidity_report(const OperatorParams& params, std::span<const std::int64_t> N_list,
                                 const RigidityTolerances& tol) {
    require_increasing(N_list, "N list");
    std::vector<double> norm_sq, ratio, left, right, gap, distance;
    bool parseval_ok = true;
    bool obstruction_ok = true;
    bool endpoints_ok = true;
    for (std::int64_t N : N_list) {
        const CoefficientVector coeffs = uniform_coefficients(params, N, pi);
        const QuadratureRule rule = default_projection_rule(params, N);
        const auto series = [&coeffs](double v) { return evaluate_series(coeffs, v); };
        const double s2 = integrate(rule, [&](double v) {
            const double s = series(v);
            return s * s;
        });
        const double dist = std::sqrt(integrate(rule, [&](double v) {
            const double d = series(v) - pi;
            return d * d;
        }));
        const Grid grid = uniform_grid(params, std::max<std::int64_t>(1024, 16 * (N + 1)));
        const SampledFunction partial = reconstruct(coeffs, grid);
        double sup_gap = 0.0;
        for (double value : partial.values()) {
            sup_gap = std::max(sup_gap, std::abs(value - pi));
        }
        const double s_left = partial.values().front();
        const double s_right = partial.values().back();

        const double r = s2 / static_cast<double>(N + 1);
        parseval_ok = parseval_ok && std::abs(r - pi * pi) <= tol.parseval_abs;
        obstruction_ok = obstruction_ok && sup_gap >= pi - tol.boundary_slack;
        endpoints_ok = endpoints_ok && std::abs(s_left) < tol.endpoint_abs &&
                       std::abs(s_right) < tol.endpoint_abs;

        norm_sq.push_back(s2);
        ratio.push_back(r);
        left.push_back(s_left);
        right.push_back(s_right);
        gap.push_back(sup_gap);
        distance.push_back(dist);
    }

    ExperimentReport report;
    report.name = "rigidity";
    report.inputs["N_list"] = std::vector<std::int64_t>(N_list.begin(), N_list.end());
    report.inputs["coefficient"] = pi;
    report.series = {{"N", as_doubles(N_list)},
                     {"norm_sq", std::move(norm_sq)},
                     {"norm_sq_over_N_plus_1", std::move(ratio)},
                     {"S_N_left", std::move(left)},
                     {"S_N_right", std::move(right)},
                     {"boundary_gap", std::move(gap)},
                     {"l2_distance_to_pi", std::move(distance)}};
    report.tolerances["parseval_abs"] = tol.parseval_abs;
    report.tolerances["boundary_slack"] = tol.boundary_slack;
    report.tolerances["endpoint_abs"] = tol.endpoint_abs;
    report.metrics["pi_squared"] = pi * pi;
    report.verdict = (parseval_ok && obstruction_ok && endpoints_ok) ? Verdict::pass : Verdict::fail;
    return report;
}

ExperimentReport constant_projection_report(const OperatorParams& params, std::int64_t N,
                                            const ConstantProjectionTolerances& tol) {
    if (N < 0) {
        throw ValidationError(fmt::format("N must be non-negative (got {})", N));
    }
    const QuadratureRule gauss = default_projection_rule(params, N);
    const QuadratureRule simpson =
        composite_simpson_rule(params, std::max<std::int64_t>(8193, 256 * (N + 1) + 1));
    const auto one = [](double) { return 1.0; };
    const CoefficientVector by_gauss = project(params, one, N, gauss);
    const CoefficientVector by_simpson = project(params, one, N, simpson);

    std::vector<double> n_col, closed, gl_col, simpson_col, gl_dev, simpson_dev;
    double worst = 0.0;
    double largest = 0.0;
    for (std::int64_t n = 0; n <= N; ++n) {
        const auto idx = static_cast<std::size_t>(n);
        const double exact =
            (n % 2 == 0) ? 4.0 * std::sqrt(params.v_c()) / (static_cast<double>(n + 1) * pi) : 0.0;
        n_col.push_back(static_cast<double>(n));
        closed.push_back(exact);
        gl_col.push_back(by_gauss[idx]);
        simpson_col.push_back(by_simpson[idx]);
        gl_dev.push_back(std::abs(by_gauss[idx] - exact));
        simpson_dev.push_back(std::abs(by_simpson[idx] - exact));
        worst = std::max({worst, gl_dev.back(), simpson_dev.back()});
        largest = std::max(largest, std::abs(by_gauss[idx]));
    }

    ExperimentReport report;
    report.name = "constant_projection";
    report.inputs["N"] = N;
    report.inputs["gauss_legendre_nodes"] = gauss.size();
    report.inputs["simpson_nodes"] = simpson.size();
    report.inputs["claim"] = "<1, psi_n> = 0 for all n";
    report.series = {{"n", std::move(n_col)},
                     {"closed_form", std::move(closed)},
                     {"gauss_legendre", std::move(gl_col)},
                     {"simpson", std::move(simpson_col)},
                     {"gauss_legendre_deviation", std::move(gl_dev)},
                     {"simpson_deviation", std::move(simpson_dev)}};
    report.tolerances["agreement"] = tol.agreement;
    report.metrics["max_deviation"] = worst;
    report.metrics["max_abs_coefficient"] = largest;
    if (worst > tol.agreement) {
        report.verdict = Verdict::fail;
    } else {
        report.verdict = largest > tol.agreement ? Verdict::documented_discrepancy : Verdict::pass;
    }
    return report;
}

ModeWeights exponential_mode_weights(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw ValidationError(fmt::format("mode decay rate must be >= 0 (got {})", rate));
    }
    return [rate](std::int64_t n) { return std::exp(-rate * static_cast<double>(n)); };
}

DecayModel::DecayModel(double amplitude, double beta, ModeWeights weights, std::int64_t N)
    : amplitude_(amplitude), beta_(beta), weights_(std::move(weights)), N_(N) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw ValidationError(fmt::format("amplitude A must be >= 0 (got {})", amplitude));
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ValidationError(fmt::format("decay rate beta must be positive (got {})", beta));
    }
    if (N < 0) {
        throw ValidationError(fmt::format("truncation index must be non-negative (got {})", N));
    }
    if (!weights_) {
        throw ValidationError("mode weights must be callable");
    }
    for (std::int64_t n = 0; n <= N; ++n) {
        if (!(std::abs(weights_(n)) <= 1.0)) {
            throw ValidationError(fmt::format("mode weight g({}) exceeds 1 in magnitude", n));
        }
    }
}

double DecayModel::deviation(double tau, std::int64_t n) const {
    return amplitude_ * std::exp(-beta_ * tau) * weights_(n);
}

double DecayModel::coefficient(double tau, std::int64_t n) const {
    return pi + deviation(tau, n);
}

SampledFunction inverse_limit_trajectory(const DecayModel& model, const OperatorParams& params,
                                         double tau, const Grid& grid) {
    std::vector<double> a(static_cast<std::size_t>(model.N() + 1));
    for (std::int64_t n = 0; n <= model.N(); ++n) {
        a[static_cast<std::size_t>(n)] = model.coefficient(tau, n);
    }
    return reconstruct(CoefficientVector(params, std::move(a)), grid);
}

SampledFunction inverse_limit_deviation(const DecayModel& model, const OperatorParams& params,
                                        double tau, const Grid& grid) {
    std::vector<double> a(static_cast<std::size_t>(model.N() + 1));
    for (std::int64_t n = 0; n <= model.N(); ++n) {
        a[static_cast<std::size_t>(n)] = model.deviation(tau, n);
    }
    return reconstruct(CoefficientVector(params, std::move(a)), grid);
}

std::int64_t seminorm_grid_points(std::int64_t N, int k_max) {
    return (k_max <= 2 ? 64 : 256) * (N + 1);
}

ExperimentReport inverse_limit_report(const DecayModel& model, const OperatorParams& params,
                                      std::span<const double> tau_list, int k_max, const Grid& grid,
                                      const InverseLimitTolerances& tol) {
    if (k_max < 0 || k_max > 4) {
        throw ValidationError(fmt::format("k_max must be in 0..4 (got {})", k_max));
    }
    if (tau_list.size() < 3) {
        throw ValidationError(fmt::format("need at least 3 tau values (got {})", tau_list.size()));
    }
    if (std::all_of(tau_list.begin(), tau_list.end(),
                    [&](double tau) { return tau == tau_list.front(); })) {
        throw NumericalError("degenerate fit: all tau values are equal");
    }
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        if (!(tau_list[i] >= 0.0) || (i > 0 && !(tau_list[i] > tau_list[i - 1]))) {
            throw ValidationError("tau values must be non-negative and strictly increasing");
        }
    }
    if (!grid.is_uniform()) {
        throw ValidationError("C^k seminorms need a uniform grid");
    }
    const std::int64_t needed = seminorm_grid_points(model.N(), k_max);
    if (static_cast<std::int64_t>(grid.size()) < needed) {
        throw ResolutionError(fmt::format(
            "grid of {} points cannot resolve C^{} seminorms of mode {}; need at least {}",
            grid.size(), k_max, model.N(), needed));
    }
    if (model.amplitude() == 0.0) {
        throw NumericalError("degenerate fit: amplitude A = 0 leaves no deviation to measure");
    }

    const auto levels = static_cast<std::size_t>(k_max + 1);
    std::vector<std::vector<double>> seminorms(levels);
    for (double tau : tau_list) {
        const SampledFunction deviation = inverse_limit_deviation(model, params, tau, grid);
        seminorms[0].push_back(sup_norm(deviation.values()));
        for (int k = 1; k <= k_max; ++k) {
            seminorms[static_cast<std::size_t>(k)].push_back(
                sup_norm(fd_derivative(deviation, k).values()));
        }
    }

    ExperimentReport report;
    report.name = "inverse_limit";
    report.inputs["A"] = model.amplitude();
    report.inputs["beta"] = model.beta();
    report.inputs["N"] = model.N();
    report.inputs["k_max"] = k_max;
    report.inputs["grid_points"] = grid.size();
    report.inputs["tau_list"] = std::vector<double>(tau_list.begin(), tau_list.end());
    report.series.emplace_back("tau", std::vector<double>(tau_list.begin(), tau_list.end()));
    report.tolerances["slope_rel"] = tol.slope_rel;
    report.tolerances["factorization_rel"] = tol.factorization_rel;

    bool slopes_ok = true;
    for (std::size_t k = 0; k < levels; ++k) {
        std::vector<double> logs;
        for (double value : seminorms[k]) {
            logs.push_back(std::log(value));
        }
        const double slope = least_squares_slope(tau_list, logs);
        report.metrics[fmt::format("slope_k{}", k)] = slope;
        slopes_ok = slopes_ok && std::abs(slope + model.beta()) <= tol.slope_rel * model.beta();
        report.series.emplace_back(fmt::format("seminorm_k{}", k), std::move(seminorms[k]));
    }

    // Exact factorization at k = 0: ratio of successive sups is exp(-beta dtau).
    const auto& sup0 = report.column("seminorm_k0");
    double worst_factor = 0.0;
    for (std::size_t i = 1; i < sup0.size(); ++i) {
        const double expected = std::exp(-model.beta() * (tau_list[i] - tau_list[i - 1]));
        worst_factor = std::max(worst_factor, std::abs(sup0[i] / sup0[i - 1] / expected - 1.0));
    }
    report.metrics["factorization_defect_k0"] = worst_factor;
    report.verdict = (slopes_ok && worst_factor <= tol.factorization_rel) ? Verdict::pass
                                                                           : Verdict::fail;
    return report;
}

ExperimentReport convergence_study(const OperatorParams& params, const RealFunction& target,
                                   std::span<const std::int64_t> N_list, const QuadratureRule& rule,
                                   const ConvergenceTolerances& tol) {
    require_increasing(N_list, "N list");
    const Grid grid = uniform_grid(params, 2048);
    const double interior = 0.9 * params.v_c();

    std::vector<double> l2_col, sup_col;
    for (std::int64_t N : N_list) {
        const CoefficientVector coeffs = project(params, target, N, rule);
        const double l2 = std::sqrt(integrate(rule, [&](double v) {
            const double d = target(v) - evaluate_series(coeffs, v);
            return d * d;
        }));
        double sup = 0.0;
        for (double v : grid.points()) {
            if (std::abs(v) <= interior) {
                sup = std::max(sup, std::abs(target(v) - evaluate_series(coeffs, v)));
            }
        }
        l2_col.push_back(l2);
        sup_col.push_back(sup);
    }

    bool monotone = true;
    for (std::size_t i = 1; i < l2_col.size(); ++i) {
        monotone = monotone && l2_col[i] <= l2_col[i - 1] + tol.monotone_slack &&
                   sup_col[i] <= sup_col[i - 1] + tol.monotone_slack;
    }

    ExperimentReport report;
    report.name = "convergence";
    report.inputs["N_list"] = std::vector<std::int64_t>(N_list.begin(), N_list.end());
    report.inputs["rule"] = to_string(rule.kind);
    report.inputs["rule_nodes"] = rule.size();
    report.inputs["interior_fraction"] = 0.9;
    report.series = {{"N", as_doubles(N_list)},
                     {"l2_error", l2_col},
                     {"interior_sup_error", std::move(sup_col)}};
    report.tolerances["l2_threshold"] = tol.l2_threshold;
    report.tolerances["monotone_slack"] = tol.monotone_slack;
    report.metrics["final_l2_error"] = l2_col.back();
    report.verdict = (monotone && l2_col.back() < tol.l2_threshold) ? Verdict::pass : Verdict::fail;
    return report;
}

namespace {

// sup over interior grid points of |pi (psi + disp psi'') - C_n psi| with
// central second differences.
double residual_on_grid(const OperatorParams& params, std::int64_t n, std::int64_t intervals,
                        bool fourth_order) {
    const Grid grid = uniform_grid(params, intervals);
    const SampledFunction psi =
        sample(grid, [&](double v) { return eigenfunction_eval(params, n, v); });
    const std::span<const double> f = psi.values();
    const double h = *grid.spacing();
    const double c_n = eigenvalue(params, n);
    const double disp = params.dispersion();

    double worst = 0.0;
    if (fourth_order) {
        for (std::size_t i = 2; i + 2 < f.size(); ++i) {
            const double d2 = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) /
                              (12.0 * h * h);
            worst = std::max(worst, std::abs(pi * (f[i] + disp * d2) - c_n * f[i]));
        }
    } else {
        for (std::size_t i = 1; i + 1 < f.size(); ++i) {
            const double d2 = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / (h * h);
            worst = std::max(worst, std::abs(pi * (f[i] + disp * d2) - c_n * f[i]));
        }
    }
    return worst;
}

}  // namespace

EigenrelationCheck eigenrelation_check(const OperatorParams& params, std::int64_t n,
                                       std::int64_t grid_points) {
    if (grid_points < 16) {
        throw ValidationError(fmt::format("eigenrelation check needs >= 16 points (got {})", grid_points));
    }
    const std::int64_t intervals = grid_points - 1;
    EigenrelationCheck check{};
    check.n = n;
    check.eigenvalue = eigenvalue(params, n);
    check.residual_second_order = residual_on_grid(params, n, intervals, false);
    check.residual_half_spacing = residual_on_grid(params, n, 2 * intervals, false);
    check.residual_fourth_order = residual_on_grid(params, n, intervals, true);
    check.observed_order = observed_order(check.residual_second_order, check.residual_half_spacing);
    return check;
}

}  // namespace defspec
