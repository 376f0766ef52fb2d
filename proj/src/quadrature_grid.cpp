#include "defspec/quadrature_grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "defspec/error.hpp"

namespace defspec {

std::string_view to_string(QuadratureKind kind) noexcept {
    switch (kind) {
        case QuadratureKind::gauss_legendre: return "gauss_legendre";
        case QuadratureKind::composite_simpson: return "composite_simpson";
    }
    return "unknown";
}

Grid Grid::from_points(const OperatorParams& params, std::vector<double> points) {
    const double v_c = params.v_c();
    if (points.size() < 2) {
        throw ValidationError("a grid needs at least two points");
    }
    if (std::abs(points.front() + v_c) > 1e-14 || std::abs(points.back() - v_c) > 1e-14) {
        throw ValidationError(fmt::format("grid endpoints must be -v_c and v_c (got {} and {})",
                                          points.front(), points.back()));
    }
    points.front() = -v_c;
    points.back() = v_c;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i] > points[i - 1])) {
            throw ValidationError(fmt::format("grid points must be strictly increasing (index {})", i));
        }
    }
    const double h = (points.back() - points.front()) / static_cast<double>(points.size() - 1);
    bool uniform = true;
    for (std::size_t i = 1; i < points.size() && uniform; ++i) {
        uniform = std::abs(points[i] - points[i - 1] - h) < 1e-12;
    }
    return Grid(std::move(points), v_c, uniform ? std::optional<double>(h) : std::nullopt);
}

Grid uniform_grid(const OperatorParams& params, std::int64_t m) {
    if (m < 2) {
        throw ValidationError(fmt::format("uniform grid needs m >= 2 intervals (got {})", m));
    }
    const double v_c = params.v_c();
    const double h = params.interval_length() / static_cast<double>(m);
    std::vector<double> points(static_cast<std::size_t>(m + 1));
    for (std::int64_t i = 0; i <= m; ++i) {
        // Fill from both ends so the grid is symmetric to the last bit.
        if (2 * i <= m) {
            points[static_cast<std::size_t>(i)] = -v_c + static_cast<double>(i) * h;
        } else {
            points[static_cast<std::size_t>(i)] = v_c - static_cast<double>(m - i) * h;
        }
    }
    if (m % 2 == 0) {
        points[static_cast<std::size_t>(m / 2)] = 0.0;
    }
    points.front() = -v_c;
    points.back() = v_c;
    return Grid(std::move(points), v_c, h);
}

QuadratureRule gauss_legendre_rule(const OperatorParams& params, std::int64_t m) {
    if (m < 1 || m > max_gauss_legendre_nodes) {
        throw ValidationError(fmt::format("Gauss-Legendre node count must be in [1, {}] (got {})",
                                          max_gauss_legendre_nodes, m));
    }
    constexpr double tolerance = 1e-15;
    constexpr int max_iterations = 100;

    const auto size = static_cast<std::size_t>(m);
    const double md = static_cast<double>(m);
    const double v_c = params.v_c();
    QuadratureRule rule{QuadratureKind::gauss_legendre, std::vector<double>(size),
                        std::vector<double>(size)};

    // Returns (P_m(z), P'_m(z)) by the three-term recurrence.
    auto legendre = [m, md](double z) {
        double p_prev = 0.0;
        double p = 1.0;
        for (std::int64_t j = 1; j <= m; ++j) {
            const double jd = static_cast<double>(j);
            const double p_next = ((2.0 * jd - 1.0) * z * p - (jd - 1.0) * p_prev) / jd;
            p_prev = p;
            p = p_next;
        }
        const double dp = md * (z * p - p_prev) / (z * z - 1.0);
        return std::array<double, 2>{p, dp};
    };

    const std::int64_t half = (m + 1) / 2;
    for (std::int64_t i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (md + 0.5));
        bool converged = false;
        for (int iter = 0; iter < max_iterations; ++iter) {
            const auto [p, dp] = legendre(z);
            const double step = p / dp;
            z -= step;
            if (std::abs(step) <= tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NumericalError(
                fmt::format("Newton iteration for Legendre root {} of P_{} did not converge", i, m));
        }
        if (m % 2 == 1 && i == half - 1) {
            z = 0.0;
        }
        const double dp = legendre(z)[1];
        const double weight = 2.0 / ((1.0 - z * z) * dp * dp) * v_c;
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(m - 1 - i);
        rule.nodes[lo] = -z * v_c;
        rule.nodes[hi] = z * v_c;
        rule.weights[lo] = weight;
        rule.weights[hi] = weight;
    }
    return rule;
}

QuadratureRule composite_simpson_rule(const OperatorParams& params, std::int64_t nodes) {
    if (nodes < 3 || nodes % 2 == 0) {
        throw ValidationError(
            fmt::format("composite Simpson needs an odd node count >= 3 (got {})", nodes));
    }
    const Grid grid = uniform_grid(params, nodes - 1);
    const double h = *grid.spacing();
    QuadratureRule rule{QuadratureKind::composite_simpson,
                        std::vector<double>(grid.points().begin(), grid.points().end()),
                        std::vector<double>(static_cast<std::size_t>(nodes))};
    for (std::int64_t i = 0; i < nodes; ++i) {
        const double factor = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        rule.weights[static_cast<std::size_t>(i)] = factor * h / 3.0;
    }
    return rule;
}

QuadratureRule default_projection_rule(const OperatorParams& params, std::int64_t N) {
    return gauss_legendre_rule(params, std::max<std::int64_t>(256, QuadratureRule::required_nodes(N)));
}

double integrate(const QuadratureRule& rule, const RealFunction& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double value = f(rule.nodes[i]);
        if (!std::isfinite(value)) {
            throw EvaluationError(
                fmt::format("integrand is not finite at node {} (v = {})", i, rule.nodes[i]));
        }
        sum += rule.weights[i] * value;
    }
    return sum;
}

SampledFunction::SampledFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw ValidationError(fmt::format("sample count {} does not match grid size {}",
                                          values_.size(), grid_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw ValidationError(fmt::format("sample {} is not finite", i));
        }
    }
}

SampledFunction sample(const Grid& grid, const RealFunction& f) {
    std::vector<double> values;
    values.reserve(grid.size());
    for (double v : grid.points()) {
        values.push_back(f(v));
    }
    return SampledFunction(grid, std::move(values));
}

namespace {

struct Stencil {
    std::span<const double> central;  // centred on the middle entry
    std::span<const double> forward;  // anchored at the evaluation point
};

constexpr std::array<double, 3> central1{-0.5, 0.0, 0.5};
constexpr std::array<double, 3> forward1{-1.5, 2.0, -0.5};
constexpr std::array<double, 3> central2{1.0, -2.0, 1.0};
constexpr std::array<double, 4> forward2{2.0, -5.0, 4.0, -1.0};
constexpr std::array<double, 5> central3{-0.5, 1.0, 0.0, -1.0, 0.5};
constexpr std::array<double, 5> forward3{-2.5, 9.0, -12.0, 7.0, -1.5};
constexpr std::array<double, 5> central4{1.0, -4.0, 6.0, -4.0, 1.0};
constexpr std::array<double, 6> forward4{3.0, -14.0, 26.0, -24.0, 11.0, -2.0};

Stencil stencil_for(int order) {
    switch (order) {
        case 1: return {central1, forward1};
        case 2: return {central2, forward2};
        case 3: return {central3, forward3};
        case 4: return {central4, forward4};
        default: break;
    }
    throw ValidationError(fmt::format("derivative order must be in 1..4 (got {})", order));
}

}  // namespace

SampledFunction fd_derivative(const SampledFunction& sf, int order) {
    const Stencil stencil = stencil_for(order);
    const Grid& grid = sf.grid();
    if (!grid.is_uniform()) {
        throw ValidationError("finite differences need a uniform grid");
    }
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    if (n < order + 5) {
        throw ResolutionError(fmt::format("order-{} finite differences need at least {} points (got {})",
                                          order, order + 5, n));
    }
    const double scale = 1.0 / std::pow(*grid.spacing(), order);
    const std::span<const double> f = sf.values();
    // Backward stencils are the forward ones mirrored, with sign (-1)^order.
    const double mirror = (order % 2 == 0) ? 1.0 : -1.0;
    const auto half = static_cast<std::ptrdiff_t>(stencil.central.size() / 2);
    const auto width = static_cast<std::ptrdiff_t>(stencil.forward.size());

    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        if (i < 2) {
            for (std::ptrdiff_t j = 0; j < width; ++j) {
                acc += stencil.forward[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(i + j)];
            }
        } else if (i >= n - 2) {
            for (std::ptrdiff_t j = 0; j < width; ++j) {
                acc += mirror * stencil.forward[static_cast<std::size_t>(j)] *
                       f[static_cast<std::size_t>(i - j)];
            }
        } else {
            for (std::ptrdiff_t j = -half; j <= half; ++j) {
                acc += stencil.central[static_cast<std::size_t>(j + half)] *
                       f[static_cast<std::size_t>(i + j)];
            }
        }
        out[static_cast<std::size_t>(i)] = acc * scale;
    }
    return SampledFunction(grid, std::move(out));
}

double sup_norm(std::span<const double> values) {
    double best = 0.0;
    for (double value : values) {
        best = std::max(best, std::abs(value));
    }
    return best;
}

}  // namespace defspec
