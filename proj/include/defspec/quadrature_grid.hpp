#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "defspec/params.hpp"

namespace defspec {

using RealFunction = std::function<double(double)>;

/// Strictly increasing sample points spanning [-v_c, v_c] end to end.
class Grid {
public:
    /// Validates monotonicity and that the endpoints sit on +-v_c (1e-14).
    /// The endpoints are then snapped to +-v_c exactly.
    static Grid from_points(const OperatorParams& params, std::vector<double> points);

    std::span<const double> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double v_c() const noexcept { return v_c_; }

    /// Present only for equally spaced grids.
    std::optional<double> spacing() const noexcept { return spacing_; }
    bool is_uniform() const noexcept { return spacing_.has_value(); }

private:
    Grid(std::vector<double> points, double v_c, std::optional<double> spacing)
        : points_(std::move(points)), v_c_(v_c), spacing_(spacing) {}

    friend Grid uniform_grid(const OperatorParams& params, std::int64_t m);

    std::vector<double> points_;
    double v_c_;
    std::optional<double> spacing_;
};

/// m + 1 equally spaced points from -v_c to v_c, h = 2 v_c / m.
Grid uniform_grid(const OperatorParams& params, std::int64_t m);

enum class QuadratureKind { gauss_legendre, composite_simpson };

std::string_view to_string(QuadratureKind kind) noexcept;

struct QuadratureRule {
    QuadratureKind kind;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }

    /// A rule resolves mode N when it has at least 8 nodes for each of the
    /// N + 1 half-oscillations of psi_N.
    static constexpr std::int64_t nodes_per_half_oscillation = 8;
    static std::int64_t required_nodes(std::int64_t N) noexcept {
        return nodes_per_half_oscillation * (N + 1);
    }
    bool resolves_mode(std::int64_t N) const noexcept {
        return static_cast<std::int64_t>(size()) >= required_nodes(N);
    }
};

inline constexpr std::int64_t max_gauss_legendre_nodes = 65536;

/// m-node Gauss-Legendre rule on [-v_c, v_c]. Nodes are the roots of P_m
/// found by Newton iteration (|step| <= 1e-15, at most 100 iterations).
QuadratureRule gauss_legendre_rule(const OperatorParams& params, std::int64_t m);

/// Composite Simpson rule on an odd number of equally spaced nodes.
QuadratureRule composite_simpson_rule(const OperatorParams& params, std::int64_t nodes);

/// Gauss-Legendre with max(256, 8 (N+1)) nodes.
QuadratureRule default_projection_rule(const OperatorParams& params, std::int64_t N);

/// sum_i w_i f(x_i). EvaluationError if f is not finite at some node.
double integrate(const QuadratureRule& rule, const RealFunction& f);

/// Grid samples of a real function; every value finite.
class SampledFunction {
public:
    SampledFunction(Grid grid, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    Grid grid_;
    std::vector<double> values_;
};

SampledFunction sample(const Grid& grid, const RealFunction& f);

/// order-th derivative (1..4) by second-order finite differences: central
/// stencils in the interior, one-sided stencils on the first and last two
/// points. Requires a uniform grid with at least order + 5 points.
SampledFunction fd_derivative(const SampledFunction& sf, int order);

/// max_i |values_i|.
double sup_norm(std::span<const double> values);

}  // namespace defspec
