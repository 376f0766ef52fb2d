#include "defspec/transform.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "defspec/analytic_spectrum.hpp"
#include "defspec/error.hpp"

namespace defspec {
namespace {

void require_resolved(const QuadratureRule& rule, std::int64_t N) {
    if (N < 0) {
        throw ValidationError(fmt::format("truncation index must be non-negative (got {})", N));
    }
    if (!rule.resolves_mode(N)) {
        throw ResolutionError(fmt::format(
            "quadrature rule with {} nodes does not resolve mode {}; at least {} nodes required",
            rule.size(), N, QuadratureRule::required_nodes(N)));
    }
}

// psi_n at every node, row n contiguous.
std::vector<double> basis_at_nodes(const OperatorParams& params, std::int64_t N,
                                   const QuadratureRule& rule) {
    const std::size_t count = rule.size();
    std::vector<double> table(static_cast<std::size_t>(N + 1) * count);
    for (std::int64_t n = 0; n <= N; ++n) {
        double* row = table.data() + static_cast<std::size_t>(n) * count;
        for (std::size_t i = 0; i < count; ++i) {
            row[i] = eigenfunction_eval(params, n, rule.nodes[i]);
        }
    }
    return table;
}

}  // namespace

CoefficientVector::CoefficientVector(OperatorParams params, std::vector<double> a)
    : params_(params), a_(std::move(a)) {
    if (a_.empty()) {
        throw ValidationError("a coefficient vector needs at least a_0");
    }
    for (std::size_t n = 0; n < a_.size(); ++n) {
        if (!std::isfinite(a_[n])) {
            throw ValidationError(fmt::format("coefficient a_{} is not finite", n));
        }
    }
}

CoefficientVector project(const OperatorParams& params, const RealFunction& f, std::int64_t N,
                          const QuadratureRule& rule) {
    require_resolved(rule, N);
    const std::size_t count = rule.size();
    std::vector<double> weighted(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double value = f(rule.nodes[i]);
        if (!std::isfinite(value)) {
            throw EvaluationError(
                fmt::format("integrand is not finite at node {} (v = {})", i, rule.nodes[i]));
        }
        weighted[i] = rule.weights[i] * value;
    }
    std::vector<double> a(static_cast<std::size_t>(N + 1));
    for (std::int64_t n = 0; n <= N; ++n) {
        double sum = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            sum += weighted[i] * eigenfunction_eval(params, n, rule.nodes[i]);
        }
        a[static_cast<std::size_t>(n)] = sum;
    }
    return CoefficientVector(params, std::move(a));
}

double evaluate_series(const CoefficientVector& coeffs, double v) {
    double sum = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        sum += coeffs.a()[n] * eigenfunction_eval(coeffs.params(), static_cast<std::int64_t>(n), v);
    }
    return sum;
}

SampledFunction reconstruct(const CoefficientVector& coeffs, const Grid& grid) {
    if (grid.v_c() != coeffs.params().v_c()) {
        throw ValidationError("grid and coefficients belong to different intervals");
    }
    return sample(grid, [&coeffs](double v) { return evaluate_series(coeffs, v); });
}

double l2_norm(const OperatorParams& /*params*/, const RealFunction& f, const QuadratureRule& rule) {
    return std::sqrt(integrate(rule, [&f](double v) {
        const double value = f(v);
        return value * value;
    }));
}

double parseval_defect(const OperatorParams& params, const RealFunction& f, std::int64_t N,
                       const QuadratureRule& rule) {
    const CoefficientVector coeffs = project(params, f, N, rule);
    const double norm = l2_norm(params, f, rule);
    double captured = 0.0;
    for (double a : coeffs.a()) {
        captured += a * a;
    }
    return norm * norm - captured;
}

CoefficientVector apply_operator_spectral(const CoefficientVector& coeffs) {
    std::vector<double> out(coeffs.size());
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        out[n] = eigenvalue(coeffs.params(), static_cast<std::int64_t>(n)) * coeffs.a()[n];
    }
    return CoefficientVector(coeffs.params(), std::move(out));
}

SquareMatrix gram_matrix(const OperatorParams& params, std::int64_t N, const QuadratureRule& rule) {
    require_resolved(rule, N);
    const auto dim = static_cast<std::size_t>(N + 1);
    const std::size_t count = rule.size();
    const std::vector<double> table = basis_at_nodes(params, N, rule);
    SquareMatrix gram{dim, std::vector<double>(dim * dim)};
    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t m = n; m < dim; ++m) {
            double sum = 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                sum += rule.weights[i] * table[n * count + i] * table[m * count + i];
            }
            gram(n, m) = sum;
            gram(m, n) = sum;
        }
    }
    return gram;
}

double identity_defect(const SquareMatrix& gram) {
    double worst = 0.0;
    for (std::size_t n = 0; n < gram.dim; ++n) {
        for (std::size_t m = 0; m < gram.dim; ++m) {
            worst = std::max(worst, std::abs(gram(n, m) - (n == m ? 1.0 : 0.0)));
        }
    }
    return worst;
}

}  // namespace defspec
