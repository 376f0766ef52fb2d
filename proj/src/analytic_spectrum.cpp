#include "defspec/analytic_spectrum.hpp"

#include <boost/math/special_functions/sin_pi.hpp>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "defspec/error.hpp"

namespace defspec {
namespace {

using std::numbers::pi;

void require_index(std::int64_t n) {
    if (n < 0) {
        throw ValidationError(fmt::format("mode index must be non-negative (got {})", n));
    }
}

}  // namespace

double wavenumber(const OperatorParams& params, std::int64_t n) {
    require_index(n);
    return static_cast<double>(n + 1) * pi / params.interval_length();
}

double eigenvalue(const OperatorParams& params, std::int64_t n) {
    const double k = wavenumber(params, n);
    return pi * (1.0 - params.dispersion() * k * k);
}

double eigenfunction_eval(const OperatorParams& params, std::int64_t n, double v) {
    require_index(n);
    const double v_c = params.v_c();
    if (!(std::abs(v) <= v_c)) {
        throw DomainError(fmt::format("v = {} outside [-v_c, v_c] with v_c = {}", v, v_c));
    }
    // Half-periods travelled from the left endpoint: (n+1)(v + v_c)/(2 v_c).
    const double t = (v + v_c) / params.interval_length();
    const double half_periods = static_cast<double>(n + 1) * t;
    return boost::math::sin_pi(half_periods) / std::sqrt(v_c);
}

std::vector<Mode> modes(const OperatorParams& params, std::int64_t N) {
    require_index(N);
    std::vector<Mode> out;
    out.reserve(static_cast<std::size_t>(N + 1));
    for (std::int64_t n = 0; n <= N; ++n) {
        out.push_back({n, wavenumber(params, n), eigenvalue(params, n)});
    }
    return out;
}

CriticalIndexReport critical_index(const OperatorParams& params) {
    const double x = params.interval_length() * params.c() / (pi * params.hbar());

    CriticalIndexReport report{};
    report.x = x;
    report.n_star_paper = BigIndex(std::floor(x));

    constexpr double scan_limit = 4503599627370496.0;  // 2^52
    if (x < scan_limit) {
        report.method = CriticalIndexMethod::sign_scan;
        if (eigenvalue(params, 0) >= 0.0) {
            // C_n is decreasing: bisect for the last non-negative index.
            std::int64_t lo = 0;
            auto hi = static_cast<std::int64_t>(std::floor(x)) + 2;
            while (eigenvalue(params, hi) >= 0.0) {
                hi *= 2;
            }
            while (hi - lo > 1) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                (eigenvalue(params, mid) >= 0.0 ? lo : hi) = mid;
            }
            report.n_star_exact = BigIndex(lo);
        }
    } else {
        report.method = CriticalIndexMethod::quantization_bound;
        // C_n >= 0  <=>  n + 1 <= x  <=>  n <= floor(x) - 1.
        report.n_star_exact = report.n_star_paper - 1;
    }
    report.agree = report.n_star_exact.has_value() && *report.n_star_exact == report.n_star_paper;
    return report;
}

std::int64_t count_sign_changes(std::span<const double> values) {
    std::int64_t changes = 0;
    int last_sign = 0;
    for (double value : values) {
        const int sign = (value > 0.0) - (value < 0.0);
        if (sign == 0) {
            continue;
        }
        if (last_sign != 0 && sign != last_sign) {
            ++changes;
        }
        last_sign = sign;
    }
    return changes;
}

std::int64_t count_interior_zeros(const OperatorParams& params, std::int64_t n,
                                  std::int64_t grid_points) {
    require_index(n);
    if (grid_points < 1000) {
        throw ValidationError(
            fmt::format("zero counting needs at least 1000 grid points (got {})", grid_points));
    }
    if (grid_points < 10 * (n + 1)) {
        throw ResolutionError(fmt::format(
            "{} grid points cannot resolve mode {}; need at least {}", grid_points, n,
            10 * (n + 1)));
    }
    const double v_c = params.v_c();
    const double length = params.interval_length();
    const double h = length / static_cast<double>(grid_points - 1);
    const double band = length / static_cast<double>(grid_points);

    std::vector<double> interior;
    interior.reserve(static_cast<std::size_t>(grid_points));
    for (std::int64_t i = 0; i < grid_points; ++i) {
        const double v = (i == grid_points - 1) ? v_c : -v_c + static_cast<double>(i) * h;
        if (v + v_c < band || v_c - v < band) {
            continue;
        }
        interior.push_back(eigenfunction_eval(params, n, v));
    }
    return count_sign_changes(interior);
}

double asymptotic_coefficient(const OperatorParams& params) {
    const double ratio = params.hbar() / (params.c() * params.v_c());
    return ratio * ratio * pi * pi * pi / 4.0;
}

double asymptotic_eigenvalue(const OperatorParams& params, std::int64_t n) {
    require_index(n);
    const auto nd = static_cast<double>(n);
    return pi - asymptotic_coefficient(params) * nd * nd;
}

}  // namespace defspec
