#include "defspec/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>
#include <random>

#include "defspec/analytic_spectrum.hpp"
#include "defspec/error.hpp"
#include "defspec/fit.hpp"
#include "defspec/quadrature_grid.hpp"

namespace defspec {
namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

double dot(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

void normalize(std::vector<double>& x) {
    const double norm = std::sqrt(dot(x, x));
    for (double& value : x) {
        value /= norm;
    }
}

// LU factorization with partial pivoting of a general tridiagonal matrix
// (lower, diag, upper), in the layout of LAPACK's dgttrf: the factor U has
// a second superdiagonal from row interchanges.
class TridiagonalLU {
public:
    TridiagonalLU(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                  double pivot_floor)
        : l_(std::move(lower)), d_(std::move(diag)), u_(std::move(upper)),
          u2_(d_.size() > 2 ? d_.size() - 2 : 0, 0.0), swapped_(d_.size(), false) {
        const std::size_t n = d_.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d_[i]) >= std::abs(l_[i])) {
                if (d_[i] == 0.0) {
                    d_[i] = pivot_floor;
                }
                const double factor = l_[i] / d_[i];
                l_[i] = factor;
                d_[i + 1] -= factor * u_[i];
            } else {
                const double factor = d_[i] / l_[i];
                d_[i] = l_[i];
                l_[i] = factor;
                const double temp = u_[i];
                u_[i] = d_[i + 1];
                d_[i + 1] = temp - factor * d_[i + 1];
                if (i + 2 < n) {
                    u2_[i] = u_[i + 1];
                    u_[i + 1] = -factor * u_[i + 1];
                }
                swapped_[i] = true;
            }
        }
        if (n > 0 && d_[n - 1] == 0.0) {
            d_[n - 1] = pivot_floor;
        }
        for (double& pivot : d_) {
            if (std::abs(pivot) < pivot_floor) {
                pivot = std::copysign(pivot_floor, pivot);
            }
        }
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = d_.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swapped_[i]) {
                std::swap(b[i], b[i + 1]);
            }
            b[i + 1] -= l_[i] * b[i];
        }
        for (std::size_t k = n; k-- > 0;) {
            double value = b[k];
            if (k + 1 < n) {
                value -= u_[k] * b[k + 1];
            }
            if (k + 2 < n) {
                value -= u2_[k] * b[k + 2];
            }
            b[k] = value / d_[k];
        }
    }

private:
    std::vector<double> l_;
    std::vector<double> d_;
    std::vector<double> u_;
    std::vector<double> u2_;
    std::vector<bool> swapped_;
};

// Newton correction -det/det' from the ratio form of the characteristic
// recurrence q_k = (d_k - x) - e_{k-1}^2 / q_{k-1}.
std::optional<double> newton_step(const TridiagonalSymmetricMatrix& a, double x) {
    const auto d = a.diag();
    const auto e = a.offdiag();
    double q = d[0] - x;
    double dq = -1.0;
    if (q == 0.0) {
        return std::nullopt;
    }
    double log_derivative = dq / q;
    for (std::size_t k = 1; k < d.size(); ++k) {
        const double e2 = e[k - 1] * e[k - 1];
        const double q_next = (d[k] - x) - e2 / q;
        const double dq_next = -1.0 + e2 * dq / (q * q);
        q = q_next;
        dq = dq_next;
        if (q == 0.0 || !std::isfinite(q)) {
            return std::nullopt;
        }
        log_derivative += dq / q;
    }
    if (log_derivative == 0.0 || !std::isfinite(log_derivative)) {
        return std::nullopt;
    }
    return -1.0 / log_derivative;
}

}  // namespace

TridiagonalSymmetricMatrix::TridiagonalSymmetricMatrix(std::vector<double> diag,
                                                       std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
    if (diag_.empty()) {
        throw ValidationError("tridiagonal matrix needs dim >= 1");
    }
    if (offdiag_.size() + 1 != diag_.size()) {
        throw ValidationError(fmt::format("off-diagonal length {} does not match dim {}",
                                          offdiag_.size(), diag_.size()));
    }
    double max_e2 = 1.0;
    for (double value : diag_) {
        if (!std::isfinite(value)) {
            throw ValidationError("tridiagonal matrix has a non-finite diagonal entry");
        }
    }
    for (double value : offdiag_) {
        if (!std::isfinite(value)) {
            throw ValidationError("tridiagonal matrix has a non-finite off-diagonal entry");
        }
        max_e2 = std::max(max_e2, value * value);
    }
    pivot_floor_ = std::numeric_limits<double>::min() * max_e2;
}

std::vector<double> TridiagonalSymmetricMatrix::multiply(std::span<const double> x) const {
    const std::size_t n = dim();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = diag_[i] * x[i];
        if (i > 0) {
            sum += offdiag_[i - 1] * x[i - 1];
        }
        if (i + 1 < n) {
            sum += offdiag_[i] * x[i + 1];
        }
        y[i] = sum;
    }
    return y;
}

double TridiagonalSymmetricMatrix::norm_inf() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
        double row = std::abs(diag_[i]);
        if (i > 0) {
            row += std::abs(offdiag_[i - 1]);
        }
        if (i + 1 < dim()) {
            row += std::abs(offdiag_[i]);
        }
        best = std::max(best, row);
    }
    return best;
}

std::pair<double, double> TridiagonalSymmetricMatrix::gershgorin_bounds() const noexcept {
    double lower = std::numeric_limits<double>::infinity();
    double upper = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dim(); ++i) {
        double radius = 0.0;
        if (i > 0) {
            radius += std::abs(offdiag_[i - 1]);
        }
        if (i + 1 < dim()) {
            radius += std::abs(offdiag_[i]);
        }
        lower = std::min(lower, diag_[i] - radius);
        upper = std::max(upper, diag_[i] + radius);
    }
    return {lower, upper};
}

std::size_t TridiagonalSymmetricMatrix::count_below(double shift) const noexcept {
    std::size_t count = 0;
    double q = diag_[0] - shift;
    for (std::size_t k = 0;; ++k) {
        if (std::abs(q) < pivot_floor_) {
            q = -pivot_floor_;
        }
        if (q < 0.0) {
            ++count;
        }
        if (k + 1 == dim()) {
            break;
        }
        q = (diag_[k + 1] - shift) - offdiag_[k] * offdiag_[k] / q;
    }
    return count;
}

double fd_spacing(const OperatorParams& params, std::int64_t m) {
    return params.interval_length() / static_cast<double>(m + 1);
}

std::vector<double> fd_interior_points(const OperatorParams& params, std::int64_t m) {
    const double h = fd_spacing(params, m);
    std::vector<double> points(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
        points[static_cast<std::size_t>(i)] = -params.v_c() + static_cast<double>(i + 1) * h;
    }
    return points;
}

TridiagonalSymmetricMatrix discretize(const OperatorParams& params, std::int64_t m) {
    if (m < 3) {
        throw ValidationError(fmt::format("discretization needs m >= 3 interior points (got {})", m));
    }
    const double h = fd_spacing(params, m);
    const double s = params.dispersion() / (h * h);
    const auto dim = static_cast<std::size_t>(m);
    return TridiagonalSymmetricMatrix(std::vector<double>(dim, std::numbers::pi * (1.0 - 2.0 * s)),
                                      std::vector<double>(dim - 1, std::numbers::pi * s));
}

double eigenvalue_by_rank(const TridiagonalSymmetricMatrix& a, std::size_t rank) {
    if (rank >= a.dim()) {
        throw ValidationError(fmt::format("eigenvalue rank {} out of range for dim {}", rank, a.dim()));
    }
    // Index among eigenvalues sorted increasingly.
    const std::size_t index = a.dim() - 1 - rank;
    auto [lo, hi] = a.gershgorin_bounds();
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double slack = 2.0 * eps * scale + std::numeric_limits<double>::min();
    lo -= slack;
    hi += slack;

    // Invariant: count_below(lo) <= index < count_below(hi).
    for (int iter = 0; iter < 2200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi))) {
            break;
        }
        if (a.count_below(mid) <= index) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double estimate = 0.5 * (lo + hi);
    for (int step = 0; step < 3; ++step) {
        const auto delta = newton_step(a, estimate);
        if (!delta || estimate + *delta < lo || estimate + *delta > hi) {
            break;
        }
        estimate += *delta;
    }
    return estimate;
}

std::vector<double> eigenvalues_tridiagonal(const TridiagonalSymmetricMatrix& a) {
    std::vector<double> values(a.dim());
    for (std::size_t rank = 0; rank < a.dim(); ++rank) {
        values[rank] = eigenvalue_by_rank(a, rank);
    }
    return values;
}

InverseIterationResult eigenvector_inverse_iteration(const TridiagonalSymmetricMatrix& a,
                                                     double lambda) {
    constexpr int max_iterations = 50;
    const std::size_t n = a.dim();
    const double norm = std::max(1.0, a.norm_inf());
    const double tolerance = 1e-8 * norm;

    const double window = 1e-6 * (1.0 + std::abs(lambda));
    const bool clustered = a.count_below(lambda + window) - a.count_below(lambda - window) > 1;

    std::vector<double> shifted(a.diag().begin(), a.diag().end());
    for (double& value : shifted) {
        value -= lambda;
    }
    const std::vector<double> off(a.offdiag().begin(), a.offdiag().end());
    const TridiagonalLU lu(off, std::move(shifted), off, eps * norm);

    std::mt19937_64 engine(0x5eed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::vector<double> x(n);
    for (double& value : x) {
        value = uniform(engine);
    }
    normalize(x);

    InverseIterationResult result{};
    result.clustered = clustered;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        lu.solve(x);
        normalize(x);
        const std::vector<double> ax = a.multiply(x);
        const double rho = dot(x, ax);
        double residual2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ax[i] - rho * x[i];
            residual2 += r * r;
        }
        result.rayleigh_quotient = rho;
        result.residual = std::sqrt(residual2);
        result.iterations = iter;
        if (result.residual <= tolerance) {
            const double threshold = 1e-14 * sup_norm(x);
            for (double value : x) {
                if (std::abs(value) > threshold) {
                    if (value < 0.0) {
                        for (double& entry : x) {
                            entry = -entry;
                        }
                    }
                    break;
                }
            }
            result.vector = std::move(x);
            return result;
        }
    }
    throw NumericalError(fmt::format(
        "inverse iteration at shift {} did not converge in {} iterations (residual {})", lambda,
        max_iterations, result.residual));
}

FDSpectrumReport validate_against_analytic(const OperatorParams& params, std::int64_t m,
                                           std::int64_t n_modes) {
    if (n_modes < 1 || 4 * n_modes > m) {
        throw ValidationError(fmt::format(
            "n_modes must satisfy 1 <= n_modes <= m / 4 (got n_modes = {}, m = {})", n_modes, m));
    }
    const TridiagonalSymmetricMatrix a = discretize(params, m);
    FDSpectrumReport report{};
    report.grid_size = m;
    report.h = fd_spacing(params, m);
    for (std::int64_t n = 0; n < n_modes; ++n) {
        const double fd = eigenvalue_by_rank(a, static_cast<std::size_t>(n));
        const double exact = eigenvalue(params, n);
        const double abs_err = std::abs(fd - exact);
        report.eigenvalues_fd.push_back(fd);
        report.eigenvalues_analytic.push_back(exact);
        report.abs_errors.push_back(abs_err);
        report.rel_errors.push_back(abs_err / std::abs(exact));
    }
    return report;
}

RefinementStudy refinement_study(const OperatorParams& params, std::span<const std::int64_t> grid_sizes,
                                 std::int64_t n_modes) {
    if (grid_sizes.size() < 2) {
        throw ValidationError("a refinement study needs at least two grid sizes");
    }
    RefinementStudy study;
    for (std::int64_t m : grid_sizes) {
        study.reports.push_back(validate_against_analytic(params, m, n_modes));
    }
    std::vector<double> log_h;
    for (const auto& report : study.reports) {
        log_h.push_back(std::log(report.h));
    }
    for (std::int64_t n = 0; n < n_modes; ++n) {
        std::vector<double> log_err;
        for (const auto& report : study.reports) {
            log_err.push_back(std::log(report.abs_errors[static_cast<std::size_t>(n)]));
        }
        study.orders.push_back(least_squares_slope(log_h, log_err));
    }
    for (auto& report : study.reports) {
        report.convergence_order = study.orders.front();
    }
    return study;
}

}  // namespace defspec
