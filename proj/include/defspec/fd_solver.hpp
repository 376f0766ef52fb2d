#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "defspec/params.hpp"

namespace defspec {

/// Symmetric tridiagonal matrix: main diagonal plus one off-diagonal.
class TridiagonalSymmetricMatrix {
public:
    TridiagonalSymmetricMatrix(std::vector<double> diag, std::vector<double> offdiag);

    std::size_t dim() const noexcept { return diag_.size(); }
    std::span<const double> diag() const noexcept { return diag_; }
    std::span<const double> offdiag() const noexcept { return offdiag_; }

    /// y = A x.
    std::vector<double> multiply(std::span<const double> x) const;

    /// max row sum of |a_ij|.
    double norm_inf() const noexcept;

    /// [lower, upper] enclosing every Gershgorin disc.
    std::pair<double, double> gershgorin_bounds() const noexcept;

    /// Number of eigenvalues strictly below shift (Sturm sequence count).
    std::size_t count_below(double shift) const noexcept;

private:
    std::vector<double> diag_;
    std::vector<double> offdiag_;
    double pivot_floor_;
};

/// Three-point discretization of pi (1 + (hbar/c)^2 d^2/dv^2) on the m
/// interior points of [-v_c, v_c], h = 2 v_c / (m + 1), Dirichlet rows
/// eliminated. diag = pi (1 - 2 s), offdiag = pi s, s = (hbar/c)^2 / h^2.
TridiagonalSymmetricMatrix discretize(const OperatorParams& params, std::int64_t m);

/// h of the interior-point discretization with m unknowns.
double fd_spacing(const OperatorParams& params, std::int64_t m);

/// Interior points -v_c + i h, i = 1..m.
std::vector<double> fd_interior_points(const OperatorParams& params, std::int64_t m);

/// Eigenvalue of rank j in decreasing order (j = 0 is the largest), by
/// Sturm-count bisection from the Gershgorin interval followed by a few
/// safeguarded Newton steps on the characteristic recurrence.
double eigenvalue_by_rank(const TridiagonalSymmetricMatrix& a, std::size_t rank);

/// All eigenvalues, sorted decreasing.
std::vector<double> eigenvalues_tridiagonal(const TridiagonalSymmetricMatrix& a);

struct InverseIterationResult {
    std::vector<double> vector;  // unit Euclidean norm, first nonzero entry positive
    double rayleigh_quotient;
    double residual;             // ||A v - rho v||_2
    int iterations;
    bool clustered;              // another eigenvalue within 1e-6 (1 + |lambda|)
};

/// Eigenvector for a shift within 1e-6 of a simple eigenvalue. Converges
/// when the Rayleigh-quotient residual drops to 1e-8 max(1, ||A||_inf);
/// NumericalError after 50 iterations.
InverseIterationResult eigenvector_inverse_iteration(const TridiagonalSymmetricMatrix& a,
                                                     double lambda);

struct FDSpectrumReport {
    std::int64_t grid_size;  // interior points m
    double h;
    std::vector<double> eigenvalues_fd;        // decreasing
    std::vector<double> eigenvalues_analytic;  // decreasing
    std::vector<double> abs_errors;
    std::vector<double> rel_errors;
    std::optional<double> convergence_order;
};

/// Pairs the n_modes largest FD eigenvalues with C_0..C_{n_modes-1}.
/// Requires 1 <= n_modes <= m / 4.
FDSpectrumReport validate_against_analytic(const OperatorParams& params, std::int64_t m,
                                           std::int64_t n_modes);

struct RefinementStudy {
    std::vector<FDSpectrumReport> reports;  // one per grid size, coarse to fine
    std::vector<double> orders;             // fitted order per mode
};

/// Runs validate_against_analytic on each grid size and fits
/// log(abs error) against log(h) per mode. Each report's convergence_order
/// is set to the fitted order of mode 0.
RefinementStudy refinement_study(const OperatorParams& params, std::span<const std::int64_t> grid_sizes,
                                 std::int64_t n_modes);

}  // namespace defspec
