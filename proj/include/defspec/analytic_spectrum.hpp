#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "defspec/params.hpp"

namespace defspec {

using BigIndex = boost::multiprecision::cpp_int;

/// One eigenpair label: mode index, Dirichlet wavenumber and eigenvalue.
struct Mode {
    std::int64_t n;
    double k_n;
    double C_n;
};

/// (n+1) pi / (2 v_c).
double wavenumber(const OperatorParams& params, std::int64_t n);

/// C_n = pi (1 - (hbar/c)^2 k_n^2). Always strictly below pi.
double eigenvalue(const OperatorParams& params, std::int64_t n);

/// psi_n(v) = sqrt(1/v_c) sin(k_n (v + v_c)).
///
/// The phase is evaluated as pi * (n+1) * (v + v_c) / (2 v_c) with an exact
/// reduction of the half-period count, so psi_n vanishes to the last bit at
/// both endpoints and odd modes vanish at v = 0. Throws DomainError for
/// |v| > v_c.
double eigenfunction_eval(const OperatorParams& params, std::int64_t n, double v);

/// Modes 0..N in decreasing eigenvalue order.
std::vector<Mode> modes(const OperatorParams& params, std::int64_t N);

enum class CriticalIndexMethod { sign_scan, quantization_bound };

struct CriticalIndexReport {
    double x;  // 2 v_c c / (pi hbar)
    BigIndex n_star_paper;  // floor(x)
    std::optional<BigIndex> n_star_exact;  // largest n with C_n >= 0
    bool agree;
    CriticalIndexMethod method;
};

/// Reports the floor formula next to the largest index with a non-negative
/// eigenvalue. While x fits comfortably in a double mantissa the latter is
/// found by bisecting on the sign of eigenvalue(); beyond 2^52 individual
/// modes are no longer distinguishable in 64-bit arithmetic and it follows
/// from the quantization condition (n+1) <= x instead.
CriticalIndexReport critical_index(const OperatorParams& params);

/// Strict sign changes along a sequence; exact zeros are skipped.
std::int64_t count_sign_changes(std::span<const double> values);

/// Sign changes of psi_n strictly inside (-v_c, v_c), sampled on
/// grid_points equally spaced points. Samples within 2 v_c / grid_points of
/// either endpoint are ignored.
std::int64_t count_interior_zeros(const OperatorParams& params, std::int64_t n,
                                  std::int64_t grid_points);

/// alpha = hbar^2 pi^3 / (4 c^2 v_c^2).
double asymptotic_coefficient(const OperatorParams& params);

/// pi - alpha n^2.
double asymptotic_eigenvalue(const OperatorParams& params, std::int64_t n);

}  // namespace defspec
