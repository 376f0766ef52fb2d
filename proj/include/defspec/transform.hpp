#pragma once

#include <cstdint>
#include <vector>

#include "defspec/params.hpp"
#include "defspec/quadrature_grid.hpp"

namespace defspec {

/// Truncated coefficients a_0..a_N of a function in the psi_n basis.
class CoefficientVector {
public:
    /// Throws ValidationError for an empty or non-finite coefficient list.
    CoefficientVector(OperatorParams params, std::vector<double> a);

    const OperatorParams& params() const noexcept { return params_; }
    std::int64_t N() const noexcept { return static_cast<std::int64_t>(a_.size()) - 1; }
    const std::vector<double>& a() const noexcept { return a_; }
    double operator[](std::size_t n) const { return a_.at(n); }
    std::size_t size() const noexcept { return a_.size(); }

private:
    OperatorParams params_;
    std::vector<double> a_;
};

/// Square matrix stored row-major.
struct SquareMatrix {
    std::size_t dim = 0;
    std::vector<double> entries;

    double operator()(std::size_t row, std::size_t col) const { return entries[row * dim + col]; }
    double& operator()(std::size_t row, std::size_t col) { return entries[row * dim + col]; }
};

/// a_n = <f, psi_n> for n = 0..N by quadrature. The rule must resolve mode N
/// (see QuadratureRule::resolves_mode), otherwise ResolutionError.
CoefficientVector project(const OperatorParams& params, const RealFunction& f, std::int64_t N,
                          const QuadratureRule& rule);

/// sum_n a_n psi_n(v) at a single point.
double evaluate_series(const CoefficientVector& coeffs, double v);

/// Pointwise partial sum on a grid.
SampledFunction reconstruct(const CoefficientVector& coeffs, const Grid& grid);

double l2_norm(const OperatorParams& params, const RealFunction& f, const QuadratureRule& rule);

/// ||f||^2 - sum_{n <= N} a_n^2, reported without clamping. Quadrature noise
/// can make it slightly negative (bounded by 1e-9 for resolved rules).
double parseval_defect(const OperatorParams& params, const RealFunction& f, std::int64_t N,
                       const QuadratureRule& rule);

/// (C_n a_n)_n: the operator acting in its own eigenbasis.
CoefficientVector apply_operator_spectral(const CoefficientVector& coeffs);

/// <psi_n, psi_m> for n, m = 0..N.
SquareMatrix gram_matrix(const OperatorParams& params, std::int64_t N, const QuadratureRule& rule);

/// max |G - I|.
double identity_defect(const SquareMatrix& gram);

}  // namespace defspec
