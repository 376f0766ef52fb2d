#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

namespace defspec {

enum class UnitMode { dimensionless, si, custom };

std::string_view to_string(UnitMode mode) noexcept;

/// Physical constants of one operator instance: hbar, c and the half-width
/// v_c of the interval [-v_c, v_c]. Immutable; construct through the
/// factory functions below, which enforce hbar > 0, c > 0 and 0 < v_c < c.
class OperatorParams {
public:
    double hbar() const noexcept { return hbar_; }
    double c() const noexcept { return c_; }
    double v_c() const noexcept { return v_c_; }
    UnitMode unit_mode() const noexcept { return mode_; }

    /// hbar / (c v_c), the one dimensionless group the spectrum depends on.
    double gamma() const noexcept { return hbar_ / (c_ * v_c_); }

    /// (hbar / c)^2, the coefficient of d^2/dv^2 inside the operator.
    double dispersion() const noexcept { return (hbar_ / c_) * (hbar_ / c_); }

    double interval_length() const noexcept { return 2.0 * v_c_; }

    friend bool operator==(const OperatorParams&, const OperatorParams&) = default;

private:
    OperatorParams(double hbar, double c, double v_c, UnitMode mode) noexcept
        : hbar_(hbar), c_(c), v_c_(v_c), mode_(mode) {}

    friend OperatorParams canonical_params();
    friend OperatorParams si_params();
    friend OperatorParams custom_params(double hbar, double c, double v_c);

    double hbar_;
    double c_;
    double v_c_;
    UnitMode mode_;
};

namespace si {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double c = 2.99792458e8;        // m / s
}  // namespace si

/// sqrt(1 - 1/pi): the ratio v_c / c at which the profile drops to 1.
inline double critical_velocity_ratio() noexcept {
    return std::sqrt(1.0 - std::numbers::inv_pi);
}

/// hbar = c = 1, v_c = sqrt(1 - 1/pi).
OperatorParams canonical_params();

/// SI hbar and c with the canonical ratio v_c = sqrt(1 - 1/pi) c.
OperatorParams si_params();

/// Throws ValidationError naming the offending field.
OperatorParams custom_params(double hbar, double c, double v_c);

/// C(v) = pi (1 - v^2 / c^2) on [-v_c, v_c]; DomainError outside.
double deformation_profile(const OperatorParams& params, double v);

}  // namespace defspec
