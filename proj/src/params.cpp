#include "defspec/params.hpp"

#include <cmath>
#include <fmt/format.h>

#include "defspec/error.hpp"

namespace defspec {

std::string_view to_string(UnitMode mode) noexcept {
    switch (mode) {
        case UnitMode::dimensionless: return "dimensionless";
        case UnitMode::si: return "SI";
        case UnitMode::custom: return "custom";
    }
    return "unknown";
}

OperatorParams canonical_params() {
    return OperatorParams(1.0, 1.0, critical_velocity_ratio(), UnitMode::dimensionless);
}

OperatorParams si_params() {
    return OperatorParams(si::hbar, si::c, critical_velocity_ratio() * si::c, UnitMode::si);
}

OperatorParams custom_params(double hbar, double c, double v_c) {
    auto require_positive = [](double value, std::string_view name) {
        if (!std::isfinite(value) || !(value > 0.0)) {
            throw ValidationError(fmt::format("{} must be positive (got {})", name, value));
        }
    };
    require_positive(hbar, "hbar");
    require_positive(c, "c");
    require_positive(v_c, "v_c");
    if (!(v_c < c)) {
        throw ValidationError(fmt::format("v_c must be < c (got v_c = {}, c = {})", v_c, c));
    }
    return OperatorParams(hbar, c, v_c, UnitMode::custom);
}

double deformation_profile(const OperatorParams& params, double v) {
    if (!(std::abs(v) <= params.v_c())) {
        throw DomainError(fmt::format("v = {} outside [-v_c, v_c] with v_c = {}", v, params.v_c()));
    }
    const double ratio = v / params.c();
    return std::numbers::pi * (1.0 - ratio * ratio);
}

}  // namespace defspec
