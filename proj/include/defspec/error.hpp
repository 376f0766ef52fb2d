#pragma once

#include <stdexcept>
#include <string>

namespace defspec {

// Base for every error raised by the library. The CLI maps the concrete
// kinds onto exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input value (bad parameter, violated precondition).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside [-v_c, v_c].
class DomainError : public Error {
public:
    using Error::Error;
};

/// Grid or quadrature rule too coarse for the requested mode.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Non-finite integrand value at a quadrature node.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Iterative method failed or a fit was degenerate.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed CSV/JSON input.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace defspec
