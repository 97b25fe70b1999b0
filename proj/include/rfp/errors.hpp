#ifndef RFP_ERRORS_HPP
#define RFP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rfp {

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Coefficients violate the feasibility constraint of their condition kind
/// (e.g. the five Hardy-Rogers coefficients summing to >= 1).
struct InfeasibleCoefficientsError : std::domain_error {
    using std::domain_error::domain_error;
};

struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSampleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The Hammerstein feasibility inequality fails and solving was not forced.
struct FeasibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A certified-invariant ball was left during iteration; points at a bug or
/// an under-resolved quadrature grid.
struct InvarianceViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rfp

#endif
