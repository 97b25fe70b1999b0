#ifndef RFP_RANDOM_OPERATOR_HPP
#define RFP_RANDOM_OPERATOR_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>

#include "rfp/norms.hpp"
#include "rfp/space.hpp"

namespace rfp {

/// T : Omega x R^n -> R^n. `eval` must be a pure function of
/// (omega.derived_seed, x); all determinism guarantees rest on that.
struct RandomOperator {
    std::size_t dim = 1;
    std::function<Vector(const OmegaSample&, const Vector&)> eval;

    Vector operator()(const OmegaSample& omega, const Vector& x) const {
        if (x.size() != dim) throw ShapeError("RandomOperator: input dimension mismatch");
        Vector y = eval(omega, x);
        if (y.size() != dim) throw EvaluationError("RandomOperator: output dimension mismatch");
        for (double v : y)
            if (!std::isfinite(v)) throw EvaluationError("RandomOperator: non-finite output");
        return y;
    }
};

}  // namespace rfp

#endif
