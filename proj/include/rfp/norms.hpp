#ifndef RFP_NORMS_HPP
#define RFP_NORMS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rfp/errors.hpp"

namespace rfp {

using Vector = std::vector<double>;

enum class NormKind { Euclidean, Sup, WeightedL2 };

/// Norm of a finite vector. WeightedL2 needs strictly positive grid
/// weights of matching length; the other kinds ignore `weights`.
inline double norm(std::span<const double> v, NormKind kind, std::span<const double> weights = {}) {
    if (v.empty()) throw ShapeError("norm: empty vector");
    switch (kind) {
        case NormKind::Euclidean: {
            double s = 0.0;
            for (double x : v) s += x * x;
            return std::sqrt(s);
        }
        case NormKind::Sup: {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::abs(x));
            return m;
        }
        case NormKind::WeightedL2: {
            if (weights.size() != v.size()) throw ShapeError("norm: weight/vector size mismatch");
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!(weights[i] > 0.0)) throw ShapeError("norm: weights must be positive");
                s += weights[i] * v[i] * v[i];
            }
            return std::sqrt(s);
        }
    }
    throw ShapeError("norm: unknown kind");
}

inline Vector sub(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("sub: dimension mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline double distance(std::span<const double> a, std::span<const double> b, NormKind kind,
                       std::span<const double> weights = {}) {
    return norm(sub(a, b), kind, weights);
}

}  // namespace rfp

#endif
