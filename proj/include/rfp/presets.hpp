#ifndef RFP_PRESETS_HPP
#define RFP_PRESETS_HPP

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rfp/hammerstein.hpp"
#include "rfp/randomfp.hpp"

namespace rfp {

using ParamMap = std::map<std::string, double>;

inline double param_or(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

/// A named random-operator family: the operator, its declared per-outcome
/// coefficients, and a sensible start vector.
struct OperatorFamily {
    RandomOperator op;
    RandomCoefficientSpec coeffs;
    Vector x0;
};

namespace detail {

/// Row-scaled random matrix with sup-induced norm exactly `target`.
inline std::vector<Vector> random_matrix(OmegaStream& rng, std::size_t n, double target) {
    std::vector<Vector> A(n, Vector(n));
    double worst = 0.0;
    for (auto& row : A) {
        double rowsum = 0.0;
        for (double& v : row) {
            v = rng.uniform(-1.0, 1.0);
            rowsum += std::abs(v);
        }
        worst = std::max(worst, rowsum);
    }
    if (worst > 0.0)
        for (auto& row : A)
            for (double& v : row) v *= target / worst;
    return A;
}

}  // namespace detail

/// Operator presets used by the CLI and the test oracles.
///
///   scaling       T = factor * x                         {factor, dim}
///   affine_scalar T = a(w) x + b(w), a,b uniform         {a_min,a_max,b_min,b_max}
///   affine_matrix T = A(w) x + b(w), |A| = norm target   {dim, norm}
///   constant      T = c(w), entries uniform              {dim, c_min, c_max}
///   identity      T = x                                  {dim}
///   two_piece     T x = x/4 (x < 1/2), x/5 otherwise     {}
inline OperatorFamily make_operator_preset(const std::string& name, const ParamMap& p = {}) {
    OperatorFamily fam;
    if (name == "scaling") {
        const double factor = param_or(p, "factor", 0.4);
        const std::size_t dim = static_cast<std::size_t>(param_or(p, "dim", 1));
        fam.op.dim = dim;
        fam.op.eval = [factor](const OmegaSample&, const Vector& x) {
            Vector y = x;
            for (double& v : y) v *= factor;
            return y;
        };
        fam.coeffs.generator = [factor](const OmegaSample&) {
            return HRCoefficients{std::abs(factor), 0, 0, 0, 0};
        };
        fam.x0.assign(dim, 1.0);
    } else if (name == "affine_scalar") {
        const double a_min = param_or(p, "a_min", 0.1), a_max = param_or(p, "a_max", 0.9);
        const double b_min = param_or(p, "b_min", -1.0), b_max = param_or(p, "b_max", 1.0);
        auto draw = [=](const OmegaSample& omega) {
            OmegaStream rng(omega);
            const double a = rng.uniform(a_min, a_max);
            const double b = rng.uniform(b_min, b_max);
            return std::pair{a, b};
        };
        fam.op.dim = 1;
        fam.op.eval = [draw](const OmegaSample& omega, const Vector& x) {
            const auto [a, b] = draw(omega);
            return Vector{a * x[0] + b};
        };
        fam.coeffs.generator = [draw](const OmegaSample& omega) {
            return HRCoefficients{std::abs(draw(omega).first), 0, 0, 0, 0};
        };
        fam.x0 = {0.0};
    } else if (name == "affine_matrix") {
        const std::size_t dim = static_cast<std::size_t>(param_or(p, "dim", 4));
        const double target = param_or(p, "norm", 0.8);
        auto matrix = [dim, target](const OmegaSample& omega) {
            OmegaStream rng = tagged_stream(omega, 1);
            return detail::random_matrix(rng, dim, target);
        };
        fam.op.dim = dim;
        fam.op.eval = [dim, matrix](const OmegaSample& omega, const Vector& x) {
            const auto A = matrix(omega);
            OmegaStream rng = tagged_stream(omega, 2);
            Vector y(dim, 0.0);
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) y[i] += A[i][j] * x[j];
                y[i] += rng.uniform(-1.0, 1.0);
            }
            return y;
        };
        fam.coeffs.generator = [target](const OmegaSample&) {
            return HRCoefficients{target, 0, 0, 0, 0};
        };
        fam.x0.assign(dim, 0.0);
    } else if (name == "constant") {
        const std::size_t dim = static_cast<std::size_t>(param_or(p, "dim", 1));
        const double lo = param_or(p, "c_min", -1.0), hi = param_or(p, "c_max", 1.0);
        fam.op.dim = dim;
        fam.op.eval = [dim, lo, hi](const OmegaSample& omega, const Vector&) {
            OmegaStream rng(omega);
            Vector c(dim);
            for (double& v : c) v = rng.uniform(lo, hi);
            return c;
        };
        fam.coeffs.generator = [](const OmegaSample&) { return HRCoefficients{}; };
        fam.x0.assign(dim, 0.0);
    } else if (name == "identity") {
        const std::size_t dim = static_cast<std::size_t>(param_or(p, "dim", 1));
        fam.op.dim = dim;
        fam.op.eval = [](const OmegaSample&, const Vector& x) { return x; };
        fam.coeffs.generator = {};
        fam.x0.assign(dim, 1.0);
    } else if (name == "two_piece") {
        // Kannan-but-not-Banach example: discontinuous at 1/2.
        fam.op.dim = 1;
        fam.op.eval = [](const OmegaSample&, const Vector& x) {
            return Vector{x[0] < 0.5 ? x[0] / 4.0 : x[0] / 5.0};
        };
        fam.coeffs.generator = [](const OmegaSample&) {
            return HRCoefficients{0, 0.24, 0.24, 0, 0};
        };
        fam.x0 = {1.0};
    } else {
        throw ValidationError("unknown operator preset '" + name + "'");
    }
    return fam;
}

/// Kernel presets:
///   separable    k = a(w) t s,          a(w) = a0 + a1 u
///   convolution  k = c(w) exp(-gamma |t - s|)
///   green        k = c(w) * (s(1-t) for s <= t, else t(1-s))
inline KernelFn make_kernel_preset(const std::string& name, const ParamMap& p = {}) {
    const double a0 = param_or(p, "a0", 1.0), a1 = param_or(p, "a1", 0.0);
    auto coeff = [a0, a1](const OmegaSample& omega) {
        OmegaStream rng = tagged_stream(omega, 11);
        return a0 + a1 * rng.uniform();
    };
    if (name == "separable") {
        return [coeff](const OmegaSample& omega, double t, double s) {
            return coeff(omega) * t * s;
        };
    }
    if (name == "convolution") {
        const double gamma = param_or(p, "gamma", 1.0);
        return [coeff, gamma](const OmegaSample& omega, double t, double s) {
            return coeff(omega) * std::exp(-gamma * std::abs(t - s));
        };
    }
    if (name == "green") {
        return [coeff](const OmegaSample& omega, double t, double s) {
            return coeff(omega) * (s <= t ? s * (1.0 - t) : t * (1.0 - s));
        };
    }
    throw ValidationError("unknown kernel preset '" + name + "'");
}

/// Free-term presets: zero, const (h = c), linear (h = c t); c = c0 + c1 u.
inline FreeTermFn make_free_term_preset(const std::string& name, const ParamMap& p = {}) {
    const double c0 = param_or(p, "c0", 1.0), c1 = param_or(p, "c1", 0.0);
    auto coeff = [c0, c1](const OmegaSample& omega) {
        OmegaStream rng = tagged_stream(omega, 12);
        return c0 + c1 * rng.uniform();
    };
    if (name == "zero") return [](const OmegaSample&, double) { return 0.0; };
    if (name == "const") return [coeff](const OmegaSample& omega, double) { return coeff(omega); };
    if (name == "linear")
        return [coeff](const OmegaSample& omega, double t) { return coeff(omega) * t; };
    throw ValidationError("unknown free-term preset '" + name + "'");
}

/// Nonlinearity presets: zero, linear (f = lambda x), sin (f = lambda sin x).
inline NonlinearityFn make_nonlinearity_preset(const std::string& name, const ParamMap& p = {}) {
    const double lambda = param_or(p, "lambda", 0.2);
    if (name == "zero") return [](double, double) { return 0.0; };
    if (name == "linear") return [lambda](double, double x) { return lambda * x; };
    if (name == "sin") return [lambda](double, double x) { return lambda * std::sin(x); };
    throw ValidationError("unknown nonlinearity preset '" + name + "'");
}

}  // namespace rfp

#endif
