#ifndef RFP_PICARD_HPP
#define RFP_PICARD_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "rfp/contraction.hpp"
#include "rfp/norms.hpp"
#include "rfp/random_operator.hpp"
#include "rfp/space.hpp"

namespace rfp {

struct PicardConfig {
    double tol = 1e-9;
    std::size_t max_iter = 10000;
    NormKind norm_kind = NormKind::Euclidean;
    /// Grid weights when norm_kind is WeightedL2.
    Vector weights;

    void validate() const {
        if (!(tol > 0.0)) throw ValidationError("PicardConfig: tol must be positive");
        if (max_iter < 1) throw ValidationError("PicardConfig: max_iter must be >= 1");
    }
};

struct PicardReport {
    Vector fixed_point;
    std::size_t iterations = 0;
    std::vector<double> step_norms;
    std::vector<double> ratio_estimates;
    double k_bound = std::numeric_limits<double>::quiet_NaN();
    double apriori_bound = std::numeric_limits<double>::quiet_NaN();
    double aposteriori_bound = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    /// True when the iteration ran under feasible Hardy-Rogers coefficients,
    /// so the bounds above are certified rather than heuristic.
    bool certified = false;
    bool diverged = false;
};

struct PicardDivergenceError : std::runtime_error {
    PicardReport partial;
    explicit PicardDivergenceError(PicardReport r)
        : std::runtime_error("picard_solve: divergence detected"), partial(std::move(r)) {}
};

/// Contraction ratio of the symmetrized successive-difference recursion:
/// with s_bc = (a2+a3)/2 and s_de = (a4+a5)/2,
///   k = (a1 + s_bc + s_de) / (1 - s_bc - s_de),
/// which is < 1 exactly when a1 + ... + a5 < 1.
inline double hr_contraction_ratio(const HRCoefficients& c) {
    for (double a : c.as_array())
        if (a < 0.0) throw InfeasibleCoefficientsError("hr_contraction_ratio: negative coefficient");
    if (c.sum() >= 1.0)
        throw InfeasibleCoefficientsError("hr_contraction_ratio: coefficient sum must be < 1");
    const double s_bc = (c.a2 + c.a3) / 2.0;
    const double s_de = (c.a4 + c.a5) / 2.0;
    return (c.a1 + s_bc + s_de) / (1.0 - s_bc - s_de);
}

using IterateObserver = std::function<void(const Vector&, std::size_t)>;

/// Picard iteration x_{n+1} = T(omega, x_n).
///
/// With feasible coefficients the stopping threshold is chosen so both the
/// a-posteriori error and the final residual are below tol. Without them the
/// iteration still runs (raw step-norm stopping) but the report is flagged
/// uncertified.
inline PicardReport picard_solve(const RandomOperator& T, const OmegaSample& omega,
                                 const Vector& x0, std::optional<HRCoefficients> coeffs,
                                 const PicardConfig& cfg, const IterateObserver& observe = {}) {
    cfg.validate();
    PicardReport rep;
    rep.certified = coeffs.has_value() && coeffs->feasible_hr();
    double threshold = cfg.tol;
    if (rep.certified) {
        rep.k_bound = hr_contraction_ratio(*coeffs);
        if (rep.k_bound > 0.0) threshold = cfg.tol * std::min(1.0, (1.0 - rep.k_bound) / rep.k_bound);
    }

    auto dist = [&](const Vector& a, const Vector& b) {
        return distance(a, b, cfg.norm_kind, cfg.weights);
    };

    Vector x = x0;
    double prev_step = -1.0;
    for (std::size_t n = 1; n <= cfg.max_iter; ++n) {
        Vector xn = T(omega, x);
        const double step = dist(xn, x);
        rep.step_norms.push_back(step);
        if (prev_step > 0.0) rep.ratio_estimates.push_back(step / prev_step);
        prev_step = step;
        rep.iterations = n;
        x = std::move(xn);
        if (observe) observe(x, n);
        // Divergence guard: growth by more than 10x over 20 consecutive steps.
        if (n > 20) {
            const double old = rep.step_norms[n - 21];
            if (old > 0.0 && step > 10.0 * old) {
                rep.fixed_point = std::move(x);
                rep.diverged = true;
                throw PicardDivergenceError(std::move(rep));
            }
        }
        if (step <= threshold) {
            rep.converged = true;
            break;
        }
    }
    rep.fixed_point = std::move(x);
    rep.residual = dist(T(omega, rep.fixed_point), rep.fixed_point);
    if (rep.certified && !rep.step_norms.empty()) {
        const double k = rep.k_bound;
        const double last = rep.step_norms.back();
        rep.aposteriori_bound = k < 1.0 ? k / (1.0 - k) * last : std::numeric_limits<double>::infinity();
        rep.apriori_bound = std::pow(k, static_cast<double>(rep.iterations)) / (1.0 - k) *
                            rep.step_norms.front();
    }
    return rep;
}

/// Convenience overload taking a Hardy-Rogers certificate.
inline PicardReport picard_solve(const RandomOperator& T, const OmegaSample& omega,
                                 const Vector& x0, const ContractionCertificate& cert,
                                 const PicardConfig& cfg) {
    std::optional<HRCoefficients> coeffs;
    if (cert.kind == ConditionKind::HardyRogers && cert.margin >= kPassMargin &&
        std::holds_alternative<HRCoefficients>(cert.coefficients)) {
        const auto& h = std::get<HRCoefficients>(cert.coefficients);
        if (h.feasible_hr()) coeffs = h;
    }
    return picard_solve(T, omega, x0, coeffs, cfg);
}

}  // namespace rfp

#endif
