#ifndef RFP_CONTRACTION_HPP
#define RFP_CONTRACTION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rfp/norms.hpp"
#include "rfp/random_operator.hpp"
#include "rfp/simplex.hpp"
#include "rfp/space.hpp"

namespace rfp {

/// Strictness gap for the "< 1" feasibility constraints.
inline constexpr double kFeasibilityGap = 1e-9;
/// A certificate counts as passing down to this margin.
inline constexpr double kPassMargin = -1e-9;

enum class ConditionKind {
    Banach,
    Kannan,
    Reich,
    Ciric,
    Chatterjea,
    Zamfirescu,
    HardyRogers,
    GregusCiric,
    SahaGanguly,
};

inline const char* to_string(ConditionKind k) {
    switch (k) {
        case ConditionKind::Banach: return "Banach";
        case ConditionKind::Kannan: return "Kannan";
        case ConditionKind::Reich: return "Reich";
        case ConditionKind::Ciric: return "Ciric";
        case ConditionKind::Chatterjea: return "Chatterjea";
        case ConditionKind::Zamfirescu: return "Zamfirescu";
        case ConditionKind::HardyRogers: return "HardyRogers";
        case ConditionKind::GregusCiric: return "GregusCiric";
        case ConditionKind::SahaGanguly: return "SahaGanguly";
    }
    return "?";
}

/// The five coefficients of the Hardy-Rogers inequality
///   |Tx - Ty| <= a1|x-y| + a2|x-Tx| + a3|y-Ty| + a4|x-Ty| + a5|y-Tx|.
/// The specialized kinds reuse the same slots with the unused ones at zero:
/// Banach = (a1), Kannan = (a2,a3), Reich = (a1,a2,a3),
/// Chatterjea = (a4,a5), Ciric = (a1,a2,a3,d,d),
/// Zamfirescu = (alpha, beta, beta, gamma, gamma).
struct HRCoefficients {
    double a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0;

    double sum() const { return a1 + a2 + a3 + a4 + a5; }
    std::array<double, 5> as_array() const { return {a1, a2, a3, a4, a5}; }
    bool feasible_hr() const {
        return a1 >= 0 && a2 >= 0 && a3 >= 0 && a4 >= 0 && a5 >= 0 &&
               sum() <= 1.0 - kFeasibilityGap;
    }
};

/// Which printed bound on c applies: the Gregus-Ciric theorem uses
/// c <= (4-a)/(8-b), the Saha-Ganguly one uses c <= (4-a)/(8-a).
enum class GregusVariant { BoundOverEightMinusB, BoundOverEightMinusA };

struct GregusParams {
    double a = 0, b = 0, c = 0;
    GregusVariant variant = GregusVariant::BoundOverEightMinusB;

    double c_bound() const {
        return variant == GregusVariant::BoundOverEightMinusB ? (4.0 - a) / (8.0 - b)
                                                              : (4.0 - a) / (8.0 - a);
    }
};

using ConditionCoefficients = std::variant<HRCoefficients, GregusParams>;

struct ContractionCertificate {
    ConditionKind kind = ConditionKind::HardyRogers;
    OmegaSample omega;
    ConditionCoefficients coefficients;
    double margin = 0.0;
    std::size_t pairs_checked = 0;
    /// Set on Hardy-Rogers certificates whose coefficients also fit the
    /// Gregus-Ciric shape (a2 = 0 or a3 = 0, and a4 = a5).
    bool gregus_annotation = false;
};

/// The five canonical distances plus the left-hand side for one pair.
struct PairDistances {
    double d_xy = 0, d_xTx = 0, d_yTy = 0, d_xTy = 0, d_yTx = 0, lhs = 0;
};

inline PairDistances pair_distances(const RandomOperator& T, const OmegaSample& omega,
                                    const Vector& x, const Vector& y,
                                    NormKind nk = NormKind::Euclidean) {
    const Vector tx = T(omega, x);
    const Vector ty = T(omega, y);
    PairDistances d;
    d.d_xy = distance(x, y, nk);
    d.d_xTx = distance(x, tx, nk);
    d.d_yTy = distance(y, ty, nk);
    d.d_xTy = distance(x, ty, nk);
    d.d_yTx = distance(y, tx, nk);
    d.lhs = distance(tx, ty, nk);
    return d;
}

namespace detail {

inline void require(bool ok, const char* msg) {
    if (!ok) throw InfeasibleCoefficientsError(msg);
}

inline bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace detail

inline void validate_coefficients(ConditionKind kind, const ConditionCoefficients& coeffs) {
    using detail::require;
    if (std::holds_alternative<GregusParams>(coeffs)) {
        require(kind == ConditionKind::GregusCiric || kind == ConditionKind::SahaGanguly,
                "Gregus-type parameters only valid for GregusCiric/SahaGanguly");
        const auto& g = std::get<GregusParams>(coeffs);
        require(g.a > 0.0 && g.a < 1.0, "Gregus: need 0 < a < 1");
        require(detail::near(g.a + g.b, 1.0), "Gregus: need a + b = 1");
        require(g.c >= 0.0 && g.c <= g.c_bound() + 1e-12, "Gregus: c exceeds its bound");
        return;
    }
    const auto& h = std::get<HRCoefficients>(coeffs);
    for (double a : h.as_array()) require(a >= 0.0, "coefficients must be nonnegative");
    const double gap = 1.0 - kFeasibilityGap;
    switch (kind) {
        case ConditionKind::Banach:
            require(h.a2 == 0 && h.a3 == 0 && h.a4 == 0 && h.a5 == 0, "Banach uses a1 only");
            require(h.a1 <= gap, "Banach: a1 must be < 1");
            break;
        case ConditionKind::Kannan:
            require(h.a1 == 0 && h.a4 == 0 && h.a5 == 0, "Kannan uses a2, a3 only");
            require(h.a2 + h.a3 <= gap, "Kannan: a2 + a3 must be < 1");
            break;
        case ConditionKind::Reich:
            require(h.a4 == 0 && h.a5 == 0, "Reich uses a1, a2, a3 only");
            require(h.a1 + h.a2 + h.a3 <= gap, "Reich: coefficient sum must be < 1");
            break;
        case ConditionKind::Ciric:
            require(detail::near(h.a4, h.a5), "Ciric: needs a4 = a5");
            require(h.a1 + h.a2 + h.a3 + 2.0 * h.a4 <= gap, "Ciric: a1+a2+a3+2d must be < 1");
            break;
        case ConditionKind::Chatterjea:
            require(h.a1 == 0 && h.a2 == 0 && h.a3 == 0, "Chatterjea uses a4, a5 only");
            require(h.a4 + h.a5 <= gap, "Chatterjea: a4 + a5 must be < 1");
            break;
        case ConditionKind::Zamfirescu:
            require(detail::near(h.a2, h.a3) && detail::near(h.a4, h.a5),
                    "Zamfirescu: needs a2 = a3 and a4 = a5");
            require(h.a1 <= gap, "Zamfirescu: alpha must be < 1");
            require(h.a2 <= gap, "Zamfirescu: beta must be < 1");
            require(h.a4 <= 0.5 - kFeasibilityGap, "Zamfirescu: gamma must be < 1/2");
            break;
        case ConditionKind::HardyRogers:
            require(h.sum() <= gap, "HardyRogers: coefficient sum must be < 1");
            break;
        default:
            throw InfeasibleCoefficientsError("HR coefficients not valid for Gregus-type kinds");
    }
}

/// RHS - LHS of the kind's inequality on one pair; for Zamfirescu the best
/// of the three case slacks.
inline double pair_slack(ConditionKind kind, const ConditionCoefficients& coeffs,
                         const PairDistances& d) {
    if (std::holds_alternative<GregusParams>(coeffs)) {
        const auto& g = std::get<GregusParams>(coeffs);
        double rhs;
        if (kind == ConditionKind::GregusCiric) {
            rhs = g.a * d.d_xy + g.b * std::max(d.d_xTx, d.d_yTy) + g.c * (d.d_xTy + d.d_yTx);
        } else {
            rhs = g.a * std::max(d.d_xy, g.c * (d.d_xTy + d.d_yTx)) +
                  g.b * std::max(d.d_xTx, d.d_yTy);
        }
        return rhs - d.lhs;
    }
    const auto& h = std::get<HRCoefficients>(coeffs);
    switch (kind) {
        case ConditionKind::Banach: return h.a1 * d.d_xy - d.lhs;
        case ConditionKind::Kannan: return h.a2 * d.d_xTx + h.a3 * d.d_yTy - d.lhs;
        case ConditionKind::Reich:
            return h.a1 * d.d_xy + h.a2 * d.d_xTx + h.a3 * d.d_yTy - d.lhs;
        case ConditionKind::Ciric:
            return h.a1 * d.d_xy + h.a2 * d.d_xTx + h.a3 * d.d_yTy +
                   h.a4 * (d.d_xTy + d.d_yTx) - d.lhs;
        case ConditionKind::Chatterjea: return h.a4 * d.d_xTy + h.a5 * d.d_yTx - d.lhs;
        case ConditionKind::Zamfirescu: {
            const double s1 = h.a1 * d.d_xy - d.lhs;
            const double s2 = h.a2 * (d.d_xTx + d.d_yTy) - d.lhs;
            const double s3 = h.a4 * (d.d_xTy + d.d_yTx) - d.lhs;
            return std::max({s1, s2, s3});
        }
        case ConditionKind::HardyRogers:
            return h.a1 * d.d_xy + h.a2 * d.d_xTx + h.a3 * d.d_yTy + h.a4 * d.d_xTy +
                   h.a5 * d.d_yTx - d.lhs;
        default: break;
    }
    throw InfeasibleCoefficientsError("pair_slack: coefficient/kind mismatch");
}

inline bool gregus_compatible(const HRCoefficients& h) {
    return (h.a2 <= 1e-12 || h.a3 <= 1e-12) && detail::near(h.a4, h.a5);
}

using PairSample = std::vector<std::pair<Vector, Vector>>;

/// Evaluate the kind's inequality on every pair; margin is the worst slack.
inline ContractionCertificate check_condition(const RandomOperator& T, const OmegaSample& omega,
                                              ConditionKind kind,
                                              const ConditionCoefficients& coeffs,
                                              const PairSample& pairs,
                                              NormKind nk = NormKind::Euclidean) {
    if (pairs.empty()) throw ValidationError("check_condition: empty pair sample");
    validate_coefficients(kind, coeffs);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : pairs)
        margin = std::min(margin, pair_slack(kind, coeffs, pair_distances(T, omega, x, y, nk)));
    ContractionCertificate cert;
    cert.kind = kind;
    cert.omega = omega;
    cert.coefficients = coeffs;
    cert.margin = margin;
    cert.pairs_checked = pairs.size();
    if (kind == ConditionKind::HardyRogers)
        cert.gregus_annotation = gregus_compatible(std::get<HRCoefficients>(coeffs));
    return cert;
}

namespace detail {

/// Minimal-sum fit over a column subset of the five HR distances.
/// `columns[j]` lists which distance slots coefficient j feeds (Ciric's
/// shared delta feeds both cross terms); `weights[j]` is its objective
/// weight. Lexicographic tie-break toward the smallest leading
/// coefficients, per column order.
inline LpResult fit_linear_condition(const std::vector<PairDistances>& ds,
                                     const std::vector<std::vector<int>>& columns,
                                     const std::vector<double>& weights) {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    bool any_separated = false;
    for (const auto& d : ds) {
        const std::array<double, 5> slot = {d.d_xy, d.d_xTx, d.d_yTy, d.d_xTy, d.d_yTx};
        std::vector<double> row(columns.size(), 0.0);
        double rowmax = 0.0;
        for (std::size_t j = 0; j < columns.size(); ++j) {
            for (int s : columns[j]) row[j] += slot[static_cast<std::size_t>(s)];
            rowmax = std::max(rowmax, row[j]);
        }
        if (d.d_xy <= 1e-14 && d.lhs <= 1e-14) continue;  // x = y, vacuous
        if (rowmax <= 1e-14 && d.lhs > 1e-14)
            return {LpStatus::Infeasible, {}, 0.0};  // not-contractive evidence
        any_separated = true;
        if (rowmax <= 1e-14) continue;  // 0 >= 0, no constraint
        // Normalize each row: constraints are homogeneous, and iterate-pair
        // rows can span many orders of magnitude.
        const double scale = std::max(rowmax, d.lhs);
        for (double& v : row) v /= scale;
        A.push_back(std::move(row));
        b.push_back(d.lhs / scale);
    }
    if (!any_separated) throw DegenerateSampleError("coefficient fit: all pairs identical");

    LpResult res = lp_minimize_geq(A, b, weights);
    if (res.status != LpStatus::Optimal) return res;

    // Lexicographic refinement: pin the optimal weighted sum, then
    // minimize each coefficient in turn.
    const double slack = 1e-10;
    double bound = res.value;
    std::vector<double> neg_w(weights);
    for (double& w : neg_w) w = -w;
    A.push_back(neg_w);
    b.push_back(-(bound + slack));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        std::vector<double> obj(columns.size(), 0.0);
        obj[j] = 1.0;
        LpResult step = lp_minimize_geq(A, b, obj);
        if (step.status != LpStatus::Optimal) break;
        res.x = step.x;
        std::vector<double> pin(columns.size(), 0.0);
        pin[j] = -1.0;
        A.push_back(std::move(pin));
        b.push_back(-(step.value + slack));
    }
    for (double& v : res.x) v = std::max(v, 0.0);
    res.value = 0.0;
    for (std::size_t j = 0; j < columns.size(); ++j) res.value += weights[j] * res.x[j];
    return res;
}

inline std::vector<PairDistances> all_pair_distances(const RandomOperator& T,
                                                     const OmegaSample& omega,
                                                     const PairSample& pairs, NormKind nk) {
    std::vector<PairDistances> ds;
    ds.reserve(pairs.size());
    for (const auto& [x, y] : pairs) ds.push_back(pair_distances(T, omega, x, y, nk));
    return ds;
}

}  // namespace detail

/// Minimal-sum Hardy-Rogers coefficients consistent with the pair sample.
/// The result always satisfies the per-pair inequalities to within 1e-9;
/// whether its sum is < 1 (i.e. whether the operator is actually certified)
/// is the caller's check.
inline HRCoefficients fit_hr_coefficients(const RandomOperator& T, const OmegaSample& omega,
                                          const PairSample& pairs,
                                          NormKind nk = NormKind::Euclidean) {
    if (pairs.empty()) throw ValidationError("fit_hr_coefficients: empty pair sample");
    const auto ds = detail::all_pair_distances(T, omega, pairs, nk);
    const std::vector<std::vector<int>> cols = {{0}, {1}, {2}, {3}, {4}};
    LpResult res = detail::fit_linear_condition(ds, cols, {1, 1, 1, 1, 1});
    if (res.status == LpStatus::Infeasible)
        throw EvaluationError(
            "fit_hr_coefficients: some pair has zero distances but distinct images "
            "(not-contractive evidence)");
    if (res.status != LpStatus::Optimal)
        throw EvaluationError("fit_hr_coefficients: LP did not reach an optimum");
    return HRCoefficients{res.x[0], res.x[1], res.x[2], res.x[3], res.x[4]};
}

struct ClassifyOptions {
    NormKind norm_kind = NormKind::Euclidean;
    /// Lattice step for the Gregus-type (a, c) search.
    double gregus_step = 0.01;
};

/// Every condition kind whose best-found coefficients certify the sampled
/// pairs. Membership is by fit (LP for the linear kinds, three-case cover
/// for Zamfirescu, lattice search for the Gregus-type kinds).
inline std::vector<ContractionCertificate> classify(const RandomOperator& T,
                                                    const OmegaSample& omega,
                                                    const PairSample& pairs,
                                                    const ClassifyOptions& opt = {}) {
    if (pairs.empty()) throw ValidationError("classify: empty pair sample");
    const NormKind nk = opt.norm_kind;
    const auto ds = detail::all_pair_distances(T, omega, pairs, nk);
    std::vector<ContractionCertificate> out;

    auto emit = [&](ConditionKind kind, const ConditionCoefficients& coeffs) {
        try {
            ContractionCertificate cert = check_condition(T, omega, kind, coeffs, pairs, nk);
            if (cert.margin >= kPassMargin) out.push_back(std::move(cert));
        } catch (const InfeasibleCoefficientsError&) {
            // best fit is infeasible for this kind: not a member
        }
    };

    struct LinearKind {
        ConditionKind kind;
        std::vector<std::vector<int>> cols;
        std::vector<double> weights;
    };
    const std::vector<LinearKind> linear_kinds = {
        {ConditionKind::Banach, {{0}}, {1}},
        {ConditionKind::Kannan, {{1}, {2}}, {1, 1}},
        {ConditionKind::Reich, {{0}, {1}, {2}}, {1, 1, 1}},
        {ConditionKind::Ciric, {{0}, {1}, {2}, {3, 4}}, {1, 1, 1, 2}},
        {ConditionKind::Chatterjea, {{3}, {4}}, {1, 1}},
        {ConditionKind::HardyRogers, {{0}, {1}, {2}, {3}, {4}}, {1, 1, 1, 1, 1}},
    };
    for (const auto& lk : linear_kinds) {
        LpResult res;
        try {
            res = detail::fit_linear_condition(ds, lk.cols, lk.weights);
        } catch (const DegenerateSampleError&) {
            throw;
        }
        if (res.status != LpStatus::Optimal) continue;
        HRCoefficients h;
        auto set = [&](std::size_t j, double v) {
            for (int s : lk.cols[j]) {
                double* slots[5] = {&h.a1, &h.a2, &h.a3, &h.a4, &h.a5};
                *slots[static_cast<std::size_t>(s)] = v;
            }
        };
        for (std::size_t j = 0; j < lk.cols.size(); ++j) set(j, res.x[j]);
        emit(lk.kind, h);
    }

    // Zamfirescu: cover each pair by its cheapest case, then read the
    // per-case maxima back as coefficients.
    {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        bool coverable = true;
        const double amax = 1.0 - kFeasibilityGap;
        const double gmax = 0.5 - kFeasibilityGap;
        for (const auto& d : ds) {
            if (d.lhs <= 1e-14) continue;
            const double r1 = d.d_xy > 1e-14 ? d.lhs / d.d_xy
                                             : std::numeric_limits<double>::infinity();
            const double s2 = d.d_xTx + d.d_yTy;
            const double r2 = s2 > 1e-14 ? d.lhs / s2 : std::numeric_limits<double>::infinity();
            const double s3 = d.d_xTy + d.d_yTx;
            const double r3 = s3 > 1e-14 ? d.lhs / s3 : std::numeric_limits<double>::infinity();
            // Normalize by each case's admissible range and take the cheapest.
            const double n1 = r1 / amax, n2 = r2 / amax, n3 = r3 / gmax;
            if (n1 <= n2 && n1 <= n3 && r1 <= amax) {
                alpha = std::max(alpha, r1);
            } else if (n2 <= n3 && r2 <= amax) {
                beta = std::max(beta, r2);
            } else if (r3 <= gmax) {
                gamma = std::max(gamma, r3);
            } else {
                coverable = false;
                break;
            }
        }
        if (coverable) emit(ConditionKind::Zamfirescu, HRCoefficients{alpha, beta, beta, gamma, gamma});
    }

    // Gregus-type kinds: lattice over a (b = 1 - a) and c up to the bound.
    for (ConditionKind kind : {ConditionKind::GregusCiric, ConditionKind::SahaGanguly}) {
        const GregusVariant variant = kind == ConditionKind::GregusCiric
                                          ? GregusVariant::BoundOverEightMinusB
                                          : GregusVariant::BoundOverEightMinusA;
        GregusParams best;
        double best_margin = -std::numeric_limits<double>::infinity();
        const double step = opt.gregus_step;
        for (double a = step; a < 1.0 - step / 2; a += step) {
            GregusParams g{a, 1.0 - a, 0.0, variant};
            const double cb = g.c_bound();
            for (double c = 0.0; c <= cb + 1e-12; c += step) {
                g.c = std::min(c, cb);
                double margin = std::numeric_limits<double>::infinity();
                for (const auto& d : ds) margin = std::min(margin, pair_slack(kind, g, d));
                if (margin > best_margin) {
                    best_margin = margin;
                    best = g;
                }
            }
        }
        if (best_margin >= kPassMargin) emit(kind, best);
    }
    return out;
}

}  // namespace rfp

#endif
