#ifndef RFP_HAMMERSTEIN_HPP
#define RFP_HAMMERSTEIN_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "rfp/contraction.hpp"
#include "rfp/quadrature.hpp"
#include "rfp/randomfp.hpp"

namespace rfp {

using KernelFn = std::function<double(const OmegaSample&, double, double)>;
using FreeTermFn = std::function<double(const OmegaSample&, double)>;
using NonlinearityFn = std::function<double(double, double)>;

/// Discretized stochastic Hammerstein equation
///   x(t) = h(t; omega) + integral over S of k(t, s; omega) f(s, x(s)) ds
/// on the quadrature grid, with the declared coefficients of the
/// nonlinearity's Hardy-Rogers-type bound and the invariant-ball radius rho.
struct HammersteinProblem {
    QuadratureGrid grid;
    KernelFn kernel;
    FreeTermFn free_term;
    NonlinearityFn nonlinearity;
    double rho = 1.0;
    HRCoefficients f_coeffs;
    /// D-norm on node-value vectors; Sup realizes the BC norm.
    NormKind norm_kind = NormKind::Sup;

    void validate() const {
        grid.validate();
        if (!(rho > 0.0)) throw ValidationError("HammersteinProblem: rho must be positive");
        if (!f_coeffs.feasible_hr())
            throw InfeasibleCoefficientsError("HammersteinProblem: f_coeffs sum must be < 1");
        if (!kernel || !free_term || !nonlinearity)
            throw ValidationError("HammersteinProblem: kernel/free_term/nonlinearity required");
    }
};

using Matrix = std::vector<std::vector<double>>;

/// Nystrom matrix K[i][j] = k(t_i, t_j; omega) * w_j, so K applied to node
/// values approximates the integral operator at the rule's order.
inline Matrix discretize_operator(const HammersteinProblem& p, const OmegaSample& omega) {
    p.grid.validate();
    const std::size_t m = p.grid.size();
    Matrix K(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double v = p.kernel(omega, p.grid.nodes[i], p.grid.nodes[j]);
            if (!std::isfinite(v)) throw EvaluationError("discretize_operator: non-finite kernel");
            K[i][j] = v * p.grid.weights[j];
        }
    }
    return K;
}

inline Vector mat_vec(const Matrix& K, const Vector& x) {
    if (K.empty() || K[0].size() != x.size()) throw ShapeError("apply: shape mismatch");
    Vector y(K.size(), 0.0);
    for (std::size_t i = 0; i < K.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += K[i][j] * x[j];
    return y;
}

/// Induced norm l(omega) of the discretized integral operator: max absolute
/// row sum for the sup norm, largest singular value in the weighted inner
/// product (by power iteration, relative tolerance 1e-8) for weighted L2.
inline double operator_norm(const Matrix& K, NormKind kind, const Vector& weights = {}) {
    if (K.empty()) throw ShapeError("operator_norm: empty matrix");
    const std::size_t m = K.size();
    if (kind == NormKind::Sup || kind == NormKind::Euclidean) {
        // Euclidean on plain vectors is not grid-aware; callers use Sup or
        // WeightedL2 here. Treat Euclidean as unweighted L2.
        if (kind == NormKind::Sup) {
            double best = 0.0;
            for (const auto& row : K) {
                double s = 0.0;
                for (double v : row) s += std::abs(v);
                best = std::max(best, s);
            }
            return best;
        }
    }
    Vector w = weights;
    if (kind == NormKind::Euclidean || w.empty()) w.assign(m, 1.0);
    if (w.size() != m) throw ShapeError("operator_norm: weight size mismatch");
    // Power iteration on B = W^-1 K^T W K, self-adjoint in the W-inner
    // product; its largest eigenvalue is l^2.
    Vector x(m, 1.0);
    {
        const double nx = norm(x, NormKind::WeightedL2, w);
        for (double& v : x) v /= nx;
    }
    double sigma = 0.0;
    for (int it = 0; it < 10000; ++it) {
        const Vector kx = mat_vec(K, x);
        const double next = norm(kx, NormKind::WeightedL2, w);
        Vector z(m, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < m; ++i) z[j] += K[i][j] * w[i] * kx[i];
            z[j] /= w[j];
        }
        const double nz = norm(z, NormKind::WeightedL2, w);
        if (nz == 0.0) return 0.0;
        for (double& v : z) v /= nz;
        x = std::move(z);
        if (it > 2 && std::abs(next - sigma) <= 1e-8 * std::max(next, 1e-300)) return next;
        sigma = next;
    }
    return sigma;
}

struct FeasibilityReport {
    double l_omega = 0.0;
    double lhs = 0.0;
    double rhs_paper = 0.0;
    double rhs_derived = 0.0;
    bool feasible_paper = false;
    bool feasible_derived = false;
};

inline Vector free_term_values(const HammersteinProblem& p, const OmegaSample& omega) {
    Vector h(p.grid.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = p.free_term(omega, p.grid.nodes[i]);
    return h;
}

/// The invariant-ball feasibility inequality, in both printed and
/// proof-derived forms. The printed right-hand side charges the full
/// operator norm, the derived one only l * (a1 + a2 + a4); the printed one
/// is therefore the stronger requirement.
inline FeasibilityReport check_feasibility(const HammersteinProblem& p, const OmegaSample& omega) {
    p.validate();
    const auto& a = p.f_coeffs;
    const double denom = 1.0 - a.a2 - a.a5;
    if (denom <= 0.0)
        throw InfeasibleCoefficientsError("check_feasibility: need a2 + a5 < 1");

    FeasibilityReport rep;
    const Matrix K = discretize_operator(p, omega);
    rep.l_omega = operator_norm(K, p.norm_kind, p.grid.weights);

    const Vector h = free_term_values(p, omega);
    Vector f0(p.grid.size());
    for (std::size_t i = 0; i < f0.size(); ++i) f0[i] = p.nonlinearity(p.grid.nodes[i], 0.0);
    const double h_norm = norm(h, p.norm_kind, p.grid.weights);
    const double f0_norm = norm(f0, p.norm_kind, p.grid.weights);

    rep.lhs = h_norm + rep.l_omega * f0_norm * (1.0 + a.a3 + a.a4) / denom;
    rep.rhs_paper = p.rho * (1.0 - rep.l_omega / denom);
    rep.rhs_derived = p.rho * (1.0 - rep.l_omega * (a.a1 + a.a2 + a.a4) / denom);
    rep.feasible_paper = rep.lhs <= rep.rhs_paper;
    rep.feasible_derived = rep.lhs <= rep.rhs_derived;
    return rep;
}

struct HammersteinSolveOptions {
    /// Skip the feasibility gate (iteration still runs, bounds uncertified).
    bool force = false;
    unsigned threads = 1;
};

struct HammersteinSummary {
    RandomSolveSummary solve;
    std::vector<FeasibilityReport> feasibility;
};

/// Per-omega fixed-point iteration x <- h + K f(., x) from x0 = h. Under a
/// passing derived-variant feasibility report every iterate must stay in
/// the ball of radius rho; leaving it raises InvarianceViolationError.
inline HammersteinSummary solve_hammerstein(const HammersteinProblem& p,
                                            const ProbabilitySpace& space,
                                            const PicardConfig& cfg_in,
                                            const HammersteinSolveOptions& opt = {}) {
    p.validate();
    PicardConfig cfg = cfg_in;
    cfg.norm_kind = p.norm_kind;
    cfg.weights = p.grid.weights;
    cfg.validate();

    HammersteinSummary out;
    out.solve.per_omega.resize(space.n_samples);
    out.feasibility.resize(space.n_samples);

    detail::parallel_for_indices(space.n_samples, opt.threads, [&](std::size_t idx) {
        const OmegaSample omega = sample_omega(space, idx);
        const Matrix K = discretize_operator(p, omega);
        const double l = operator_norm(K, p.norm_kind, p.grid.weights);
        FeasibilityReport fr = check_feasibility(p, omega);
        fr.l_omega = l;
        out.feasibility[idx] = fr;
        if (!fr.feasible_derived && !opt.force)
            throw FeasibilityError("solve_hammerstein: feasibility inequality fails (use force)");

        const Vector h = free_term_values(p, omega);
        RandomOperator U;
        U.dim = p.grid.size();
        U.eval = [&p, &K, &h](const OmegaSample&, const Vector& x) {
            Vector fx(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) fx[i] = p.nonlinearity(p.grid.nodes[i], x[i]);
            Vector y = mat_vec(K, fx);
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += h[i];
            return y;
        };

        // Contraction transfer from the proof's final chain: the discrete
        // map inherits the f coefficients scaled by l(omega).
        std::optional<HRCoefficients> uc;
        HRCoefficients scaled{l * p.f_coeffs.a1, l * p.f_coeffs.a2, l * p.f_coeffs.a3,
                              l * p.f_coeffs.a4, l * p.f_coeffs.a5};
        if (scaled.feasible_hr()) uc = scaled;

        const bool guard_ball = fr.feasible_derived;
        IterateObserver observer;
        if (guard_ball) {
            observer = [&p](const Vector& x, std::size_t) {
                if (norm(x, p.norm_kind, p.grid.weights) > p.rho + 1e-9)
                    throw InvarianceViolationError(
                        "solve_hammerstein: iterate left Q(rho) under a passing feasibility report");
            };
        }
        PicardReport rep;
        try {
            rep = picard_solve(U, omega, h, uc, cfg, observer);
        } catch (const PicardDivergenceError& e) {
            rep = e.partial;
        }
        out.solve.per_omega[idx] = {omega, std::move(rep)};
    });

    const double n = static_cast<double>(space.n_samples);
    double sum_sq = 0.0;
    std::size_t census = 0;
    for (const auto& [omega, rep] : out.solve.per_omega) {
        if (rep.diverged) ++out.solve.n_diverged;
        if (!rep.fixed_point.empty()) {
            const double nm = norm(rep.fixed_point, cfg.norm_kind, cfg.weights);
            sum_sq += nm * nm;
        }
        if (!rep.diverged && rep.residual <= cfg.tol) ++census;
        if (std::isfinite(rep.residual))
            out.solve.max_residual = std::max(out.solve.max_residual, rep.residual);
    }
    out.solve.residual_census = static_cast<double>(census) / n;
    out.solve.meansq_norm = std::sqrt(sum_sq / n);
    return out;
}

}  // namespace rfp

#endif
