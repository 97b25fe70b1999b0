#ifndef RFP_SIMPLEX_HPP
#define RFP_SIMPLEX_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "rfp/errors.hpp"

namespace rfp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double value = std::numeric_limits<double>::quiet_NaN();
};

/// Minimize c.x subject to A x >= b, x >= 0.
///
/// Dense two-phase simplex with Bland's rule (deterministic, cycle-free).
/// Intended for small fitting problems: a handful of structural variables
/// and at most a few hundred rows.
inline LpResult lp_minimize_geq(const std::vector<std::vector<double>>& A,
                                const std::vector<double>& b, const std::vector<double>& c) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    if (b.size() != m) throw ShapeError("lp_minimize_geq: A/b row mismatch");
    for (const auto& row : A)
        if (row.size() != n) throw ShapeError("lp_minimize_geq: A/c column mismatch");

    // Standard form: A x - s = b with s >= 0, plus one artificial per row.
    // Rows are pre-negated where b < 0 so artificials start feasible.
    const std::size_t cols = n + m + m;          // structural, surplus, artificial
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(m);

    for (std::size_t i = 0; i < m; ++i) {
        const double sign = (b[i] < 0.0) ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = sign * A[i][j];
        t[i][n + i] = -sign;                     // surplus
        t[i][n + m + i] = 1.0;                   // artificial
        t[i][cols] = sign * b[i];
        basis[i] = n + m + i;
    }

    const double eps = 1e-11;

    auto pivot = [&](std::size_t pr, std::size_t pc) {
        const double pv = t[pr][pc];
        for (double& v : t[pr]) v /= pv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == pr) continue;
            const double f = t[i][pc];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[pr][j];
        }
        basis[pr] = pc;
    };

    auto run = [&](std::size_t limit) -> bool {
        // limit: columns eligible to enter (phase 1 allows all, phase 2
        // excludes artificials).
        for (std::size_t iter = 0; iter < 50000; ++iter) {
            std::size_t pc = cols;
            for (std::size_t j = 0; j < limit; ++j) {
                if (t[m][j] < -eps) { pc = j; break; }  // Bland: first improving column
            }
            if (pc == cols) return true;  // optimal
            // Bland's leaving rule: minimal ratio, ties broken by smallest
            // basis index. Comparisons are exact; fuzzing them reintroduces
            // cycling on degenerate bases.
            std::size_t pr = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][pc] > eps) {
                    const double ratio = t[i][cols] / t[i][pc];
                    if (pr == m || ratio < best || (ratio == best && basis[i] < basis[pr])) {
                        best = ratio;
                        pr = i;
                    }
                }
            }
            if (pr == m) return false;  // unbounded
            pivot(pr, pc);
        }
        throw EvaluationError("lp_minimize_geq: iteration limit hit");
    };

    // Phase 1: minimize the artificial sum.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= cols; ++j) t[m][j] -= t[i][j];
    for (std::size_t i = 0; i < m; ++i) t[m][n + m + i] = 0.0;
    run(cols);
    if (t[m][cols] < -1e-7) return {LpStatus::Infeasible, {}, 0.0};

    // Drive leftover artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n + m) {
            for (std::size_t j = 0; j < n + m; ++j) {
                if (std::abs(t[i][j]) > eps) { pivot(i, j); break; }
            }
        }
    }

    // Phase 2 objective.
    for (std::size_t j = 0; j <= cols; ++j) t[m][j] = 0.0;
    for (std::size_t j = 0; j < n; ++j) t[m][j] = c[j];
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) {
            const double f = t[m][basis[i]];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[m][j] -= f * t[i][j];
        }
    }
    if (!run(n + m)) return {LpStatus::Unbounded, {}, 0.0};

    LpResult res;
    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][cols];
    res.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
    return res;
}

}  // namespace rfp

#endif
