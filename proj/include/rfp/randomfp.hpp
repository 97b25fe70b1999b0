#ifndef RFP_RANDOMFP_HPP
#define RFP_RANDOMFP_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "rfp/picard.hpp"

namespace rfp {

/// Per-outcome Hardy-Rogers coefficients. The generator must be a pure
/// function of the outcome; feasibility is checked at use and violations
/// counted rather than assumed away.
struct RandomCoefficientSpec {
    std::function<HRCoefficients(const OmegaSample&)> generator;
};

struct RandomSolveSummary {
    std::vector<std::pair<OmegaSample, PicardReport>> per_omega;
    /// Fraction of outcomes whose solved residual is <= cfg.tol.
    double residual_census = 0.0;
    /// sqrt of the mean of |x*(omega)|^2: the sampled L2(Omega) norm.
    double meansq_norm = 0.0;
    double max_residual = 0.0;
    /// Fraction of outcomes whose generated coefficients were infeasible.
    double infeasible_fraction = 0.0;
    std::size_t n_diverged = 0;
};

namespace detail {

/// Index-parallel map with deterministic output placement: result i depends
/// only on i, so any worker count gives the same summary.
inline void parallel_for_indices(std::size_t n, unsigned threads,
                                 const std::function<void(std::size_t)>& body) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(err_mu);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace detail

struct RandomSolveOptions {
    unsigned threads = 1;
    /// Optional per-outcome start; defaults to the shared x0.
    std::function<Vector(const OmegaSample&)> start_hook;
};

/// Solve T(omega, x) = x at every sampled outcome and aggregate the
/// empirical surrogate of a random fixed point: per-omega witnesses, the
/// residual census, and the sampled mean-square norm.
inline RandomSolveSummary solve_random_fixed_point(const RandomOperator& T,
                                                   const ProbabilitySpace& space,
                                                   const RandomCoefficientSpec& coeffs,
                                                   const Vector& x0, const PicardConfig& cfg,
                                                   const RandomSolveOptions& opt = {}) {
    cfg.validate();
    RandomSolveSummary summary;
    summary.per_omega.resize(space.n_samples);
    std::vector<char> infeasible(space.n_samples, 0);

    detail::parallel_for_indices(space.n_samples, opt.threads, [&](std::size_t i) {
        const OmegaSample omega = sample_omega(space, i);
        std::optional<HRCoefficients> c;
        if (coeffs.generator) {
            HRCoefficients h = coeffs.generator(omega);
            if (h.feasible_hr())
                c = h;
            else
                infeasible[i] = 1;
        }
        const Vector start = opt.start_hook ? opt.start_hook(omega) : x0;
        PicardReport rep;
        try {
            rep = picard_solve(T, omega, start, c, cfg);
        } catch (const PicardDivergenceError& e) {
            rep = e.partial;
        }
        summary.per_omega[i] = {omega, std::move(rep)};
    });

    const double n = static_cast<double>(space.n_samples);
    double sum_sq = 0.0;
    std::size_t census = 0, bad = 0;
    for (const auto& [omega, rep] : summary.per_omega) {
        if (rep.diverged) ++summary.n_diverged;
        if (!rep.fixed_point.empty()) {
            const double nm = norm(rep.fixed_point, cfg.norm_kind, cfg.weights);
            sum_sq += nm * nm;
        }
        if (!rep.diverged && rep.residual <= cfg.tol) ++census;
        if (std::isfinite(rep.residual))
            summary.max_residual = std::max(summary.max_residual, rep.residual);
    }
    for (char f : infeasible) bad += static_cast<std::size_t>(f);
    summary.residual_census = static_cast<double>(census) / n;
    summary.meansq_norm = std::sqrt(sum_sq / n);
    summary.infeasible_fraction = static_cast<double>(bad) / n;
    return summary;
}

struct UniquenessProbe {
    /// Worst over omega of the pairwise distance between fixed points
    /// reached from the different starts.
    double max_spread = 0.0;
    /// False when any solve failed to converge; the spread is then not a
    /// uniqueness witness.
    bool certified = true;
};

inline UniquenessProbe uniqueness_probe(const RandomOperator& T, const ProbabilitySpace& space,
                                        const RandomCoefficientSpec& coeffs,
                                        const std::vector<Vector>& starts,
                                        const PicardConfig& cfg,
                                        const RandomSolveOptions& opt = {}) {
    if (starts.size() < 2) throw ValidationError("uniqueness_probe: need at least 2 starts");
    UniquenessProbe probe;
    std::vector<RandomSolveSummary> runs;
    runs.reserve(starts.size());
    for (const auto& s : starts)
        runs.push_back(solve_random_fixed_point(T, space, coeffs, s, cfg, opt));
    for (std::size_t i = 0; i < space.n_samples; ++i) {
        for (std::size_t a = 0; a < runs.size(); ++a) {
            const auto& ra = runs[a].per_omega[i].second;
            if (!ra.converged || !ra.certified) probe.certified = false;
            for (std::size_t b = a + 1; b < runs.size(); ++b) {
                const auto& rb = runs[b].per_omega[i].second;
                probe.max_spread = std::max(
                    probe.max_spread,
                    distance(ra.fixed_point, rb.fixed_point, cfg.norm_kind, cfg.weights));
            }
        }
    }
    return probe;
}

}  // namespace rfp

#endif
