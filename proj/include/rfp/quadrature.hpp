#ifndef RFP_QUADRATURE_HPP
#define RFP_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rfp/errors.hpp"

namespace rfp {

enum class QuadratureRule { Trapezoid, GaussLegendre };

/// Quadrature nodes/weights on S = [0, 1]; the Bochner integral of the
/// continuous problem becomes the weighted sum over these nodes.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadratureRule rule = QuadratureRule::Trapezoid;

    std::size_t size() const { return nodes.size(); }

    void validate() const {
        if (nodes.empty() || nodes.size() != weights.size())
            throw ShapeError("QuadratureGrid: node/weight size mismatch");
        double wsum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!(weights[i] > 0.0)) throw ShapeError("QuadratureGrid: weights must be positive");
            if (i > 0 && !(nodes[i] > nodes[i - 1]))
                throw ShapeError("QuadratureGrid: nodes must be strictly increasing");
            wsum += weights[i];
        }
        if (std::abs(wsum - 1.0) > 1e-12)
            throw ShapeError("QuadratureGrid: weights must sum to |S| = 1");
    }
};

inline QuadratureGrid trapezoid_grid(std::size_t m) {
    if (m < 2) throw ValidationError("trapezoid_grid: need at least 2 nodes");
    QuadratureGrid g;
    g.rule = QuadratureRule::Trapezoid;
    const double h = 1.0 / static_cast<double>(m - 1);
    g.nodes.resize(m);
    g.weights.assign(m, h);
    for (std::size_t i = 0; i < m; ++i) g.nodes[i] = static_cast<double>(i) * h;
    g.weights.front() = h / 2.0;
    g.weights.back() = h / 2.0;
    return g;
}

/// Gauss-Legendre nodes on [0, 1] via Newton refinement of the Chebyshev
/// initial guesses on [-1, 1].
inline QuadratureGrid gauss_legendre_grid(std::size_t m) {
    if (m < 1) throw ValidationError("gauss_legendre_grid: need at least 1 node");
    QuadratureGrid g;
    g.rule = QuadratureRule::GaussLegendre;
    g.nodes.resize(m);
    g.weights.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(m) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence P_m(x) and derivative.
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= m; ++k) {
                const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 -
                                   (static_cast<double>(k) - 1.0) * p0) /
                                  static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // Map [-1, 1] -> [0, 1]; descending cosine gives ascending nodes.
        g.nodes[m - 1 - i] = 0.5 * (x + 1.0);
        g.weights[m - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

inline QuadratureGrid make_grid(QuadratureRule rule, std::size_t m) {
    return rule == QuadratureRule::Trapezoid ? trapezoid_grid(m) : gauss_legendre_grid(m);
}

}  // namespace rfp

#endif
