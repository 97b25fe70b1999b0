#include <doctest.h>

#include <cmath>

#include "rfp/presets.hpp"
#include "rfp/randomfp.hpp"

using namespace rfp;

TEST_CASE("linear family contracts to zero: census 1, meansq 0") {
    // T(w, x) = a(w) x with a in [0.1, 0.9): fixed point is 0 for every w.
    RandomOperator T;
    T.dim = 1;
    T.eval = [](const OmegaSample& omega, const Vector& x) {
        OmegaStream rng(omega);
        return Vector{(0.1 + 0.8 * rng.uniform()) * x[0]};
    };
    RandomCoefficientSpec coeffs;
    coeffs.generator = [](const OmegaSample& omega) {
        OmegaStream rng(omega);
        return HRCoefficients{0.1 + 0.8 * rng.uniform(), 0, 0, 0, 0};
    };
    ProbabilitySpace space(42, 100);
    PicardConfig cfg;
    cfg.tol = 1e-10;
    const auto summary = solve_random_fixed_point(T, space, coeffs, {5.0}, cfg);
    CHECK(summary.residual_census == 1.0);
    CHECK(summary.meansq_norm <= 1e-9);
    CHECK(summary.infeasible_fraction == 0.0);
    CHECK(summary.n_diverged == 0);
}

TEST_CASE("affine family matches the closed-form oracle per omega") {
    const OperatorFamily fam = make_operator_preset("affine_scalar", {});
    ProbabilitySpace space(7, 200);
    PicardConfig cfg;
    cfg.tol = 1e-12;
    const auto summary = solve_random_fixed_point(fam.op, space, fam.coeffs, fam.x0, cfg);
    // Closed form b(w)/(1 - a(w)) on the identical outcome samples.
    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < space.n_samples; ++i) {
        const OmegaSample omega = sample_omega(space, i);
        OmegaStream rng(omega);
        const double a = rng.uniform(0.1, 0.9);
        const double b = rng.uniform(-1.0, 1.0);
        const double star = b / (1.0 - a);
        CHECK(summary.per_omega[i].second.fixed_point[0] ==
              doctest::Approx(star).epsilon(1e-9));
        sum_sq += star * star;
    }
    CHECK(summary.meansq_norm ==
          doctest::Approx(std::sqrt(sum_sq / static_cast<double>(space.n_samples)))
              .epsilon(1e-10));
    CHECK(summary.residual_census == 1.0);
}

TEST_CASE("singleton space degenerates to one report") {
    const OperatorFamily fam = make_operator_preset("affine_scalar", {});
    ProbabilitySpace space(3, 1);
    const auto summary = solve_random_fixed_point(fam.op, space, fam.coeffs, fam.x0, {});
    CHECK(summary.per_omega.size() == 1);
    CHECK(summary.residual_census == 1.0);
}

TEST_CASE("sequential and parallel runs produce identical summaries") {
    const OperatorFamily fam = make_operator_preset("affine_matrix", {{"dim", 3}});
    ProbabilitySpace space(11, 64);
    PicardConfig cfg;
    const auto seq = solve_random_fixed_point(fam.op, space, fam.coeffs, fam.x0, cfg,
                                              {.threads = 1});
    const auto par = solve_random_fixed_point(fam.op, space, fam.coeffs, fam.x0, cfg,
                                              {.threads = 8});
    REQUIRE(seq.per_omega.size() == par.per_omega.size());
    for (std::size_t i = 0; i < seq.per_omega.size(); ++i) {
        CHECK(seq.per_omega[i].second.fixed_point == par.per_omega[i].second.fixed_point);
        CHECK(seq.per_omega[i].second.iterations == par.per_omega[i].second.iterations);
    }
    CHECK(seq.meansq_norm == par.meansq_norm);
    CHECK(seq.residual_census == par.residual_census);
}

TEST_CASE("infeasible coefficient draws are counted, not fatal") {
    RandomOperator T;
    T.dim = 1;
    T.eval = [](const OmegaSample&, const Vector& x) { return Vector{0.5 * x[0]}; };
    RandomCoefficientSpec coeffs;
    // Half the outcomes declare an infeasible sum.
    coeffs.generator = [](const OmegaSample& omega) {
        return omega.index % 2 == 0 ? HRCoefficients{0.5, 0, 0, 0, 0}
                                    : HRCoefficients{1.5, 0, 0, 0, 0};
    };
    ProbabilitySpace space(5, 10);
    const auto summary = solve_random_fixed_point(T, space, coeffs, {1.0}, {});
    CHECK(summary.infeasible_fraction == doctest::Approx(0.5));
    CHECK(summary.residual_census == 1.0);  // map still contracts
}

TEST_CASE("monte carlo consistency of meansq on the affine family") {
    // Doubling the sample count moves the estimate by O(n^-1/2); check the
    // half-sample estimator stays within 3 sigma of the full one.
    const OperatorFamily fam = make_operator_preset("affine_scalar", {{"a_min", 0.2},
                                                                      {"a_max", 0.6}});
    ProbabilitySpace big(17, 4096);
    PicardConfig cfg;
    cfg.tol = 1e-12;
    const auto full = solve_random_fixed_point(fam.op, big, fam.coeffs, fam.x0, cfg);
    // Per-omega squared norms for mean/variance of the census statistic.
    std::vector<double> sq;
    for (const auto& [omega, rep] : full.per_omega) sq.push_back(rep.fixed_point[0] *
                                                                 rep.fixed_point[0]);
    double mean = 0.0;
    for (double v : sq) mean += v;
    mean /= static_cast<double>(sq.size());
    double var = 0.0;
    for (double v : sq) var += (v - mean) * (v - mean);
    var /= static_cast<double>(sq.size() - 1);
    double half_mean = 0.0;
    for (std::size_t i = 0; i < sq.size() / 2; ++i) half_mean += sq[i];
    half_mean /= static_cast<double>(sq.size() / 2);
    const double sigma = std::sqrt(var / static_cast<double>(sq.size() / 2));
    CHECK(std::abs(half_mean - mean) <= 3.0 * sigma);
}

TEST_CASE("uniqueness probe on the affine family") {
    const OperatorFamily fam = make_operator_preset("affine_scalar", {});
    ProbabilitySpace space(23, 50);
    PicardConfig cfg;
    cfg.tol = 1e-9;
    const auto probe =
        uniqueness_probe(fam.op, space, fam.coeffs, {{-10.0}, {0.0}, {10.0}}, cfg);
    CHECK(probe.certified);
    CHECK(probe.max_spread <= 2.0 * cfg.tol);
}

TEST_CASE("uniqueness probe on constant and identity maps") {
    const OperatorFamily cmap = make_operator_preset("constant", {});
    ProbabilitySpace space(29, 20);
    PicardConfig cfg;
    const auto probe = uniqueness_probe(cmap.op, space, cmap.coeffs, {{-3.0}, {4.0}}, cfg);
    CHECK(probe.certified);
    CHECK(probe.max_spread <= cfg.tol);

    const OperatorFamily id = make_operator_preset("identity", {});
    PicardConfig small;
    small.max_iter = 30;
    const auto bad = uniqueness_probe(id.op, space, id.coeffs, {{0.0}, {1.0}}, small);
    CHECK_FALSE(bad.certified);

    CHECK_THROWS_AS(uniqueness_probe(id.op, space, id.coeffs, {{0.0}}, small), ValidationError);
}
