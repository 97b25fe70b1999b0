#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "rfp/io.hpp"

using namespace rfp;

TEST_CASE("fmt_double round-trips and pins special values") {
    CHECK(fmt_double(0.0) == "0");
    CHECK(fmt_double(1.5) == "1.5");
    CHECK(fmt_double(std::numeric_limits<double>::quiet_NaN()) == "null");
    CHECK(fmt_double(std::numeric_limits<double>::infinity()) == "1e999");
    CHECK(fmt_double(-std::numeric_limits<double>::infinity()) == "-1e999");
    // 17 significant digits round-trip exactly
    const double v = 0.1 + 0.2;
    CHECK(std::strtod(fmt_double(v).c_str(), nullptr) == v);
    const double tiny = 5e-324;
    CHECK(std::strtod(fmt_double(tiny).c_str(), nullptr) == tiny);
}

TEST_CASE("json builders preserve declaration order") {
    const std::string s = JsonObj().field("b", 1.0).field("a", 2.0).field("ok", true).str();
    CHECK(s == "{\"b\":1,\"a\":2,\"ok\":true}");
    CHECK(JsonArr().add(1.0).add(0.5).str() == "[1,0.5]");
    CHECK(JsonObj().field("q", std::string("a\"b")).str() == "{\"q\":\"a\\\"b\"}");
}

TEST_CASE("certificate json has the pinned field order") {
    ContractionCertificate cert;
    cert.kind = ConditionKind::Banach;
    cert.omega = OmegaSample{3, 99};
    cert.coefficients = HRCoefficients{0.5, 0, 0, 0, 0};
    cert.margin = 0.25;
    cert.pairs_checked = 12;
    const std::string s = to_json(cert);
    CHECK(s == "{\"kind\":\"Banach\","
               "\"coefficients\":{\"a1\":0.5,\"a2\":0,\"a3\":0,\"a4\":0,\"a5\":0},"
               "\"margin\":0.25,\"pairs_checked\":12,\"omega_index\":3,"
               "\"gregus_annotation\":false}");

    ContractionCertificate g;
    g.kind = ConditionKind::SahaGanguly;
    g.coefficients = GregusParams{0.4, 0.2, 0.45, GregusVariant::BoundOverEightMinusA};
    const std::string gs = to_json(g);
    CHECK(gs.find("\"c_bound_variant\":\"(4-a)/(8-a)\"") != std::string::npos);
}

TEST_CASE("picard report json") {
    PicardReport rep;
    rep.fixed_point = {1.0, 2.0};
    rep.iterations = 7;
    rep.k_bound = 0.5;
    rep.apriori_bound = 0.25;
    rep.aposteriori_bound = 0.125;
    rep.residual = 1e-12;
    rep.converged = true;
    rep.certified = true;
    const std::string s = to_json(rep);
    CHECK(s == "{\"fixed_point\":[1,2],\"iterations\":7,\"k_bound\":0.5,"
               "\"apriori_bound\":0.25,\"aposteriori_bound\":0.125,"
               "\"residual\":9.9999999999999998e-13,\"converged\":true,"
               "\"certified\":true,\"diverged\":false}");
    CHECK(to_json(rep, false).rfind("{\"iterations\":7,", 0) == 0);
}

TEST_CASE("csv writers emit the documented shapes") {
    PicardReport rep;
    rep.step_norms = {1.0, 0.5};
    rep.ratio_estimates = {0.5};
    const std::string steps = step_norms_csv(rep);
    CHECK(steps == "iter,step_norm,ratio\n1,1,\n2,0.5,0.5\n");

    RandomSolveSummary s;
    PicardReport r0;
    r0.fixed_point = {3.0, 4.0};
    r0.residual = 1e-10;
    r0.iterations = 5;
    s.per_omega.push_back({OmegaSample{0, 1}, r0});
    const std::string per = per_omega_csv(s, NormKind::Euclidean);
    CHECK(per == "omega_index,residual,iterations,norm_of_fixed_point\n"
                 "0,1e-10,5,5\n");
}

TEST_CASE("solution csv aggregates node values across omega") {
    HammersteinSummary hs;
    QuadratureGrid grid = trapezoid_grid(3);
    PicardReport a, b;
    a.fixed_point = {0.0, 1.0, 2.0};
    b.fixed_point = {0.0, 3.0, 4.0};
    hs.solve.per_omega.push_back({OmegaSample{0, 1}, a});
    hs.solve.per_omega.push_back({OmegaSample{1, 2}, b});
    const std::string csv = solution_csv(hs, grid, true);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,mean,meansq,omega_0,omega_1");
    std::getline(in, line);
    CHECK(line == "0,0,0,0,0");
    std::getline(in, line);
    // mean (1+3)/2 = 2, meansq sqrt((1+9)/2) = sqrt(5)
    CHECK(line.rfind("0.5,2,2.23606797", 0) == 0);
}

TEST_CASE("write_file fails loudly on an unwritable path") {
    CHECK_THROWS_AS(write_file("/nonexistent-dir-xyz/out.json", "{}"), EvaluationError);
}
