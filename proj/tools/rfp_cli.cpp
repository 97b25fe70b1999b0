// Command-line driver: ingests a JSON problem document, runs the requested
// subcommand, and writes summary.json plus CSV tables into the output
// directory. Outputs are byte-deterministic for a fixed config, regardless
// of worker count.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfp/expr.hpp"
#include "rfp/hammerstein.hpp"
#include "rfp/io.hpp"
#include "rfp/presets.hpp"
#include "rfp/randomfp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitInfeasible = 4;

struct Cli {
    std::string input;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<std::size_t> grid_m;
    std::string norm;
    bool force = false;
    unsigned threads = 1;
    bool per_omega_columns = false;
};

json load_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw rfp::ValidationError("cannot open input file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw rfp::ValidationError(std::string("malformed JSON: ") + e.what());
    }
    return doc;
}

rfp::ParamMap params_of(const json& node) {
    rfp::ParamMap p;
    if (node.contains("params"))
        for (const auto& [k, v] : node.at("params").items()) p[k] = v.get<double>();
    return p;
}

rfp::NormKind parse_norm(const std::string& s, rfp::NormKind fallback) {
    if (s.empty()) return fallback;
    if (s == "sup") return rfp::NormKind::Sup;
    if (s == "l2") return rfp::NormKind::Euclidean;
    throw rfp::ValidationError("unknown norm '" + s + "' (expected sup or l2)");
}

struct CommonConfig {
    std::uint64_t seed = 42;
    std::uint64_t n_samples = 1;
    rfp::PicardConfig picard;
};

CommonConfig common_config(const json& doc, const Cli& cli) {
    CommonConfig c;
    c.seed = cli.seed.value_or(doc.value("seed", 42ULL));
    c.n_samples = cli.samples.value_or(doc.value("n_samples", 1ULL));
    c.picard.tol = cli.tol.value_or(doc.value("tol", 1e-9));
    c.picard.max_iter = cli.max_iter.value_or(doc.value("max_iter", std::size_t{10000}));
    c.picard.norm_kind = parse_norm(cli.norm.empty() ? doc.value("norm", "") : cli.norm,
                                    rfp::NormKind::Euclidean);
    return c;
}

rfp::OperatorFamily operator_of(const json& doc) {
    if (!doc.contains("operator")) throw rfp::ValidationError("missing 'operator' object");
    const json& op = doc.at("operator");
    if (!op.contains("preset")) throw rfp::ValidationError("operator needs a 'preset' name");
    return rfp::make_operator_preset(op.at("preset").get<std::string>(), params_of(op));
}

/// Deterministic pair sample for the contraction subcommands: uniform in
/// the box [-radius, radius]^dim, drawn from a dedicated substream of omega.
rfp::PairSample sample_pairs(const rfp::OmegaSample& omega, std::size_t dim, std::size_t count,
                             double radius) {
    rfp::OmegaStream rng = rfp::tagged_stream(omega, 21);
    rfp::PairSample pairs;
    pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        rfp::Vector x(dim), y(dim);
        for (double& v : x) v = rng.uniform(-radius, radius);
        for (double& v : y) v = rng.uniform(-radius, radius);
        pairs.emplace_back(std::move(x), std::move(y));
    }
    return pairs;
}

rfp::ConditionKind parse_kind(const std::string& s) {
    using K = rfp::ConditionKind;
    for (K k : {K::Banach, K::Kannan, K::Reich, K::Ciric, K::Chatterjea, K::Zamfirescu,
                K::HardyRogers, K::GregusCiric, K::SahaGanguly})
        if (s == rfp::to_string(k)) return k;
    throw rfp::ValidationError("unknown condition kind '" + s + "'");
}

rfp::ConditionCoefficients parse_coefficients(rfp::ConditionKind kind, const json& c) {
    if (kind == rfp::ConditionKind::GregusCiric || kind == rfp::ConditionKind::SahaGanguly) {
        rfp::GregusParams g;
        g.a = c.value("a", 0.0);
        g.b = c.value("b", 1.0 - g.a);
        g.c = c.value("c", 0.0);
        g.variant = kind == rfp::ConditionKind::GregusCiric
                        ? rfp::GregusVariant::BoundOverEightMinusB
                        : rfp::GregusVariant::BoundOverEightMinusA;
        return g;
    }
    rfp::HRCoefficients h;
    h.a1 = c.value("a1", 0.0);
    h.a2 = c.value("a2", 0.0);
    h.a3 = c.value("a3", 0.0);
    h.a4 = c.value("a4", 0.0);
    h.a5 = c.value("a5", 0.0);
    return h;
}

rfp::HammersteinProblem hammerstein_of(const json& doc, const Cli& cli) {
    rfp::HammersteinProblem p;
    const json& grid = doc.at("grid");
    const std::string rule = grid.value("rule", "trapezoid");
    const std::size_t m = cli.grid_m.value_or(grid.value("m", std::size_t{65}));
    p.grid = rfp::make_grid(rule == "gauss-legendre" ? rfp::QuadratureRule::GaussLegendre
                                                     : rfp::QuadratureRule::Trapezoid,
                            m);

    auto kernel_of = [](const json& node) -> rfp::KernelFn {
        if (node.contains("preset"))
            return rfp::make_kernel_preset(node.at("preset").get<std::string>(), params_of(node));
        rfp::Expr e = rfp::Expr::parse(node.at("expr").get<std::string>());
        return [e](const rfp::OmegaSample&, double t, double s) {
            return e.eval({.t = t, .s = s});
        };
    };
    auto free_term_of = [](const json& node) -> rfp::FreeTermFn {
        if (node.contains("preset"))
            return rfp::make_free_term_preset(node.at("preset").get<std::string>(),
                                              params_of(node));
        rfp::Expr e = rfp::Expr::parse(node.at("expr").get<std::string>());
        return [e](const rfp::OmegaSample&, double t) { return e.eval({.t = t}); };
    };
    auto nonlinearity_of = [](const json& node) -> rfp::NonlinearityFn {
        if (node.contains("preset"))
            return rfp::make_nonlinearity_preset(node.at("preset").get<std::string>(),
                                                 params_of(node));
        rfp::Expr e = rfp::Expr::parse(node.at("expr").get<std::string>());
        return [e](double t, double x) { return e.eval({.t = t, .x = x}); };
    };
    p.kernel = kernel_of(doc.at("kernel"));
    p.free_term = free_term_of(doc.at("free_term"));
    p.nonlinearity = nonlinearity_of(doc.at("nonlinearity"));
    p.rho = doc.value("rho", 1.0);
    const auto& fc = doc.at("f_coeffs");
    if (!fc.is_array() || fc.size() != 5)
        throw rfp::ValidationError("f_coeffs must be an array of 5 numbers");
    p.f_coeffs = {fc[0].get<double>(), fc[1].get<double>(), fc[2].get<double>(),
                  fc[3].get<double>(), fc[4].get<double>()};
    p.norm_kind = parse_norm(cli.norm.empty() ? doc.value("norm", "") : cli.norm,
                             rfp::NormKind::Sup);
    if (p.norm_kind == rfp::NormKind::Euclidean) p.norm_kind = rfp::NormKind::WeightedL2;
    return p;
}

void emit(const Cli& cli, const std::string& name, const std::string& content) {
    fs::create_directories(cli.out_dir);
    rfp::write_file((fs::path(cli.out_dir) / name).string(), content);
}

int run_solve(const json& doc, const Cli& cli) {
    const CommonConfig c = common_config(doc, cli);
    rfp::OperatorFamily fam = operator_of(doc);
    rfp::ProbabilitySpace space(c.seed, c.n_samples);
    rfp::RandomSolveOptions opt;
    opt.threads = cli.threads;
    const rfp::RandomSolveSummary summary =
        rfp::solve_random_fixed_point(fam.op, space, fam.coeffs, fam.x0, c.picard, opt);

    rfp::JsonObj o;
    o.field("subcommand", std::string("solve"))
        .field("seed", c.seed)
        .field("n_samples", c.n_samples)
        .field("tol", c.picard.tol)
        .raw("summary", rfp::to_json(summary));
    emit(cli, "summary.json", o.str() + "\n");
    emit(cli, "per_omega.csv", rfp::per_omega_csv(summary, c.picard.norm_kind));
    if (!summary.per_omega.empty())
        emit(cli, "steps_omega0.csv", rfp::step_norms_csv(summary.per_omega.front().second));
    return summary.n_diverged > 0 ? kExitDivergence : kExitOk;
}

int run_check(const json& doc, const Cli& cli) {
    const CommonConfig c = common_config(doc, cli);
    rfp::OperatorFamily fam = operator_of(doc);
    rfp::ProbabilitySpace space(c.seed, std::max<std::uint64_t>(1, c.n_samples));
    const json& cond = doc.at("condition");
    const rfp::ConditionKind kind = parse_kind(cond.at("kind").get<std::string>());
    const rfp::ConditionCoefficients coeffs =
        parse_coefficients(kind, cond.value("coefficients", json::object()));
    const json pairs_cfg = doc.value("pairs", json::object());
    const std::size_t count = pairs_cfg.value("count", std::size_t{50});
    const double radius = pairs_cfg.value("radius", 2.0);

    rfp::JsonArr certs;
    for (std::uint64_t i = 0; i < space.n_samples; ++i) {
        const rfp::OmegaSample omega = rfp::sample_omega(space, i);
        const auto cert = rfp::check_condition(fam.op, omega, kind, coeffs,
                                               sample_pairs(omega, fam.op.dim, count, radius),
                                               c.picard.norm_kind);
        certs.raw(rfp::to_json(cert));
    }
    rfp::JsonObj o;
    o.field("subcommand", std::string("check-contraction"))
        .field("seed", c.seed)
        .raw("certificates", certs.str());
    emit(cli, "summary.json", o.str() + "\n");
    return kExitOk;
}

int run_classify(const json& doc, const Cli& cli) {
    const CommonConfig c = common_config(doc, cli);
    rfp::OperatorFamily fam = operator_of(doc);
    rfp::ProbabilitySpace space(c.seed, std::max<std::uint64_t>(1, c.n_samples));
    const json pairs_cfg = doc.value("pairs", json::object());
    const std::size_t count = pairs_cfg.value("count", std::size_t{50});
    const double radius = pairs_cfg.value("radius", 2.0);

    rfp::JsonArr per_omega;
    for (std::uint64_t i = 0; i < space.n_samples; ++i) {
        const rfp::OmegaSample omega = rfp::sample_omega(space, i);
        rfp::ClassifyOptions copt;
        copt.norm_kind = c.picard.norm_kind;
        const auto certs = rfp::classify(fam.op, omega,
                                         sample_pairs(omega, fam.op.dim, count, radius), copt);
        rfp::JsonArr kinds, details;
        for (const auto& cert : certs) {
            kinds.raw('"' + std::string(rfp::to_string(cert.kind)) + '"');
            details.raw(rfp::to_json(cert));
        }
        per_omega.raw(rfp::JsonObj()
                          .field("omega_index", omega.index)
                          .raw("kinds", kinds.str())
                          .raw("certificates", details.str())
                          .str());
    }
    rfp::JsonObj o;
    o.field("subcommand", std::string("classify")).field("seed", c.seed).raw("per_omega",
                                                                             per_omega.str());
    emit(cli, "summary.json", o.str() + "\n");
    return kExitOk;
}

int run_feasibility(const json& doc, const Cli& cli) {
    const CommonConfig c = common_config(doc, cli);
    const rfp::HammersteinProblem p = hammerstein_of(doc, cli);
    rfp::ProbabilitySpace space(c.seed, std::max<std::uint64_t>(1, c.n_samples));
    bool any_paper = false, any_derived = false;
    rfp::JsonArr reports;
    for (std::uint64_t i = 0; i < space.n_samples; ++i) {
        const auto rep = rfp::check_feasibility(p, rfp::sample_omega(space, i));
        any_paper = any_paper || rep.feasible_paper;
        any_derived = any_derived || rep.feasible_derived;
        reports.raw(rfp::to_json(rep));
    }
    rfp::JsonObj o;
    o.field("subcommand", std::string("feasibility"))
        .field("seed", c.seed)
        .raw("reports", reports.str());
    emit(cli, "summary.json", o.str() + "\n");
    return (any_paper || any_derived) ? kExitOk : kExitInfeasible;
}

int run_hammerstein(const json& doc, const Cli& cli) {
    const CommonConfig c = common_config(doc, cli);
    const rfp::HammersteinProblem p = hammerstein_of(doc, cli);
    rfp::ProbabilitySpace space(c.seed, std::max<std::uint64_t>(1, c.n_samples));
    rfp::HammersteinSolveOptions opt;
    opt.force = cli.force;
    opt.threads = cli.threads;
    rfp::PicardConfig cfg = c.picard;
    const rfp::HammersteinSummary summary = rfp::solve_hammerstein(p, space, cfg, opt);

    rfp::JsonArr feas;
    for (const auto& rep : summary.feasibility) feas.raw(rfp::to_json(rep));
    rfp::JsonObj o;
    o.field("subcommand", std::string("hammerstein"))
        .field("seed", c.seed)
        .field("grid_m", p.grid.size())
        .raw("summary", rfp::to_json(summary.solve))
        .raw("feasibility", feas.str());
    emit(cli, "summary.json", o.str() + "\n");
    emit(cli, "solution.csv", rfp::solution_csv(summary, p.grid, cli.per_omega_columns));
    emit(cli, "per_omega.csv", rfp::per_omega_csv(summary.solve, p.norm_kind, p.grid.weights));
    return summary.solve.n_diverged > 0 ? kExitDivergence : kExitOk;
}

int run_bench(const json& doc, const Cli& cli) {
    const CommonConfig c = common_config(doc, cli);
    rfp::OperatorFamily fam = operator_of(doc);
    rfp::ProbabilitySpace space(c.seed, c.n_samples);
    const auto t0 = std::chrono::steady_clock::now();
    const auto summary =
        rfp::solve_random_fixed_point(fam.op, space, fam.coeffs, fam.x0, c.picard,
                                      {.threads = cli.threads});
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rfp::JsonObj o;
    o.field("subcommand", std::string("bench"))
        .field("n_samples", c.n_samples)
        .field("elapsed_ms", ms)
        .raw("summary", rfp::to_json(summary));
    emit(cli, "summary.json", o.str() + "\n");
    std::cout << "solved " << c.n_samples << " outcomes in " << ms << " ms\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random fixed points of contractive random operators"};
    app.require_subcommand(1);
    Cli cli;

    std::string subname;
    for (const char* name :
         {"solve", "check-contraction", "classify", "feasibility", "hammerstein", "bench"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--input", cli.input, "problem JSON document")->required();
        sub->add_option("--out", cli.out_dir, "output directory");
        sub->add_option("--seed", cli.seed, "master seed override");
        sub->add_option("--samples", cli.samples, "n_samples override");
        sub->add_option("--tol", cli.tol, "tolerance override");
        sub->add_option("--max-iter", cli.max_iter, "max iterations override");
        sub->add_option("--grid", cli.grid_m, "quadrature node count override");
        sub->add_option("--norm", cli.norm, "norm kind: sup or l2");
        sub->add_option("--threads", cli.threads, "worker count (output is identical for any)");
        sub->add_flag("--force", cli.force, "skip the feasibility gate");
        sub->add_flag("--per-omega-columns", cli.per_omega_columns,
                      "include per-outcome columns in solution.csv");
        sub->callback([&subname, name] { subname = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const json doc = load_input(cli.input);
        if (subname == "solve") return run_solve(doc, cli);
        if (subname == "check-contraction") return run_check(doc, cli);
        if (subname == "classify") return run_classify(doc, cli);
        if (subname == "feasibility") return run_feasibility(doc, cli);
        if (subname == "hammerstein") return run_hammerstein(doc, cli);
        if (subname == "bench") return run_bench(doc, cli);
        std::cerr << "unknown subcommand\n";
        return kExitValidation;
    } catch (const rfp::PicardDivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const rfp::FeasibilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const rfp::InfeasibleCoefficientsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
