#ifndef RFP_IO_HPP
#define RFP_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "rfp/contraction.hpp"
#include "rfp/hammerstein.hpp"
#include "rfp/picard.hpp"
#include "rfp/randomfp.hpp"

namespace rfp {

/// 17-significant-digit formatting: enough to round-trip any double, and a
/// fixed width policy so reruns are byte-identical.
inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

/// Order-preserving JSON object builder; field order is part of the output
/// contract.
class JsonObj {
  public:
    JsonObj& raw(const std::string& name, const std::string& value) {
        sep();
        body_ += '"' + json_escape(name) + "\":" + value;
        return *this;
    }
    JsonObj& field(const std::string& name, double v) { return raw(name, fmt_double(v)); }
    JsonObj& field(const std::string& name, std::size_t v) { return raw(name, std::to_string(v)); }
    JsonObj& field(const std::string& name, int v) { return raw(name, std::to_string(v)); }
    JsonObj& field(const std::string& name, bool v) { return raw(name, v ? "true" : "false"); }
    JsonObj& field(const std::string& name, const std::string& v) {
        return raw(name, '"' + json_escape(v) + '"');
    }
    std::string str() const { return "{" + body_ + "}"; }

  private:
    std::string body_;
    bool first_ = true;
    void sep() {
        if (!first_) body_ += ',';
        first_ = false;
    }
};

class JsonArr {
  public:
    JsonArr& raw(const std::string& value) {
        if (!body_.empty()) body_ += ',';
        body_ += value;
        return *this;
    }
    JsonArr& add(double v) { return raw(fmt_double(v)); }
    std::string str() const { return "[" + body_ + "]"; }

  private:
    std::string body_;
};

inline std::string to_json(const ConditionCoefficients& coeffs) {
    if (std::holds_alternative<HRCoefficients>(coeffs)) {
        const auto& h = std::get<HRCoefficients>(coeffs);
        return JsonObj()
            .field("a1", h.a1)
            .field("a2", h.a2)
            .field("a3", h.a3)
            .field("a4", h.a4)
            .field("a5", h.a5)
            .str();
    }
    const auto& g = std::get<GregusParams>(coeffs);
    return JsonObj()
        .field("a", g.a)
        .field("b", g.b)
        .field("c", g.c)
        .field("c_bound_variant", std::string(g.variant == GregusVariant::BoundOverEightMinusB
                                                  ? "(4-a)/(8-b)"
                                                  : "(4-a)/(8-a)"))
        .str();
}

inline std::string to_json(const ContractionCertificate& cert) {
    return JsonObj()
        .field("kind", std::string(to_string(cert.kind)))
        .raw("coefficients", to_json(cert.coefficients))
        .field("margin", cert.margin)
        .field("pairs_checked", cert.pairs_checked)
        .field("omega_index", cert.omega.index)
        .field("gregus_annotation", cert.gregus_annotation)
        .str();
}

inline std::string to_json(const PicardReport& rep, bool with_fixed_point = true) {
    JsonObj o;
    if (with_fixed_point) {
        JsonArr fp;
        for (double v : rep.fixed_point) fp.add(v);
        o.raw("fixed_point", fp.str());
    }
    return o.field("iterations", rep.iterations)
        .field("k_bound", rep.k_bound)
        .field("apriori_bound", rep.apriori_bound)
        .field("aposteriori_bound", rep.aposteriori_bound)
        .field("residual", rep.residual)
        .field("converged", rep.converged)
        .field("certified", rep.certified)
        .field("diverged", rep.diverged)
        .str();
}

inline std::string to_json(const RandomSolveSummary& s) {
    return JsonObj()
        .field("n_samples", s.per_omega.size())
        .field("residual_census", s.residual_census)
        .field("meansq_norm", s.meansq_norm)
        .field("max_residual", s.max_residual)
        .field("infeasible_fraction", s.infeasible_fraction)
        .field("n_diverged", s.n_diverged)
        .str();
}

inline std::string to_json(const FeasibilityReport& r) {
    return JsonObj()
        .field("l_omega", r.l_omega)
        .field("lhs", r.lhs)
        .field("rhs_paper", r.rhs_paper)
        .field("rhs_derived", r.rhs_derived)
        .field("feasible_paper", r.feasible_paper)
        .field("feasible_derived", r.feasible_derived)
        .str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EvaluationError("write_file: cannot open " + path);
    out << content;
}

/// (iter, step_norm, ratio) table for one Picard run.
inline std::string step_norms_csv(const PicardReport& rep) {
    std::string csv = "iter,step_norm,ratio\n";
    for (std::size_t i = 0; i < rep.step_norms.size(); ++i) {
        csv += std::to_string(i + 1) + ',' + fmt_double(rep.step_norms[i]) + ',';
        csv += i > 0 ? fmt_double(rep.ratio_estimates[i - 1]) : "";
        csv += '\n';
    }
    return csv;
}

/// (omega_index, residual, iterations, norm_of_fixed_point) table.
inline std::string per_omega_csv(const RandomSolveSummary& s, NormKind nk,
                                 const Vector& weights = {}) {
    std::string csv = "omega_index,residual,iterations,norm_of_fixed_point\n";
    for (const auto& [omega, rep] : s.per_omega) {
        const double nm = rep.fixed_point.empty() ? 0.0 : norm(rep.fixed_point, nk, weights);
        csv += std::to_string(omega.index) + ',' + fmt_double(rep.residual) + ',' +
               std::to_string(rep.iterations) + ',' + fmt_double(nm) + '\n';
    }
    return csv;
}

/// (t, mean, meansq[, omega_<i>...]) table of Hammerstein node solutions.
inline std::string solution_csv(const HammersteinSummary& s, const QuadratureGrid& grid,
                                bool per_omega_columns = false) {
    std::string csv = "t,mean,meansq";
    if (per_omega_columns)
        for (const auto& [omega, rep] : s.solve.per_omega)
            csv += ",omega_" + std::to_string(omega.index);
    csv += '\n';
    const double n = static_cast<double>(s.solve.per_omega.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double mean = 0.0, sq = 0.0;
        for (const auto& [omega, rep] : s.solve.per_omega) {
            const double v = rep.fixed_point.at(i);
            mean += v;
            sq += v * v;
        }
        csv += fmt_double(grid.nodes[i]) + ',' + fmt_double(mean / n) + ',' +
               fmt_double(std::sqrt(sq / n));
        if (per_omega_columns)
            for (const auto& [omega, rep] : s.solve.per_omega)
                csv += ',' + fmt_double(rep.fixed_point.at(i));
        csv += '\n';
    }
    return csv;
}

}  // namespace rfp

#endif
