#pragma once

// Evaluation reports: one record per (inequality, surface, test function,
// parameters) case, serializable to JSON and flat CSV.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "hsi/quadrature.hpp"
#include "hsi/surface.hpp"
#include "json.hpp"

namespace hsi {

struct TermValue {
    std::string name;
    double value = 0.0;
    double error = 0.0;  // quadrature error estimate for this term
};

struct InequalityReport {
    std::string name;
    std::vector<std::pair<std::string, double>> params;  // n, p, a, b, r
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    double ratio = 0.0;   // lhs / rhs
    std::vector<TermValue> lhs_terms;
    std::vector<TermValue> rhs_terms;
    // Diagnostic scalars that are not additive parts of either side
    // (e.g. the factor integrals behind a Holder product).
    std::vector<std::pair<std::string, double>> extras;
    double tolerance = 0.0;      // margin >= -tolerance is a pass
    bool pass_fail_applies = true;  // false when the constant is empirical
    nlohmann::ordered_json quadrature;
    std::string surface;
    std::uint64_t surface_fingerprint = 0;
    std::string note;

    bool passed() const { return !pass_fail_applies || margin >= -tolerance; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["schema"] = "hil/1";
        j["name"] = name;
        nlohmann::ordered_json pj;
        for (const auto& [k, v] : params) pj[k] = v;
        j["params"] = pj;
        j["lhs"] = lhs;
        j["rhs"] = rhs;
        j["margin"] = margin;
        j["ratio"] = ratio;
        auto terms_json = [](const std::vector<TermValue>& terms) {
            nlohmann::ordered_json t;
            for (const TermValue& term : terms) {
                nlohmann::ordered_json e;
                e["value"] = term.value;
                e["error"] = term.error;
                t[term.name] = e;
            }
            return t;
        };
        j["lhs_terms"] = terms_json(lhs_terms);
        j["rhs_terms"] = terms_json(rhs_terms);
        if (!extras.empty()) {
            nlohmann::ordered_json e;
            for (const auto& [k, v] : extras) e[k] = v;
            j["extras"] = e;
        }
        j["tolerance"] = tolerance;
        j["pass_fail_applies"] = pass_fail_applies;
        if (pass_fail_applies) j["passed"] = passed();
        j["quadrature"] = quadrature;
        j["surface"] = surface;
        j["surface_fingerprint"] = surface_fingerprint;
        if (!note.empty()) j["note"] = note;
        return j;
    }

    // Flat CSV row; `csv_header()` lists the columns.
    static std::string csv_header() {
        return "name,surface,n,p,a,b,r,lhs,rhs,margin,ratio,tolerance,"
               "pass_fail_applies,passed";
    }
    std::string to_csv_row() const {
        auto get = [&](const std::string& key) {
            for (const auto& [k, v] : params)
                if (k == key) return v;
            return std::nan("");
        };
        auto num = [](double v) {
            if (std::isnan(v)) return std::string();
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return std::string(buf);
        };
        std::string row = name + "," + surface;
        for (const char* key : {"n", "p", "a", "b", "r"})
            row += "," + num(get(key));
        for (double v : {lhs, rhs, margin, ratio, tolerance}) row += "," + num(v);
        row += std::string(",") + (pass_fail_applies ? "1" : "0") + "," +
               (passed() ? "1" : "0");
        return row;
    }
};

// Discretization-aware pass tolerance: tight on analytic geometry, scaled by
// the mesh resolution otherwise.
inline double discretization_tolerance(const Surface& s, double lhs,
                                       double rhs, double quad_error) {
    const double mag = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    if (!s.is_mesh()) return 1e-8 * mag + 10.0 * quad_error;
    const double h_rel =
        s.mesh().mean_edge_length() / std::max(s.scale(), 1e-300);
    return 2.0 * h_rel * mag + 10.0 * quad_error;
}

}  // namespace hsi
