// Batch front-end: verify inequalities on corpus surfaces, run sharpness
// sweeps, emit JSON/CSV reports. Exit codes: 0 ok, 1 usage/input error,
// 2 violated inequality or uncertified pencil, 3 solver failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hsi/hsi.hpp"

namespace {

hsi::QuadratureSpec parse_quad(const std::string& spec_string) {
    hsi::QuadratureSpec q;
    if (spec_string.empty()) return q;
    std::stringstream ss(spec_string);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw hsi::BadSpec("--quad item '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (key == "degree") {
            q.mesh_rule_degree = std::stoi(val);
        } else if (key == "panels") {
            q.profile_panels = std::stoi(val);
        } else if (key == "gl") {
            q.profile_gl_order = std::stoi(val);
        } else if (key == "policy") {
            if (val == "none")
                q.policy = hsi::SingularPolicy::none;
            else if (val == "exclusion")
                q.policy = hsi::SingularPolicy::exclusion;
            else if (val == "regularization")
                q.policy = hsi::SingularPolicy::regularization;
            else
                throw hsi::BadSpec("--quad policy '" + val + "' unknown");
        } else if (key == "delta") {
            q.exclusion_delta = std::stod(val);
        } else if (key == "eps") {
            q.regularization_eps = std::stod(val);
        } else {
            throw hsi::BadSpec("--quad key '" + key + "' unknown");
        }
    }
    return q;
}

hsi::BasisSpec parse_basis(const std::string& s) {
    hsi::BasisSpec b;
    if (s == "mesh") {
        b.kind = hsi::BasisSpec::Kind::mesh;
        return b;
    }
    if (s.rfind("radial", 0) == 0) {
        b.kind = hsi::BasisSpec::Kind::radial;
        std::stringstream ss(s.substr(6));
        std::string item;
        bool first = true;
        while (std::getline(ss, item, ':')) {
            if (item.empty()) continue;
            if (item == "log") {
                b.log_spacing = true;
            } else if (first) {
                b.nodes = std::stoi(item);
                first = false;
            } else {
                throw hsi::BadSpec("--basis item '" + item + "' unknown");
            }
        }
        return b;
    }
    throw hsi::BadSpec("--basis must be 'mesh' or 'radial[:K][:log]'");
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw hsi::BadSpec("--out path '" + path + "' is not writable");
    return file;
}

int run_verify(const std::string& inequality, const std::string& surface_spec,
               const std::vector<std::string>& testfn_specs, double p,
               double a, double b, double r, const std::string& quad_spec,
               bool quad_given, const std::string& out_path,
               const std::string& format) {
    const hsi::Surface surface = hsi::make_surface(surface_spec);
    hsi::EvalParams prm;
    prm.p = p;
    prm.a = a;
    prm.b = b;
    prm.r = r;

    std::ofstream file;
    std::ostream& out = open_out(file, out_path);

    bool violated = false;
    bool first = true;
    if (format == "csv") out << hsi::InequalityReport::csv_header() << "\n";
    if (format == "json") out << "[\n";
    for (const std::string& tf : testfn_specs) {
        const hsi::ScalarField phi = hsi::make_testfn(tf, surface);
        const hsi::QuadratureSpec quad =
            quad_given ? parse_quad(quad_spec) : hsi::default_quadrature(phi);
        const hsi::InequalityReport rep =
            hsi::evaluate(inequality, surface, phi, prm, quad);
        if (format == "csv") {
            out << rep.to_csv_row() << "\n";
        } else {
            if (!first) out << ",\n";
            out << rep.to_json().dump(2);
        }
        first = false;
        if (rep.pass_fail_applies && !rep.passed()) {
            violated = true;
            std::cerr << "violation: " << inequality << " on " << surface_spec
                      << " with " << tf << " (margin " << rep.margin
                      << ", tolerance " << rep.tolerance << ")\n";
        }
    }
    if (format == "json") out << "\n]\n";
    return violated ? 2 : 0;
}

int run_sharpness(const std::string& inequality,
                  const std::string& surface_spec, const std::string& family,
                  const std::string& basis_spec, double p, double a, double r,
                  const std::string& quad_spec, const std::string& out_path) {
    const hsi::BasisSpec basis = parse_basis(basis_spec);
    const hsi::QuadratureSpec quad = parse_quad(quad_spec);
    hsi::EvalParams prm;
    prm.p = p;
    prm.a = a;
    prm.r = r;

    // --family-param key=v1;v2;... sweeps one surface parameter.
    std::string key;
    std::vector<double> values;
    if (!family.empty()) {
        const auto eq = family.find('=');
        if (eq == std::string::npos || eq == 0)
            throw hsi::BadSpec("--family-param must be key=v1;v2;...");
        key = family.substr(0, eq);
        std::stringstream ss(family.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ';')) values.push_back(std::stod(item));
        if (values.empty())
            throw hsi::BadSpec("--family-param lists no values");
    } else {
        values.push_back(std::nan(""));
    }

    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "surface,inequality,p,a,param,lambda_min,iterations\n";

    bool uncertified = false;
    for (double v : values) {
        std::string spec = surface_spec;
        if (!key.empty()) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            spec += (spec.find(':') == std::string::npos ? ":" : ",") + key +
                    "=" + buf;
        }
        const hsi::Surface s = hsi::make_surface(spec);
        const hsi::FormPair F =
            hsi::assemble_forms(s, inequality, prm, basis, quad);
        const hsi::RayleighResult res = hsi::min_generalized_rayleigh(F);
        char row[256];
        // Surface specs contain commas; quote the column.
        std::snprintf(row, sizeof(row),
                      "\"%s\",%s,%.17g,%.17g,%.17g,%.17g,%d\n", spec.c_str(),
                      inequality.c_str(), prm.p, prm.a, v, res.lambda_min,
                      res.iterations);
        out << row;
        // Analytic geometry carries no mesh discretization error; anything
        // below 1 - 1e-6 there is a genuine certification failure.
        if (!s.is_mesh() && res.lambda_min < 1.0 - 1e-6) uncertified = true;
    }
    return uncertified ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hardy-Sobolev inequality verification on hypersurfaces"};
    app.require_subcommand(1);

    std::string inequality, surface_spec, quad_spec, out_path;
    std::string format = "json";
    std::vector<std::string> testfns;
    double p = 2.0, a = 0.0, b = 0.0, r = 1.0;

    CLI::App* verify = app.add_subcommand("verify", "evaluate one inequality");
    verify->add_option("--inequality", inequality)->required();
    verify->add_option("--surface", surface_spec)->required();
    verify->add_option("--testfn", testfns)->required();
    verify->add_option("--p", p);
    verify->add_option("--a", a);
    verify->add_option("--b", b);
    verify->add_option("--r", r);
    CLI::Option* quad_opt = verify->add_option("--quad", quad_spec);
    verify->add_option("--out", out_path);
    verify->add_option("--format", format)
        ->check(CLI::IsMember({"json", "csv"}));

    std::string family, basis_spec = "radial:33";
    CLI::App* sharp = app.add_subcommand("sharpness", "lambda_min sweep");
    sharp->add_option("--inequality", inequality)->required();
    sharp->add_option("--surface", surface_spec)->required();
    sharp->add_option("--family-param", family);
    sharp->add_option("--basis", basis_spec);
    sharp->add_option("--p", p);
    sharp->add_option("--a", a);
    sharp->add_option("--r", r);
    sharp->add_option("--quad", quad_spec);
    sharp->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(verify))
            return run_verify(inequality, surface_spec, testfns, p, a, b, r,
                              quad_spec, quad_opt->count() > 0, out_path,
                              format);
        return run_sharpness(inequality, surface_spec, family, basis_spec, p,
                             a, r, quad_spec, out_path);
    } catch (const hsi::SolverStall& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const hsi::SingularPencil& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const hsi::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
