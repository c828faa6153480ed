// Acceptance gate: ten independent criteria, one printed PASS/FAIL line
// each. Exits nonzero when any criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hsi/hsi.hpp"
#include "oracles.hpp"
#include "sweep_common.hpp"

using namespace hsi;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& label,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id,
                label.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double mesh_curvature_error(const SimplicialHypersurface& m, double exact) {
    double err = 0.0;
    std::size_t count = 0;
    for (std::size_t v = 0; v < m.num_vertices(); ++v) {
        if (m.vertex_on_collar[v]) continue;
        err += std::abs(m.per_vertex_mean_curvature[v] - exact) / exact;
        ++count;
    }
    return err / count;
}

ScalarField constant_on(const Surface& s) { return make_testfn("constant", s); }

double max_abs_x(const Surface& s) { return sweep::surface_max_abs(s); }

}  // namespace

int main() {
    criterion(1, "curvature convention on spheres", [](std::string& d) {
        for (int n = 2; n <= 6; ++n) {
            char spec[32];
            std::snprintf(spec, sizeof(spec), "sphere:n=%d", n);
            const RevolutionHypersurface& r =
                make_surface(spec).revolution();
            for (int i = 1; i < 256; ++i) {
                const double t = r.t0 + (r.t1 - r.t0) * i / 256.0;
                if (std::abs(r.mean_curvature(t) - n) > 1e-10) {
                    d = "revolution sphere H != n at n=" + std::to_string(n);
                    return false;
                }
            }
        }
        const double e5 = mesh_curvature_error(make_icosphere(5), 2.0);
        const double e6 = mesh_curvature_error(make_icosphere(6), 2.0);
        std::ostringstream ss;
        ss << "mesh H rel. error " << e5 << " (20480 faces) -> " << e6
           << " (81920 faces)";
        d = ss.str();
        return e5 <= 0.02 && e6 <= 0.55 * e5;
    });

    criterion(2, "tangential identities and ibp convergence",
              [](std::string& d) {
        for (const char* spec :
             {"icosphere:subdiv=3", "torus:nu=32,nv=16", "graph:res=24",
              "flat_annulus_mesh:r0=0.2,r1=1,rings=12,segs=24",
              "ellipsoid:subdiv=3", "cylinder_mesh:segs=32,stacks=16"}) {
            const IdentityResiduals res =
                identity_residuals(make_surface(spec).mesh());
            if (res.res_div_x > 1e-10) {
                d = std::string("div_T x residual too large on ") + spec;
                return false;
            }
        }
        auto v_field = make_callable_field(
            [](const Vec3& x) { return std::exp(0.5 * x[0]) * x[1]; });
        auto w_field = make_callable_field(
            [](const Vec3& x) { return std::cos(x[2]) + 0.3 * x[0]; });
        // Tangent on the unit sphere, as the divergence-theorem check needs.
        auto z_field = make_callable_vf([](const Vec3& x) {
            const Vec3 w(x[1], -0.5 * x[0], 0.2 + x[2]);
            return Vec3(w - w.dot(x) * x);
        });
        double ps = 0.0, pv = 0.0, pd = 0.0;
        for (int subdiv : {3, 4, 5}) {
            const SimplicialHypersurface m = make_icosphere(subdiv);
            std::vector<std::uint32_t> omega;
            for (std::size_t f = 0; f < m.num_faces(); ++f) {
                const Tri& t = m.triangles[f];
                if (m.vertices[t[0]][2] + m.vertices[t[1]][2] +
                        m.vertices[t[2]][2] >
                    0.0)
                    omega.push_back(static_cast<std::uint32_t>(f));
            }
            const IbpResiduals r =
                ibp_residuals(m, v_field, w_field, z_field, omega);
            const double sc = std::max(
                {r.res_scalar[0], r.res_scalar[1], r.res_scalar[2]});
            if (subdiv > 3 &&
                !(sc <= 0.55 * ps && r.res_vector <= 0.55 * pv &&
                  r.res_divthm <= 0.75 * pd)) {
                d = "ibp residuals do not contract at order >= 1";
                return false;
            }
            ps = sc;
            pv = r.res_vector;
            pd = r.res_divthm;
        }
        return true;
    });

    criterion(3, "forced equalities on the analytic path", [](std::string& d) {
        const QuadratureSpec spec;
        for (int n : {3, 4, 5}) {
            char name[32];
            std::snprintf(name, sizeof(name), "sphere:n=%d", n);
            const Surface s = make_surface(name);
            const InequalityReport rep =
                eval_carron(s, constant_on(s), true, spec);
            const double want = 0.5 * n * (n - 2) * unit_sphere_area(n);
            if (std::abs(rep.lhs - want) > 1e-8 * want ||
                std::abs(rep.rhs - want) > 1e-8 * want) {
                d = "carron_improved equality off on n=" + std::to_string(n);
                return false;
            }
        }
        for (int n : {2, 3, 4}) {
            char name[32];
            std::snprintf(name, sizeof(name), "sphere:n=%d", n);
            const Surface s = make_surface(name);
            for (double p : {1.0, 2.0, 3.0})
                for (double a : {0.0, 1.0}) {
                    const InequalityReport rep =
                        eval_hardy_ibp(s, constant_on(s), p, a, spec);
                    const double want = n * unit_sphere_area(n);
                    if (std::abs(rep.lhs - want) > 1e-8 * want ||
                        std::abs(rep.rhs - want) > 1e-8 * want) {
                        d = "hardy_ibp sphere equality off";
                        return false;
                    }
                }
        }
        // Radial decreasing extremal: the cone on the (nearly punctured)
        // flat annulus, p = a = 1, both sides pi.
        const Surface ann = make_surface("flat_annulus:r0=1e-9,r1=1,n=2");
        const ScalarField cone = make_testfn("cone:R=1", ann);
        const InequalityReport rep = eval_hardy_ibp(ann, cone, 1.0, 1.0, spec);
        const double pi = std::numbers::pi;
        std::ostringstream ss;
        ss << "cone sides " << rep.lhs << " / " << rep.rhs;
        d = ss.str();
        return std::abs(rep.lhs - pi) <= 1e-8 * pi &&
               std::abs(rep.rhs - pi) <= 1e-8 * pi;
    });

    criterion(4, "log-cutoff quotients approach 1 over four decades",
              [](std::string& d) {
        QuadratureSpec spec;
        spec.profile_panels = 4096;
        bool ok = true;
        std::ostringstream ss;
        for (int n : {3, 4}) {
            for (const char* ineq : {"carron", "hardy_plain"}) {
                double prev = 1e300;
                double last = 0.0;
                for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
                    char sname[64], fname[64];
                    std::snprintf(sname, sizeof(sname),
                                  "flat_annulus:r0=%.17g,r1=1,n=%d", eps, n);
                    std::snprintf(fname, sizeof(fname),
                                  "log_cutoff:eps=%.17g,R=1", eps);
                    const Surface s = make_surface(sname);
                    const ScalarField phi = make_testfn(fname, s);
                    EvalParams prm;
                    prm.p = 2.0;
                    const InequalityReport rep =
                        evaluate(ineq, s, phi, prm, spec);
                    const double q = rep.rhs / rep.lhs;
                    if (!(q < prev)) ok = false;  // monotone approach
                    prev = q;
                    last = q;
                }
                ss << ineq << " n=" << n << " quotient " << last
                   << " at eps=1e-4; ";
                if (std::abs(last - 1.0) > 0.1) ok = false;
            }
        }
        d = ss.str();
        return ok;
    });

    criterion(5, "eigen-certification of all quadratic forms",
              [](std::string& d) {
        const QuadratureSpec spec;
        const BasisSpec basis;
        for (const char* sname :
             {"sphere:n=2", "sphere:n=3", "sphere:n=4", "sphere:n=3,R=2",
              "flat_annulus:r0=0.1,r1=1,n=3", "flat_annulus:r0=0.2,r1=2,n=4",
              "flat_disk:R=1,n=2", "flat_disk:R=1,n=3", "cylinder:R=1,L=2,n=3",
              "catenoid:n=3"}) {
            const Surface s = make_surface(sname);
            const int n = s.dim();
            const double r = 1.05 * max_abs_x(s);
            const bool minimal = s.max_abs_H() <= 1e-6 * s.scale();
            std::vector<std::pair<std::string, EvalParams>> forms;
            for (double a : {0.0, 1.0}) {
                EvalParams prm;
                prm.a = a;
                forms.emplace_back("hardy_ibp", prm);
                prm.r = r;
                forms.emplace_back("weighted_poincare", prm);
            }
            {
                EvalParams prm;
                prm.r = r;
                forms.emplace_back("hardy_poincare", prm);
            }
            if (n >= 3) {
                forms.emplace_back("carron", EvalParams{});
                forms.emplace_back("carron_improved", EvalParams{});
                if (minimal) forms.emplace_back("minimal_hardy", EvalParams{});
            }
            for (const auto& [name, prm] : forms) {
                RayleighResult res;
                try {
                    res = min_generalized_rayleigh(
                        assemble_forms(s, name, prm, basis, spec));
                } catch (const std::exception& e) {
                    std::ostringstream ss;
                    ss << name << " (a=" << prm.a << ") on " << sname << ": "
                       << e.what();
                    d = ss.str();
                    return false;
                }
                if (res.lambda_min < 1.0 - 1e-6) {
                    std::ostringstream ss;
                    ss << name << " on " << sname << ": lambda "
                       << res.lambda_min;
                    d = ss.str();
                    return false;
                }
            }
        }
        // Sharpness on the unit 3-sphere: lambda = 1 at the constant.
        const FormPair F = assemble_forms(make_surface("sphere:n=3"),
                                          "carron_improved", EvalParams{},
                                          basis, spec);
        const RayleighResult res = min_generalized_rayleigh(F);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(F.m).normalized();
        std::ostringstream ss;
        ss << "S^3 carron_improved lambda " << res.lambda_min;
        d = ss.str();
        return std::abs(res.lambda_min - 1.0) <= 1e-6 &&
               std::abs(res.c.dot(ones)) >= 0.999;
    });

    criterion(6, "randomized property sweep (500 cases)", [](std::string& d) {
        const sweep::SweepResult res =
            sweep::run_randomized_sweep(0xACCE97ED, 500);
        std::ostringstream ss;
        ss << res.cases << " cases, " << res.invariance_checks
           << " invariance checks, " << res.failures.size() << " failures";
        if (!res.failures.empty()) ss << "; first: " << res.failures.front();
        d = ss.str();
        return res.failures.empty() && res.cases >= 500 &&
               res.invariance_checks > 0;
    });

    criterion(7, "minimal catenoids and the minimal hardy margin",
              [](std::string& d) {
        const QuadratureSpec spec;
        for (int n : {2, 3}) {
            char sname[32];
            std::snprintf(sname, sizeof(sname), "catenoid:n=%d", n);
            const Surface s = make_surface(sname);
            const double hmax = s.max_abs_H();
            if (hmax > 1e-8) {
                std::ostringstream ss;
                ss << "catenoid n=" << n << " max|H| " << hmax;
                d = ss.str();
                return false;
            }
            const RevolutionHypersurface& r = s.revolution();
            const double lo = 1.05 * r.abs_x(0.5 * (r.t0 + r.t1));
            const double hi =
                0.95 * std::min(r.abs_x(r.t0), r.abs_x(r.t1));
            const double p = n == 2 ? 1.5 : 2.0;
            for (const char* family :
                 {"radial_bump", "log_cutoff", "ground_state_cutoff"}) {
                char fname[96];
                if (std::string(family) == "radial_bump")
                    std::snprintf(fname, sizeof(fname),
                                  "radial_bump:delta=%.17g,R=%.17g", lo, hi);
                else
                    std::snprintf(fname, sizeof(fname), "%s:eps=%.17g,R=%.17g",
                                  family, lo, hi);
                const ScalarField phi = make_testfn(fname, s);
                const InequalityReport rep = eval_hardy_plain(
                    s, phi, p, default_quadrature(phi), true);
                if (rep.margin < 0.0) {
                    d = std::string("negative margin for ") + fname +
                        " on catenoid n=" + std::to_string(n);
                    return false;
                }
            }
        }
        return true;
    });

    criterion(8, "isoperimetric equality and cap monotonicity",
              [](std::string& d) {
        const InequalityReport poly = flat_polygon_isoperimetry(5000);
        if (std::abs(poly.ratio - 1.0) > 1e-6) {
            d = "polygon limit ratio off";
            return false;
        }
        const SimplicialHypersurface m = make_flat_disk_mesh(2.0, 32, 64);
        const InequalityReport disk = eval_isoperimetric(
            m, faces_in_ball(m, Vec3::Zero(), 1.0),
            IsoperimetricMode::flat_equality);
        if (std::abs(disk.ratio - 1.0) > 0.01) {
            d = "mesh disk equality off by more than 1%";
            return false;
        }
        std::vector<double> grid{0.001};
        for (int i = 1; i <= 15; ++i) grid.push_back(0.04 * i);
        const MonotonicityProfile prof = sphere_cap_profile_analytic(0.9, grid);
        std::ostringstream ss;
        ss << "cap profile limit " << prof.limit_estimate;
        d = ss.str();
        return prof.min_forward_difference >= -1e-6 * std::numbers::pi &&
               std::abs(prof.limit_estimate - std::numbers::pi) <=
                   0.01 * std::numbers::pi;
    });

    criterion(9, "coarea consistency and radial collapse", [](std::string& d) {
        auto cube = [](int nn, const std::function<double(const Vec3&)>& u) {
            const double h = 2.0 / (nn - 1);
            return make_grid({nn, nn, nn}, {h, h, h}, {-1.0, -1.0, -1.0}, u);
        };
        const Grid slab = cube(128, [](const Vec3& x) { return x[2]; });
        const CoareaCheck flat = coarea_consistency(
            slab, [](const Vec3& x) { return 1.0 + 0.2 * x[0]; }, 32);
        const Grid rad = cube(128, [](const Vec3& x) { return x.norm(); });
        const CoareaCheck round =
            coarea_consistency(rad, [](const Vec3&) { return 1.0; }, 32);
        if (flat.relative_gap > 0.03 || round.relative_gap > 0.03) {
            std::ostringstream ss;
            ss << "coarea gaps " << flat.relative_gap << " / "
               << round.relative_gap;
            d = ss.str();
            return false;
        }
        FoliationProblem prob;
        prob.grid = &rad;
        prob.phi = [](const Vec3& x) {
            const double r = x.norm();
            if (r <= 0.3 || r >= 0.85) return 0.0;
            const double u = (r - 0.3) / 0.55;
            const double sn = std::sin(std::numbers::pi * u);
            return sn * sn;
        };
        prob.grad_phi = [](const Vec3&) { return Vec3::Zero(); };
        prob.p = 2.0;
        prob.a = 1.0;
        prob.exclusion_delta = 0.25;
        prob.level_count = 32;
        const InequalityReport rep = eval_foliated_hardy(prob);
        auto bump = [](double t) {
            if (t <= 0.3 || t >= 0.85) return 0.0;
            const double u = (t - 0.3) / 0.55;
            const double sn = std::sin(std::numbers::pi * u);
            return sn * sn;
        };
        const RadialFoliation rf =
            eval_foliated_hardy_radial(2, bump, 2.0, 1.0, 0.3, 0.85);
        std::ostringstream ss;
        ss << "grid collapse gap " << std::abs(rep.lhs - rep.rhs) / rep.rhs;
        d = ss.str();
        return std::abs(rep.lhs - rep.rhs) <= 0.03 * rep.rhs &&
               std::abs(rf.lhs - rf.rhs) <= 1e-8 * rf.rhs;
    });

    criterion(10, "disk remainder constant matches the bessel oracle",
              [](std::string& d) {
        const double j0 = oracle::bessel_j0_first_zero();
        if (std::abs(j0 * j0 - 5.7832) > 1e-3) {
            d = "bessel oracle drifted";
            return false;
        }
        EvalParams prm;
        prm.r = 1.0;
        const FormPair F =
            assemble_forms(make_surface("flat_disk:R=1"), "hardy_poincare",
                           prm, BasisSpec{}, QuadratureSpec{});
        const RayleighResult res = min_generalized_rayleigh(F);
        std::ostringstream ss;
        ss << "lambda " << res.lambda_min << " vs 2 j0^2 = " << 2 * j0 * j0;
        d = ss.str();
        return std::abs(res.lambda_min - 2.0 * j0 * j0) <=
                   0.01 * 2.0 * j0 * j0 &&
               res.lambda_min >= 1.0;
    });

    if (g_failures > 0)
        std::printf("%d criterion(s) failed\n", g_failures);
    else
        std::printf("all criteria passed\n");
    return g_failures == 0 ? 0 : 1;
}
