#pragma once

// Evaluators: LHS, RHS, and margin for each inequality on a
// (surface, test function, parameters) triple.

#include <cmath>
#include <string>
#include <vector>

#include "hsi/core.hpp"
#include "hsi/report.hpp"
#include "hsi/surface.hpp"

namespace hsi {

namespace detail {

inline void require_p(double p) {
    if (!(p >= 1.0)) throw ParamOutOfRange("exponent p must be >= 1");
}

inline void require_a(double a, int n) {
    if (!(a >= 0.0) || a >= n)
        throw ExponentOutOfRange("weight exponent a must lie in [0, n)");
}

// Check supp phi inside the centered ball of radius r.
inline void require_support_in_ball(const Surface& s, const ScalarField& phi,
                                    double r) {
    const double slack = r * (1.0 + 1e-9);
    std::vector<std::pair<double, double>> samples;  // (|x|, phi)
    if (s.is_mesh()) {
        const SimplicialHypersurface& m = s.mesh();
        const std::vector<double> v = sample_vertices(m, phi);
        for (std::size_t i = 0; i < m.num_vertices(); ++i)
            samples.emplace_back(m.vertices[i].norm(), v[i]);
    } else {
        const RevolutionHypersurface& rev = s.revolution();
        for (int i = 0; i <= 1024; ++i) {
            const double t = rev.t0 + (rev.t1 - rev.t0) * i / 1024.0;
            const double absx = rev.abs_x(t);
            samples.emplace_back(absx, phi.radial(absx));
        }
    }
    double peak = 0.0;
    for (const auto& [absx, val] : samples)
        peak = std::max(peak, std::abs(val));
    for (const auto& [absx, val] : samples)
        if (std::abs(val) > 1e-12 * std::max(1.0, peak) && absx > slack)
            throw SupportExceedsBall(phi.name + " is nonzero at |x| = " +
                                     std::to_string(absx) + " > r = " +
                                     std::to_string(r));
}

struct SideBuilder {
    const Surface& s;
    const ScalarField& phi;
    const QuadratureSpec& spec;
    std::vector<TermValue>* terms;
    double sum = 0.0;
    double err = 0.0;

    // Adds coeff * int density / |x|^a as a named term. Zero-coefficient
    // terms are recorded without touching the quadrature (their weights may
    // be outside the admissible exponent range).
    double add(const std::string& name, double coeff, const Density& density,
               double a) {
        if (coeff == 0.0) {
            terms->push_back({name, 0.0, 0.0});
            return 0.0;
        }
        const WeightedIntegral I = integrate_density(s, phi, density, a, spec);
        terms->push_back({name, coeff * I.value,
                          std::abs(coeff) * I.error_estimate});
        sum += coeff * I.value;
        err += std::abs(coeff) * I.error_estimate;
        return I.value;
    }
};

inline void finalize(InequalityReport& rep, const Surface& s,
                     const QuadratureSpec& spec, double quad_error) {
    rep.margin = rep.rhs - rep.lhs;
    rep.ratio = rep.rhs != 0.0
                    ? rep.lhs / rep.rhs
                    : (rep.lhs == 0.0 ? 1.0
                                      : std::numeric_limits<double>::infinity());
    rep.tolerance = discretization_tolerance(s, rep.lhs, rep.rhs, quad_error);
    rep.quadrature = spec.to_json();
    rep.surface = s.name();
    rep.surface_fingerprint = s.fingerprint();
}

}  // namespace detail

// LHS = (n-a) int |phi|^p/|x|^a + a int ((x/|x|).nu)^2 |phi|^p/|x|^a,
// RHS = (int |phi|^p/|x|^a)^((p-1)/p) * (int |p grad_T phi - H nu phi|^p
//       / |x|^(a-p))^(1/p).
inline InequalityReport eval_hardy_ibp(const Surface& s, const ScalarField& phi,
                                       double p, double a,
                                       const QuadratureSpec& spec) {
    const int n = s.dim();
    detail::require_p(p);
    detail::require_a(a, n);
    check_admissible(s, phi);

    InequalityReport rep;
    rep.name = "hardy_ibp";
    rep.params = {{"n", double(n)}, {"p", p}, {"a", a}};

    detail::SideBuilder lhs{s, phi, spec, &rep.lhs_terms};
    const double mass = lhs.add(
        "hardy_term", n - a,
        [p](const PointData& d) { return std::pow(std::abs(d.phi), p); }, a);
    lhs.add("geometric_term", a,
            [p](const PointData& d) {
                return d.xnu * d.xnu * std::pow(std::abs(d.phi), p);
            },
            a);
    rep.lhs = lhs.sum;

    // |p grad_T phi - H nu phi|^2 = p^2 |grad_T phi|^2 + H^2 phi^2 because
    // grad_T phi is tangent and nu is normal.
    const WeightedIntegral energy = integrate_density(
        s, phi,
        [p](const PointData& d) {
            const double q2 = p * p * d.grad_norm * d.grad_norm +
                              d.H * d.H * d.phi * d.phi;
            return std::pow(q2, 0.5 * p);
        },
        a - p, spec);
    rep.rhs = std::pow(mass, (p - 1.0) / p) * std::pow(energy.value, 1.0 / p);
    rep.rhs_terms.push_back({"holder_product", rep.rhs, energy.error_estimate});
    rep.extras = {{"factor_mass", mass}, {"factor_energy", energy.value}};

    detail::finalize(rep, s, spec, lhs.err + energy.error_estimate);
    return rep;
}

// Plain form: (n-p)^p int |phi|^p/|x|^p <= 2^(p-1) int (p^p |grad|^p
// + |H phi|^p). In minimal mode (H identically 0) the stronger
// (n-p)^p/p^p int |phi|^p/|x|^p <= int |grad|^p is evaluated instead.
inline InequalityReport eval_hardy_plain(const Surface& s,
                                         const ScalarField& phi, double p,
                                         const QuadratureSpec& spec,
                                         bool minimal_mode = false) {
    const int n = s.dim();
    detail::require_p(p);
    if (p >= n) throw ExponentOutOfRange("hardy_plain needs p < n");
    check_admissible(s, phi);

    InequalityReport rep;
    rep.name = minimal_mode ? "minimal_hardy" : "hardy_plain";
    rep.params = {{"n", double(n)}, {"p", p}};

    if (minimal_mode) {
        const double hmax = s.max_abs_H();
        if (hmax > 1e-6 * s.scale())
            throw NotMinimal("max |H| = " + std::to_string(hmax) +
                             " on " + s.name());
    }

    detail::SideBuilder lhs{s, phi, spec, &rep.lhs_terms};
    const double cl = minimal_mode ? std::pow((n - p) / p, p)
                                   : std::pow(n - p, p);
    lhs.add("hardy_term", cl,
            [p](const PointData& d) { return std::pow(std::abs(d.phi), p); },
            p);
    rep.lhs = lhs.sum;

    detail::SideBuilder rhs{s, phi, spec, &rep.rhs_terms};
    if (minimal_mode) {
        rhs.add("gradient_term", 1.0,
                [p](const PointData& d) { return std::pow(d.grad_norm, p); },
                0.0);
    } else {
        const double conv = std::pow(2.0, p - 1.0);
        rhs.add("gradient_term", conv * std::pow(p, p),
                [p](const PointData& d) { return std::pow(d.grad_norm, p); },
                0.0);
        rhs.add("curvature_term", conv,
                [p](const PointData& d) {
                    return std::pow(std::abs(d.H * d.phi), p);
                },
                0.0);
    }
    rep.rhs = rhs.sum;

    detail::finalize(rep, s, spec, lhs.err + rhs.err);
    return rep;
}

// (n-2)^2/4 int phi^2/|x|^2 [+ (n^2-4)/4 int ((x/|x|).nu)^2 phi^2/|x|^2]
//   <= int |grad_T phi|^2 + (n-2)/2 int |H| phi^2/|x|.
inline InequalityReport eval_carron(const Surface& s, const ScalarField& phi,
                                    bool improved,
                                    const QuadratureSpec& spec) {
    const int n = s.dim();
    if (n < 3) throw DimensionTooLow("carron needs n >= 3");
    check_admissible(s, phi);

    InequalityReport rep;
    rep.name = improved ? "carron_improved" : "carron";
    rep.params = {{"n", double(n)}, {"p", 2.0}, {"a", 2.0}};

    detail::SideBuilder lhs{s, phi, spec, &rep.lhs_terms};
    lhs.add("hardy_term", 0.25 * (n - 2) * (n - 2),
            [](const PointData& d) { return d.phi * d.phi; }, 2.0);
    lhs.add("geometric_term", improved ? 0.25 * (n * n - 4) : 0.0,
            [](const PointData& d) { return d.xnu * d.xnu * d.phi * d.phi; },
            2.0);
    rep.lhs = lhs.sum;

    detail::SideBuilder rhs{s, phi, spec, &rep.rhs_terms};
    rhs.add("gradient_term", 1.0,
            [](const PointData& d) { return d.grad_norm * d.grad_norm; }, 0.0);
    rhs.add("curvature_term", 0.5 * (n - 2),
            [](const PointData& d) { return std::abs(d.H) * d.phi * d.phi; },
            1.0);
    rep.rhs = rhs.sum;

    detail::finalize(rep, s, spec, lhs.err + rhs.err);
    return rep;
}

// ||phi||_{p*}^p against int (|grad|^p + |H phi|^p); the constant is not
// explicit, so the report is an empirical ratio without pass/fail.
inline InequalityReport eval_sobolev(const Surface& s, const ScalarField& phi,
                                     double p, const QuadratureSpec& spec) {
    const int n = s.dim();
    detail::require_p(p);
    if (p >= n) throw ExponentOutOfRange("sobolev needs p < n");
    if (n < 2) throw DimensionTooLow("sobolev needs n >= 2");
    check_admissible(s, phi);

    InequalityReport rep;
    rep.name = "sobolev";
    rep.params = {{"n", double(n)}, {"p", p}};
    rep.pass_fail_applies = false;
    rep.note = "empirical ratio; the constant is not explicit";

    const double pstar = n * p / (n - p);
    const WeightedIntegral lp = integrate_density(
        s, phi,
        [pstar](const PointData& d) {
            return std::pow(std::abs(d.phi), pstar);
        },
        0.0, spec);
    rep.lhs = std::pow(lp.value, p / pstar);
    rep.lhs_terms.push_back({"norm_pstar", rep.lhs, lp.error_estimate});

    detail::SideBuilder rhs{s, phi, spec, &rep.rhs_terms};
    rhs.add("gradient_term", 1.0,
            [p](const PointData& d) { return std::pow(d.grad_norm, p); }, 0.0);
    rhs.add("curvature_term", 1.0,
            [p](const PointData& d) {
                return std::pow(std::abs(d.H * d.phi), p);
            },
            0.0);
    rep.rhs = rhs.sum;

    detail::finalize(rep, s, spec, lp.error_estimate + rhs.err);
    return rep;
}

// Interpolated Hardy-Sobolev norm with weight b*p; b = 0 reproduces the
// Sobolev report, b = 1 the plain Hardy integral.
inline InequalityReport eval_hardy_sobolev(const Surface& s,
                                           const ScalarField& phi, double p,
                                           double b,
                                           const QuadratureSpec& spec) {
    const int n = s.dim();
    detail::require_p(p);
    if (p >= n) throw ExponentOutOfRange("hardy_sobolev needs p < n");
    if (!(b >= 0.0 && b <= 1.0))
        throw ParamOutOfRange("interpolation parameter b must be in [0, 1]");
    check_admissible(s, phi);

    InequalityReport rep;
    rep.name = "hardy_sobolev";
    rep.params = {{"n", double(n)}, {"p", p}, {"b", b}};
    rep.pass_fail_applies = false;
    rep.note = "empirical ratio; the constant is not explicit";

    const double q = p * (n - b * p) / (n - p);
    const WeightedIntegral lq = integrate_density(
        s, phi,
        [q](const PointData& d) { return std::pow(std::abs(d.phi), q); },
        b * p, spec);
    rep.lhs = std::pow(lq.value, (n - p) / (n - b * p));
    rep.lhs_terms.push_back({"weighted_norm", rep.lhs, lq.error_estimate});

    detail::SideBuilder rhs{s, phi, spec, &rep.rhs_terms};
    rhs.add("gradient_term", 1.0,
            [p](const PointData& d) { return std::pow(d.grad_norm, p); }, 0.0);
    rhs.add("curvature_term", 1.0,
            [p](const PointData& d) {
                return std::pow(std::abs(d.H * d.phi), p);
            },
            0.0);
    rep.rhs = rhs.sum;

    detail::finalize(rep, s, spec, lq.error_estimate + rhs.err);
    return rep;
}

// (n-a)^p int |phi|^p/|x|^a <= 2^(p-1) r^p int (p^p|grad|^p + |H phi|^p)/|x|^a
// for supp phi inside the centered ball of radius r.
inline InequalityReport eval_weighted_poincare(const Surface& s,
                                               const ScalarField& phi,
                                               double p, double a, double r,
                                               const QuadratureSpec& spec) {
    const int n = s.dim();
    detail::require_p(p);
    detail::require_a(a, n);
    if (!(r > 0.0)) throw ParamOutOfRange("ball radius r must be > 0");
    check_admissible(s, phi);
    detail::require_support_in_ball(s, phi, r);

    InequalityReport rep;
    rep.name = "weighted_poincare";
    rep.params = {{"n", double(n)}, {"p", p}, {"a", a}, {"r", r}};

    detail::SideBuilder lhs{s, phi, spec, &rep.lhs_terms};
    lhs.add("hardy_term", std::pow(n - a, p),
            [p](const PointData& d) { return std::pow(std::abs(d.phi), p); },
            a);
    rep.lhs = lhs.sum;

    const double conv = std::pow(2.0, p - 1.0) * std::pow(r, p);
    detail::SideBuilder rhs{s, phi, spec, &rep.rhs_terms};
    rhs.add("gradient_term", conv * std::pow(p, p),
            [p](const PointData& d) { return std::pow(d.grad_norm, p); }, a);
    rhs.add("curvature_term", conv,
            [p](const PointData& d) {
                return std::pow(std::abs(d.H * d.phi), p);
            },
            a);
    rep.rhs = rhs.sum;

    detail::finalize(rep, s, spec, lhs.err + rhs.err);
    return rep;
}

// Hardy with a Poincare remainder on balls:
// (n-2)^2/4 int phi^2/|x|^2 + (n^2-4)/4 int ((x/|x|).nu)^2 phi^2/|x|^2
//   + 1/(2 r^2) int phi^2
// <= int |grad|^2 + (n-2)/2 int |H| phi^2/|x| + 1/4 int |H phi|^2.
inline InequalityReport eval_hardy_poincare(const Surface& s,
                                            const ScalarField& phi, double r,
                                            const QuadratureSpec& spec) {
    const int n = s.dim();
    if (n < 2) throw DimensionTooLow("hardy_poincare needs n >= 2");
    if (!(r > 0.0)) throw ParamOutOfRange("ball radius r must be > 0");
    check_admissible(s, phi);
    detail::require_support_in_ball(s, phi, r);

    InequalityReport rep;
    rep.name = "hardy_poincare";
    rep.params = {{"n", double(n)}, {"p", 2.0}, {"r", r}};

    detail::SideBuilder lhs{s, phi, spec, &rep.lhs_terms};
    lhs.add("hardy_term", 0.25 * (n - 2) * (n - 2),
            [](const PointData& d) { return d.phi * d.phi; }, 2.0);
    lhs.add("geometric_term", 0.25 * (n * n - 4),
            [](const PointData& d) { return d.xnu * d.xnu * d.phi * d.phi; },
            2.0);
    lhs.add("poincare_term", 0.5 / (r * r),
            [](const PointData& d) { return d.phi * d.phi; }, 0.0);
    rep.lhs = lhs.sum;

    detail::SideBuilder rhs{s, phi, spec, &rep.rhs_terms};
    rhs.add("gradient_term", 1.0,
            [](const PointData& d) { return d.grad_norm * d.grad_norm; }, 0.0);
    rhs.add("curvature_term", 0.5 * (n - 2),
            [](const PointData& d) { return std::abs(d.H) * d.phi * d.phi; },
            1.0);
    rhs.add("curvature_sq_term", 0.25,
            [](const PointData& d) { return d.H * d.H * d.phi * d.phi; }, 0.0);
    rep.rhs = rhs.sum;

    detail::finalize(rep, s, spec, lhs.err + rhs.err);
    return rep;
}

// Dispatch by name, for the CLI and the randomized property sweeps.
struct EvalParams {
    double p = 2.0;
    double a = 0.0;
    double b = 0.0;
    double r = 1.0;
    bool minimal_mode = false;
};

inline InequalityReport evaluate(const std::string& name, const Surface& s,
                                 const ScalarField& phi, const EvalParams& prm,
                                 const QuadratureSpec& spec) {
    if (name == "hardy_ibp") return eval_hardy_ibp(s, phi, prm.p, prm.a, spec);
    if (name == "hardy_plain")
        return eval_hardy_plain(s, phi, prm.p, spec, false);
    if (name == "minimal_hardy")
        return eval_hardy_plain(s, phi, prm.p, spec, true);
    if (name == "carron") return eval_carron(s, phi, false, spec);
    if (name == "carron_improved") return eval_carron(s, phi, true, spec);
    if (name == "sobolev") return eval_sobolev(s, phi, prm.p, spec);
    if (name == "hardy_sobolev")
        return eval_hardy_sobolev(s, phi, prm.p, prm.b, spec);
    if (name == "weighted_poincare")
        return eval_weighted_poincare(s, phi, prm.p, prm.a, prm.r, spec);
    if (name == "hardy_poincare")
        return eval_hardy_poincare(s, phi, prm.r, spec);
    throw BadSpec("unknown inequality '" + name + "'");
}

}  // namespace hsi
