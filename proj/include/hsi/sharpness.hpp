#pragma once

// Sharpness probes: discretize a quadratic inequality as a matrix pencil
// (A, B) over a finite test-function subspace and minimize the generalized
// Rayleigh quotient c'Ac / c'Bc. lambda_min >= 1 certifies the inequality on
// the subspace; lambda_min near 1 locates near-extremal fields. A general-p
// quotient optimizer covers the non-quadratic family.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hsi/core.hpp"
#include "hsi/fields.hpp"
#include "hsi/inequalities.hpp"
#include "hsi/surface.hpp"

namespace hsi {

struct BasisSpec {
    enum class Kind { mesh, radial };
    Kind kind = Kind::radial;
    // Radial basis: hat functions at `nodes` points along the profile
    // parameter; log-spaced in |x| when log_spacing is set (annuli whose
    // inner radius is orders of magnitude below the outer one).
    int nodes = 33;
    bool log_spacing = false;

    std::string describe() const {
        if (kind == Kind::mesh) return "mesh piecewise-linear vertex basis";
        return std::string(log_spacing ? "log-spaced" : "uniform") +
               " radial hat basis, " + std::to_string(nodes) + " nodes";
    }
};

struct FormPair {
    int m = 0;            // admissible basis dimension
    Eigen::MatrixXd A;    // RHS quadratic form
    Eigen::MatrixXd B;    // LHS quadratic form
    std::string basis;
    // Reconstructs the test function phi_c = sum c_i b_i in a form the
    // inequality evaluators accept. Empty when the basis has no such
    // representation (profile hats on a surface of constant |x|).
    std::function<ScalarField(const Eigen::VectorXd&)> make_field;
};

namespace detail {

// One quadratic term: coeff * int w(|x|,a) * (mass(d) phi^2
//                                             + energy(d) |grad phi|^2) dV.
struct QuadraticTerm {
    double coeff = 0.0;
    double a = 0.0;
    std::function<double(const PointData&)> mass;
    std::function<double(const PointData&)> energy;
};

struct QuadraticInequality {
    std::vector<QuadraticTerm> lhs;  // -> B
    std::vector<QuadraticTerm> rhs;  // -> A
    // Hardy via integration by parts has RHS sqrt(Q1 * Q2); when set, `rhs`
    // holds Q1 and `rhs2` holds Q2 and the caller quadratizes.
    std::vector<QuadraticTerm> rhs2;
    bool holder_rhs = false;
};

inline QuadraticInequality quadratic_form_of(const std::string& name, int n,
                                             const EvalParams& prm,
                                             const Surface& s) {
    auto sq = [](const PointData& d) { return 1.0; };
    auto one = sq;
    auto xnu2 = [](const PointData& d) { return d.xnu * d.xnu; };
    auto absH = [](const PointData& d) { return std::abs(d.H); };
    auto H2 = [](const PointData& d) { return d.H * d.H; };

    QuadraticInequality q;
    if (name == "carron" || name == "carron_improved") {
        if (n < 3) throw DimensionTooLow("carron needs n >= 3");
        q.lhs.push_back({0.25 * (n - 2) * (n - 2), 2.0, one, nullptr});
        if (name == "carron_improved")
            q.lhs.push_back({0.25 * (n * n - 4), 2.0, xnu2, nullptr});
        q.rhs.push_back({1.0, 0.0, nullptr, one});
        q.rhs.push_back({0.5 * (n - 2), 1.0, absH, nullptr});
        return q;
    }
    if (name == "hardy_plain" || name == "minimal_hardy") {
        if (prm.p != 2.0)
            throw NonQuadratic(name + " with p = " + std::to_string(prm.p));
        if (2.0 >= n) throw ExponentOutOfRange("hardy_plain needs p < n");
        if (name == "minimal_hardy") {
            const double hmax = s.max_abs_H();
            if (hmax > 1e-6 * s.scale())
                throw NotMinimal("max |H| = " + std::to_string(hmax) + " on " +
                                 s.name());
            q.lhs.push_back({0.25 * (n - 2) * (n - 2), 2.0, one, nullptr});
            q.rhs.push_back({1.0, 0.0, nullptr, one});
            return q;
        }
        q.lhs.push_back({double((n - 2) * (n - 2)), 2.0, one, nullptr});
        q.rhs.push_back({8.0, 0.0, nullptr, one});
        q.rhs.push_back({2.0, 0.0, H2, nullptr});
        return q;
    }
    if (name == "weighted_poincare") {
        if (prm.p != 2.0)
            throw NonQuadratic(name + " with p = " + std::to_string(prm.p));
        require_a(prm.a, n);
        if (!(prm.r > 0.0)) throw ParamOutOfRange("ball radius r must be > 0");
        const double conv = 2.0 * prm.r * prm.r;
        q.lhs.push_back({(n - prm.a) * (n - prm.a), prm.a, one, nullptr});
        q.rhs.push_back({conv * 4.0, prm.a, nullptr, one});
        q.rhs.push_back({conv, prm.a, H2, nullptr});
        return q;
    }
    if (name == "hardy_poincare") {
        if (n < 2) throw DimensionTooLow("hardy_poincare needs n >= 2");
        if (!(prm.r > 0.0)) throw ParamOutOfRange("ball radius r must be > 0");
        q.lhs.push_back({0.25 * (n - 2) * (n - 2), 2.0, one, nullptr});
        q.lhs.push_back({0.25 * (n * n - 4), 2.0, xnu2, nullptr});
        q.lhs.push_back({0.5 / (prm.r * prm.r), 0.0, one, nullptr});
        q.rhs.push_back({1.0, 0.0, nullptr, one});
        q.rhs.push_back({0.5 * (n - 2), 1.0, absH, nullptr});
        q.rhs.push_back({0.25, 0.0, H2, nullptr});
        return q;
    }
    if (name == "hardy_ibp") {
        if (prm.p != 2.0)
            throw NonQuadratic(name + " with p = " + std::to_string(prm.p));
        require_a(prm.a, n);
        q.lhs.push_back({double(n) - prm.a, prm.a, one, nullptr});
        if (prm.a != 0.0) q.lhs.push_back({prm.a, prm.a, xnu2, nullptr});
        q.holder_rhs = true;
        q.rhs.push_back({1.0, prm.a, one, nullptr});
        q.rhs2.push_back({4.0, prm.a - 2.0, nullptr, one});
        q.rhs2.push_back({1.0, prm.a - 2.0, H2, nullptr});
        return q;
    }
    throw NonQuadratic("no quadratic form for inequality '" + name + "'");
}

// Assembly callback: visit(point data, measure incl. quadrature weight,
// basis values, basis t-derivatives, active dof indices).
using AssemblyVisitor = std::function<void(
    const PointData&, double, const double*, const double*, const int*, int)>;

}  // namespace detail

// Assemble the (A, B) pencil of a quadratic (p = 2) inequality over a finite
// basis, dropping basis functions pinned to zero by admissibility.
inline FormPair assemble_forms(const Surface& s, const std::string& name,
                               const EvalParams& prm, const BasisSpec& basis,
                               const QuadratureSpec& spec) {
    const int n = s.dim();
    const detail::QuadraticInequality q =
        detail::quadratic_form_of(name, n, prm, s);

    // Largest weight exponent actually integrated, for policy checks.
    double amax = 0.0;
    for (const auto* terms : {&q.lhs, &q.rhs, &q.rhs2})
        for (const auto& t : *terms)
            if (t.coeff != 0.0) amax = std::max(amax, t.a);

    FormPair out;
    out.basis = basis.describe();

    // Accumulate one matrix per term family; the Holder RHS needs its two
    // factors kept apart until the quadratization step.
    auto accumulate = [&](Eigen::MatrixXd& M,
                          const std::vector<detail::QuadraticTerm>& terms,
                          const PointData& d, double measure, const double* h,
                          const double* dh, const int* dof, int k) {
        for (const auto& term : terms) {
            if (term.coeff == 0.0) continue;
            const double w =
                term.coeff * measure * singular_weight(d.abs_x, term.a, spec);
            if (w == 0.0) continue;
            const double alpha = term.mass ? w * term.mass(d) : 0.0;
            const double beta = term.energy ? w * term.energy(d) : 0.0;
            for (int i = 0; i < k; ++i) {
                if (dof[i] < 0) continue;
                for (int j = 0; j < k; ++j) {
                    if (dof[j] < 0) continue;
                    double v = 0.0;
                    if (alpha != 0.0) v += alpha * h[i] * h[j];
                    if (beta != 0.0) v += beta * dh[i] * dh[j];
                    M(dof[i], dof[j]) += v;
                }
            }
        }
    };

    Eigen::MatrixXd B, A1, A2;

    if (basis.kind == BasisSpec::Kind::mesh) {
        if (!s.is_mesh())
            throw BadSpec("mesh basis requested on a revolution surface");
        const SimplicialHypersurface& m = s.mesh();
        std::vector<int> dof_of(m.num_vertices(), -1);
        int m_adm = 0;
        for (std::size_t v = 0; v < m.num_vertices(); ++v)
            if (!m.vertex_on_collar[v]) dof_of[v] = m_adm++;
        if (m_adm == 0) throw BadSpec("no admissible vertices on " + m.name);
        out.m = m_adm;
        B = Eigen::MatrixXd::Zero(m_adm, m_adm);
        A1 = B;
        A2 = B;

        if (amax > 0.0 && spec.policy == SingularPolicy::exclusion &&
            spec.exclusion_delta <= 0.0)
            throw SingularityUnprotected("exclusion policy with delta <= 0");
        if (amax > 0.0 && spec.policy == SingularPolicy::regularization &&
            spec.regularization_eps <= 0.0)
            throw SingularityUnprotected("regularization policy with eps <= 0");
        const double probe_radius = 1e-3 * m.bbox_diagonal();

        const TriangleRule& rule = triangle_rule(spec.mesh_rule_degree);
        for (std::size_t f = 0; f < m.num_faces(); ++f) {
            const Tri& t = m.triangles[f];
            const Vec3& p0 = m.vertices[t[0]];
            const Vec3& p1 = m.vertices[t[1]];
            const Vec3& p2 = m.vertices[t[2]];
            // Gradients of the three hat functions, constant per face.
            const Vec3& fn = m.per_face_normal[f];
            const double inv2A = 0.5 / m.per_face_area[f];
            const Vec3 gl1 = inv2A * fn.cross(p0 - p2);
            const Vec3 gl2 = inv2A * fn.cross(p1 - p0);
            const Vec3 ghat[3] = {-gl1 - gl2, gl1, gl2};
            const int dof[3] = {dof_of[t[0]], dof_of[t[1]], dof_of[t[2]]};

            for (std::size_t qi = 0; qi < rule.bary.size(); ++qi) {
                const auto& b = rule.bary[qi];
                const Vec3 x = b[0] * p0 + b[1] * p1 + b[2] * p2;
                PointData d;
                d.abs_x = x.norm();
                d.H = b[0] * m.per_vertex_mean_curvature[t[0]] +
                      b[1] * m.per_vertex_mean_curvature[t[1]] +
                      b[2] * m.per_vertex_mean_curvature[t[2]];
                Vec3 nu = b[0] * m.per_vertex_normal[t[0]] +
                          b[1] * m.per_vertex_normal[t[1]] +
                          b[2] * m.per_vertex_normal[t[2]];
                const double nn = nu.norm();
                d.xnu = (nn > 0.0 && d.abs_x > 0.0)
                            ? x.dot(nu) / (nn * d.abs_x)
                            : 0.0;
                if (amax > 0.0 && spec.policy == SingularPolicy::none &&
                    d.abs_x < probe_radius)
                    throw SingularityUnprotected(
                        "singular weight integrated near the origin with no "
                        "singular policy");
                const double measure = m.per_face_area[f] * rule.weight[qi];

                // The energy block needs grad(hat_i).grad(hat_j); fold the
                // vectors through scalar slots by three passes per pair is
                // wasteful, so special-case here.
                auto accumulate_vec =
                    [&](Eigen::MatrixXd& M,
                        const std::vector<detail::QuadraticTerm>& terms) {
                        for (const auto& term : terms) {
                            if (term.coeff == 0.0) continue;
                            const double w = term.coeff * measure *
                                             singular_weight(d.abs_x, term.a,
                                                             spec);
                            if (w == 0.0) continue;
                            const double alpha =
                                term.mass ? w * term.mass(d) : 0.0;
                            const double beta =
                                term.energy ? w * term.energy(d) : 0.0;
                            for (int i = 0; i < 3; ++i) {
                                if (dof[i] < 0) continue;
                                for (int j = 0; j < 3; ++j) {
                                    if (dof[j] < 0) continue;
                                    double v = 0.0;
                                    if (alpha != 0.0) v += alpha * b[i] * b[j];
                                    if (beta != 0.0)
                                        v += beta * ghat[i].dot(ghat[j]);
                                    M(dof[i], dof[j]) += v;
                                }
                            }
                        }
                    };
                accumulate_vec(B, q.lhs);
                accumulate_vec(A1, q.rhs);
                if (q.holder_rhs) accumulate_vec(A2, q.rhs2);
            }
        }

        std::vector<std::size_t> vtx_of(m_adm);
        for (std::size_t v = 0; v < m.num_vertices(); ++v)
            if (dof_of[v] >= 0) vtx_of[dof_of[v]] = v;
        const std::size_t nv = m.num_vertices();
        out.make_field = [vtx_of, nv](const Eigen::VectorXd& c) {
            std::vector<double> vals(nv, 0.0);
            for (std::size_t i = 0; i < vtx_of.size(); ++i)
                vals[vtx_of[i]] = c[static_cast<Eigen::Index>(i)];
            return make_per_vertex_field(std::move(vals), "basis_combination");
        };
    } else {
        if (s.is_mesh())
            throw BadSpec("radial basis requested on a mesh surface");
        const RevolutionHypersurface& rev = s.revolution();
        const int K = basis.nodes;
        if (K < 3) throw ParamOutOfRange("radial basis needs >= 3 nodes");

        // Hat nodes in the profile parameter; log spacing maps a geometric
        // ladder in |x| back to t through the sampled radius (useful only
        // when |x| is monotone in t, e.g. flat annuli).
        std::vector<double> T(K);
        if (basis.log_spacing) {
            const double x0 = rev.abs_x(rev.t0), x1 = rev.abs_x(rev.t1);
            if (!(x0 > 0.0) || !(x1 > 0.0))
                throw BadSpec("log-spaced basis needs |x| > 0 at both ends");
            for (int i = 0; i < K; ++i) {
                const double xi =
                    x0 * std::pow(x1 / x0, double(i) / (K - 1));
                // Invert |x|(t) by bisection; assumes monotone profiles.
                double lo = rev.t0, hi = rev.t1;
                const bool incr = x1 > x0;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    ((rev.abs_x(mid) < xi) == incr ? lo : hi) = mid;
                }
                T[i] = 0.5 * (lo + hi);
            }
            T.front() = rev.t0;
            T.back() = rev.t1;
        } else {
            for (int i = 0; i < K; ++i)
                T[i] = rev.t0 + (rev.t1 - rev.t0) * i / (K - 1);
        }

        // Drop nodes pinned by admissibility: ends where the profile does
        // not close up (boundary circles).
        std::vector<int> dof_of(K);
        int m_adm = 0;
        for (int i = 0; i < K; ++i) {
            const bool pinned = (i == 0 && !s.end_closed(false)) ||
                                (i == K - 1 && !s.end_closed(true));
            dof_of[i] = pinned ? -1 : m_adm++;
        }
        out.m = m_adm;
        B = Eigen::MatrixXd::Zero(m_adm, m_adm);
        A1 = B;
        A2 = B;

        const double sphere = unit_sphere_area(rev.n - 1);
        const GaussLegendre gl = gauss_legendre(spec.profile_gl_order);
        const int sub = std::max(
            2, (spec.profile_panels + K - 2) / (K - 1));  // panels per interval

        for (int iv = 0; iv + 1 < K; ++iv) {
            const double width = T[iv + 1] - T[iv];
            const double hslope[2] = {-1.0 / width, 1.0 / width};
            const int dof[2] = {dof_of[iv], dof_of[iv + 1]};
            if (dof[0] < 0 && dof[1] < 0) continue;
            for (int pnl = 0; pnl < sub; ++pnl) {
                const double a0 = T[iv] + width * pnl / sub;
                const double span = width / sub;
                for (std::size_t qi = 0; qi < gl.node.size(); ++qi) {
                    const double t = a0 + 0.5 * span * (gl.node[qi] + 1.0);
                    const ProfilePoint p = rev.at(t);
                    PointData d;
                    d.abs_x = std::hypot(p.r, p.z);
                    d.H = rev.mean_curvature(t);
                    d.xnu = d.abs_x > 0.0
                                ? (p.r * p.zp - p.z * p.rp) / d.abs_x
                                : 0.0;
                    const double measure = sphere *
                                           std::pow(p.r, rev.n - 1) * 0.5 *
                                           span * gl.weight[qi];
                    // Arc-length profile: |grad_T phi| = |dphi/dt|.
                    const double h[2] = {(T[iv + 1] - t) / width,
                                         (t - T[iv]) / width};
                    accumulate(B, q.lhs, d, measure, h, hslope, dof, 2);
                    accumulate(A1, q.rhs, d, measure, h, hslope, dof, 2);
                    if (q.holder_rhs)
                        accumulate(A2, q.rhs2, d, measure, h, hslope, dof, 2);
                }
            }
        }

        // phi_c as a radial field g(|x|) when |x| is strictly monotone along
        // the profile; otherwise no evaluator-compatible reconstruction.
        std::vector<double> X(K);
        for (int i = 0; i < K; ++i) X[i] = rev.abs_x(T[i]);
        bool monotone = true;
        for (int i = 0; i + 1 < K; ++i)
            if (!(X[i + 1] > X[i] + 1e-12 * s.scale())) monotone = false;
        if (monotone) {
            auto dof_copy = dof_of;
            out.make_field = [X, dof_copy](const Eigen::VectorXd& c) {
                const int K = static_cast<int>(X.size());
                auto coef = [=](int i) {
                    return dof_copy[i] >= 0 ? c[dof_copy[i]] : 0.0;
                };
                auto g = [=](double x) {
                    if (x <= X.front()) return coef(0);
                    if (x >= X.back()) return coef(K - 1);
                    int lo = 0, hi = K - 1;
                    while (hi - lo > 1) {
                        const int mid = (lo + hi) / 2;
                        (X[mid] <= x ? lo : hi) = mid;
                    }
                    const double u = (x - X[lo]) / (X[lo + 1] - X[lo]);
                    return (1.0 - u) * coef(lo) + u * coef(lo + 1);
                };
                auto dg = [=](double x) {
                    if (x <= X.front() || x >= X.back()) return 0.0;
                    int lo = 0, hi = K - 1;
                    while (hi - lo > 1) {
                        const int mid = (lo + hi) / 2;
                        (X[mid] <= x ? lo : hi) = mid;
                    }
                    return (coef(lo + 1) - coef(lo)) / (X[lo + 1] - X[lo]);
                };
                ScalarField f = make_radial_field(g, dg, X.front(), X.back(),
                                                  "basis_combination");
                f.has_support_annulus = false;
                return f;
            };
        }
    }

    if (!q.holder_rhs) {
        out.A = A1;
    } else {
        // RHS is sqrt(Q1 Q2) = min over e > 0 of (e Q1 + Q2 / e) / 2, so any
        // fixed e gives a quadratic upper bound for the RHS and lambda_min
        // computed from it still certifies the inequality. Pick e optimal at
        // the all-ones vector so known constant equality cases stay exact.
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(out.m);
        const double q1 = ones.dot(A1 * ones);
        const double q2 = ones.dot(A2 * ones);
        const double e = (q1 > 0.0 && q2 > 0.0) ? std::sqrt(q2 / q1) : 1.0;
        out.A = 0.5 * (e * A1 + A2 / e);
    }
    out.B = B;
    // Symmetrize away accumulation round-off.
    out.A = 0.5 * (out.A + out.A.transpose()).eval();
    out.B = 0.5 * (out.B + out.B.transpose()).eval();
    return out;
}

struct RayleighResult {
    double lambda_min = 0.0;
    Eigen::VectorXd c;
    int iterations = 0;
};

// Smallest generalized Rayleigh quotient c'Ac / c'Bc. Solved as the largest
// eigenvalue mu of B v = mu A v, which only needs A positive definite; a
// B-kernel contributes mu = 0 and never interferes with the maximum.
inline RayleighResult min_generalized_rayleigh(const FormPair& F) {
    if (F.m <= 0) throw SingularPencil("empty admissible subspace");
    const double asym = (F.A - F.A.transpose()).cwiseAbs().maxCoeff();
    const double bsym = (F.B - F.B.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max({F.A.cwiseAbs().maxCoeff(),
                                   F.B.cwiseAbs().maxCoeff(), 1e-300});
    if (asym > 1e-12 * scale || bsym > 1e-12 * scale)
        throw SingularPencil("forms are not symmetric");

    Eigen::LDLT<Eigen::MatrixXd> ldlt(F.A);
    if (ldlt.info() != Eigen::Success ||
        ldlt.vectorD().minCoeff() <= 1e-14 * scale)
        throw SingularPencil("RHS form is not positive definite on the "
                             "admissible subspace");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(F.B, F.A);
    if (es.info() != Eigen::Success)
        throw SolverStall("generalized eigensolver did not converge");

    const double mu = es.eigenvalues()[F.m - 1];
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw SingularPencil("LHS form vanishes on the admissible subspace");

    RayleighResult out;
    out.iterations = F.m;  // dense solve: one sweep over the spectrum
    out.lambda_min = 1.0 / mu;
    Eigen::VectorXd x = es.eigenvectors().col(F.m - 1);
    out.c = x / x.norm();
    // Sign convention: make the largest-magnitude entry positive.
    Eigen::Index imax;
    out.c.cwiseAbs().maxCoeff(&imax);
    if (out.c[imax] < 0.0) out.c = -out.c;
    return out;
}

struct QuotientResult {
    double quotient = 0.0;
    Eigen::VectorXd c;
    ScalarField field;
    int evaluations = 0;
};

// General-p quotient probe: projected gradient descent for min RHS/LHS over
// unit coefficient vectors, 8 seeded multistarts, finite-difference
// gradients. No global-optimality claim; the result upper-bounds the true
// infimum over the basis subspace.
inline QuotientResult optimize_quotient(const Surface& s,
                                        const std::string& name,
                                        const EvalParams& prm,
                                        const BasisSpec& basis,
                                        const QuadratureSpec& spec,
                                        std::uint64_t seed = 0x0b7a1135eedull,
                                        const Eigen::VectorXd* start = nullptr,
                                        int max_iterations = 60) {
    detail::require_p(prm.p);
    // Basis plumbing (dimension, admissibility, reconstruction) is shared
    // with the quadratic assembly; a throwaway carrier inequality supplies it.
    EvalParams carrier;
    carrier.p = 2.0;
    carrier.a = 0.0;
    carrier.r = 1.0;
    const FormPair F =
        assemble_forms(s, "weighted_poincare", carrier, basis, spec);
    if (!F.make_field)
        throw BadSpec("basis has no field reconstruction on " + s.name());

    int evals = 0;
    auto quotient = [&](const Eigen::VectorXd& c) {
        ++evals;
        const InequalityReport rep =
            evaluate(name, s, F.make_field(c), prm, spec);
        if (!(rep.lhs > 0.0) || !std::isfinite(rep.rhs))
            return std::numeric_limits<double>::infinity();
        return rep.rhs / rep.lhs;
    };

    QuotientResult best;
    best.quotient = std::numeric_limits<double>::infinity();

    for (int ms = 0; ms < 8; ++ms) {
        Eigen::VectorXd c(F.m);
        if (ms == 0 && start) {
            c = *start;
        } else if (ms == 0) {
            c.setOnes();
        } else {
            SplitMixRng rng(split_stream(seed, ms));
            for (int i = 0; i < F.m; ++i)
                c[i] = 0.25 + rng.next_double();  // positive bias
        }
        if (c.norm() == 0.0) continue;
        c.normalize();

        double f = quotient(c);
        if (!std::isfinite(f)) continue;

        double step = 0.25;
        for (int it = 0; it < max_iterations; ++it) {
            // Finite-difference gradient, projected onto the unit sphere.
            Eigen::VectorXd g(F.m);
            const double h = 1e-5;
            for (int i = 0; i < F.m; ++i) {
                Eigen::VectorXd cp = c;
                cp[i] += h;
                g[i] = (quotient(cp) - f) / h;
            }
            g -= g.dot(c) * c;
            const double gn = g.norm();
            if (!(gn > 1e-12 * std::max(1.0, std::abs(f)))) break;

            bool moved = false;
            while (step > 1e-10) {
                Eigen::VectorXd cn = c - (step / gn) * g;
                cn.normalize();
                const double fn = quotient(cn);
                if (fn < f - 1e-14 * std::abs(f)) {
                    const double drop = (f - fn) / std::max(std::abs(f), 1e-300);
                    c = cn;
                    f = fn;
                    moved = true;
                    step = std::min(0.25, step * 2.0);
                    if (drop < 1e-9) it = max_iterations;  // converged
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        if (f < best.quotient) {
            best.quotient = f;
            best.c = c;
        }
    }

    if (!std::isfinite(best.quotient))
        throw SolverStall("no multistart produced a finite quotient for " +
                          name + " on " + s.name());
    best.field = F.make_field(best.c);
    best.evaluations = evals;
    return best;
}

}  // namespace hsi
