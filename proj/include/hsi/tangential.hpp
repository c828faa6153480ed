#pragma once

// Discrete tangential calculus: piecewise-linear gradients, tangential
// divergence, integration-by-parts residuals and the position-vector
// identities used throughout the inequality evaluators.

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "hsi/core.hpp"
#include "hsi/fields.hpp"
#include "hsi/mesh.hpp"

namespace hsi {

// Piecewise-linear gradient of a per-vertex scalar field, constant per face
// and lying in the face plane.
inline std::vector<Vec3> tangential_gradient(const SimplicialHypersurface& m,
                                             const std::vector<double>& f) {
    if (f.size() != m.num_vertices())
        throw FieldSizeMismatch("tangential_gradient: field/vertex count");
    std::vector<Vec3> grad(m.num_faces());
    for (std::size_t fi = 0; fi < m.num_faces(); ++fi) {
        const Tri& t = m.triangles[fi];
        const Vec3& p0 = m.vertices[t[0]];
        const Vec3& p1 = m.vertices[t[1]];
        const Vec3& p2 = m.vertices[t[2]];
        const Vec3& n = m.per_face_normal[fi];
        const double inv2A = 0.5 / m.per_face_area[fi];
        const Vec3 gl1 = inv2A * n.cross(p0 - p2);
        const Vec3 gl2 = inv2A * n.cross(p1 - p0);
        grad[fi] = (f[t[1]] - f[t[0]]) * gl1 + (f[t[2]] - f[t[0]]) * gl2;
    }
    return grad;
}

inline std::vector<Vec3> tangential_gradient(const SimplicialHypersurface& m,
                                             const ScalarField& phi) {
    return tangential_gradient(m, sample_vertices(m, phi));
}

// Tangential divergence div_T Z = sum_i delta_i Z^i, per face.
// Per-vertex (or callable, sampled to vertices) fields are interpreted as
// piecewise-linear in each ambient component; the divergence is the trace of
// the tangential Jacobian. A per-face field is constant within each face and
// its per-face divergence vanishes.
inline std::vector<double> tangential_divergence(
    const SimplicialHypersurface& m, const std::vector<Vec3>& z_vertex) {
    if (z_vertex.size() != m.num_vertices())
        throw FieldSizeMismatch("tangential_divergence: field/vertex count");
    std::vector<double> comp(m.num_vertices());
    std::vector<double> div(m.num_faces(), 0.0);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t v = 0; v < m.num_vertices(); ++v)
            comp[v] = z_vertex[v][c];
        const std::vector<Vec3> g = tangential_gradient(m, comp);
        for (std::size_t fi = 0; fi < m.num_faces(); ++fi) div[fi] += g[fi][c];
    }
    return div;
}

inline std::vector<double> tangential_divergence(
    const SimplicialHypersurface& m, const VectorField& z) {
    if (z.kind == VectorField::Kind::per_face) {
        if (z.values.size() != m.num_faces())
            throw FieldSizeMismatch("tangential_divergence: per-face size");
        return std::vector<double>(m.num_faces(), 0.0);
    }
    return tangential_divergence(m, sample_vertices(m, z));
}

// Mean curvature accessors (populated at build time).
struct MeanCurvature {
    std::vector<double> H;       // scalar, sum convention
    std::vector<Vec3> Hvec;      // mean curvature vector H nu
};

inline MeanCurvature mean_curvature(const SimplicialHypersurface& m) {
    MeanCurvature mc;
    mc.H = m.per_vertex_mean_curvature;
    mc.Hvec.resize(m.num_vertices());
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
        mc.Hvec[v] = mc.H[v] * m.per_vertex_normal[v];
    return mc;
}

// ---------------------------------------------------------------------------
// Identity residuals: div_T x = n, div_T x_T = n - (x.nu) H, and the
// lower bound for Laplace|x|.

struct IdentityResiduals {
    double res_div_x = 0.0;        // max over faces |div_T x - n|
    double res_div_xT = 0.0;       // L2 norm of div_T x_T - (n - (x.nu) H)
    double slack_lap_radius = 0.0; // min over interior vertices of
                                   // Lap|x| - (n-1)/|x| + (x/|x| . nu) H
};

inline IdentityResiduals identity_residuals(const SimplicialHypersurface& m,
                                            double origin_delta = 1e-8) {
    const int n = m.intrinsic_dim();
    if (m.min_abs_x() < origin_delta)
        throw OriginOnSurface("min |x| below " + std::to_string(origin_delta));

    IdentityResiduals out;

    const std::vector<double> div_x = tangential_divergence(m, m.vertices);
    for (double d : div_x)
        out.res_div_x = std::max(out.res_div_x, std::abs(d - n));

    std::vector<Vec3> xt(m.num_vertices());
    std::vector<double> target_v(m.num_vertices());
    for (std::size_t v = 0; v < m.num_vertices(); ++v) {
        const double xnu = m.vertices[v].dot(m.per_vertex_normal[v]);
        xt[v] = m.vertices[v] - xnu * m.per_vertex_normal[v];
        target_v[v] = n - xnu * m.per_vertex_mean_curvature[v];
    }
    const std::vector<double> div_xt = tangential_divergence(m, xt);
    {
        std::vector<double> sq;
        sq.reserve(m.num_faces());
        for (std::size_t fi = 0; fi < m.num_faces(); ++fi) {
            const Tri& t = m.triangles[fi];
            if (m.vertex_on_collar[t[0]] || m.vertex_on_collar[t[1]] ||
                m.vertex_on_collar[t[2]])
                continue;  // x_T is not PL-representable across the boundary
            const double tgt =
                (target_v[t[0]] + target_v[t[1]] + target_v[t[2]]) / 3.0;
            const double d = div_xt[fi] - tgt;
            sq.push_back(m.per_face_area[fi] * d * d);
        }
        out.res_div_xT = std::sqrt(pairwise_sum(sq));
    }

    std::vector<double> absx(m.num_vertices());
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
        absx[v] = m.vertices[v].norm();
    const std::vector<double> lap = laplace_beltrami(m, absx);
    double slack = std::numeric_limits<double>::max();
    for (std::size_t v = 0; v < m.num_vertices(); ++v) {
        if (m.vertex_on_collar[v]) continue;
        const double r = absx[v];
        const double xnu = m.vertices[v].dot(m.per_vertex_normal[v]) / r;
        slack = std::min(slack, lap[v] - (n - 1) / r +
                                    xnu * m.per_vertex_mean_curvature[v]);
    }
    out.slack_lap_radius = slack;
    return out;
}

// ---------------------------------------------------------------------------
// Integration-by-parts residuals.

struct IbpResiduals {
    std::array<double, 3> res_scalar{0.0, 0.0, 0.0};
    double res_vector = 0.0;
    double res_divthm = 0.0;
};

namespace detail {

inline bool vanishes_on_collar(const SimplicialHypersurface& m,
                               const std::vector<double>& f) {
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
        if (m.vertex_on_collar[v] && std::abs(f[v]) > 1e-14) return false;
    return true;
}

}  // namespace detail

// res_scalar[i] = |int (delta_i v) w + int v (delta_i w) - int v w H nu^i|.
// res_vector is the analogue for a vector field Z, and res_divthm checks the
// divergence formula for a tangent Z on a face subset Omega.
inline IbpResiduals ibp_residuals(const SimplicialHypersurface& m,
                                  const ScalarField& v_field,
                                  const ScalarField& w_field,
                                  const VectorField& z_field,
                                  const std::vector<std::uint32_t>& omega) {
    const std::vector<double> v = sample_vertices(m, v_field);
    const std::vector<double> w = sample_vertices(m, w_field);
    if (!m.boundary_edges.empty() && !detail::vanishes_on_collar(m, v) &&
        !detail::vanishes_on_collar(m, w))
        throw SupportViolation(
            "neither v nor w vanishes on the boundary collar");

    IbpResiduals out;
    const std::vector<Vec3> gv = tangential_gradient(m, v);
    const std::vector<Vec3> gw = tangential_gradient(m, w);

    for (int i = 0; i < 3; ++i) {
        Accumulator acc;
        for (std::size_t fi = 0; fi < m.num_faces(); ++fi) {
            const Tri& t = m.triangles[fi];
            const double vbar = (v[t[0]] + v[t[1]] + v[t[2]]) / 3.0;
            const double wbar = (w[t[0]] + w[t[1]] + w[t[2]]) / 3.0;
            acc.add(m.per_face_area[fi] * (gv[fi][i] * wbar + gw[fi][i] * vbar));
        }
        for (std::size_t vi = 0; vi < m.num_vertices(); ++vi)
            acc.add(-m.per_vertex_area[vi] * v[vi] * w[vi] *
                    m.per_vertex_mean_curvature[vi] *
                    m.per_vertex_normal[vi][i]);
        out.res_scalar[i] = std::abs(acc.total());
    }

    // Vector version: int v div_T Z + int grad_T v . Z - int v Z . Hvec = 0.
    {
        const std::vector<Vec3> z = sample_vertices(m, z_field);
        const std::vector<double> divz = tangential_divergence(m, z);
        Accumulator acc;
        for (std::size_t fi = 0; fi < m.num_faces(); ++fi) {
            const Tri& t = m.triangles[fi];
            const double vbar = (v[t[0]] + v[t[1]] + v[t[2]]) / 3.0;
            const Vec3 zbar = (z[t[0]] + z[t[1]] + z[t[2]]) / 3.0;
            acc.add(m.per_face_area[fi] *
                    (vbar * divz[fi] + gv[fi].dot(zbar)));
        }
        for (std::size_t vi = 0; vi < m.num_vertices(); ++vi)
            acc.add(-m.per_vertex_area[vi] * v[vi] *
                    m.per_vertex_mean_curvature[vi] *
                    z[vi].dot(m.per_vertex_normal[vi]));
        out.res_vector = std::abs(acc.total());
    }

    // Divergence theorem on Omega for a tangent PL field.
    {
        const std::vector<Vec3> z = sample_vertices(m, z_field);
        const std::vector<double> divz = tangential_divergence(m, z);
        std::set<std::uint32_t> omega_set(omega.begin(), omega.end());
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>
            edge_face;
        for (std::uint32_t fi : omega) {
            const Tri& t = m.triangles[fi];
            for (int k = 0; k < 3; ++k)
                edge_face[{t[k], t[(k + 1) % 3]}] = fi;
        }
        Accumulator interior;
        Accumulator boundary;
        for (std::uint32_t fi : omega) {
            interior.add(m.per_face_area[fi] * divz[fi]);
            const Tri& t = m.triangles[fi];
            for (int k = 0; k < 3; ++k) {
                const auto a = t[k], b = t[(k + 1) % 3];
                // Neighbor across (a, b) inside Omega?
                if (edge_face.count({b, a})) continue;
                const Vec3 edge = m.vertices[b] - m.vertices[a];
                Vec3 conormal = edge.cross(m.per_face_normal[fi]);
                conormal.normalize();
                // Orient away from the opposite vertex.
                const Vec3& opp = m.vertices[t[(k + 2) % 3]];
                const Vec3 mid = 0.5 * (m.vertices[a] + m.vertices[b]);
                if (conormal.dot(mid - opp) < 0.0) conormal = -conormal;
                const double len = edge.norm();
                boundary.add(0.5 * len * (z[a] + z[b]).dot(conormal));
            }
        }
        out.res_divthm = std::abs(interior.total() - boundary.total());
    }
    return out;
}

}  // namespace hsi
