#pragma once

// Region measures (area, relative perimeter, curvature mass), the
// isoperimetric inequality in its global / ball-restricted / flat-equality
// forms, and the monotonicity profile whose rho -> 0 limit is the unit-ball
// volume.

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "hsi/core.hpp"
#include "hsi/mesh.hpp"
#include "hsi/report.hpp"
#include "hsi/surface.hpp"

namespace hsi {

struct RegionMeasures {
    double area = 0.0;
    double perimeter = 0.0;       // boundary edge chain length
    double curvature_mass = 0.0;  // int_E |H|
    std::size_t boundary_edge_count = 0;
};

namespace detail {

inline std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>
directed_edge_faces(const SimplicialHypersurface& m,
                    const std::vector<std::uint32_t>& faces) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> out;
    for (std::uint32_t f : faces) {
        const Tri& t = m.triangles[f];
        for (int k = 0; k < 3; ++k) out[{t[k], t[(k + 1) % 3]}] = f;
    }
    return out;
}

// Face-averaged |H| from vertex values.
inline double face_abs_H(const SimplicialHypersurface& m, std::uint32_t f) {
    const Tri& t = m.triangles[f];
    return (std::abs(m.per_vertex_mean_curvature[t[0]]) +
            std::abs(m.per_vertex_mean_curvature[t[1]]) +
            std::abs(m.per_vertex_mean_curvature[t[2]])) / 3.0;
}

}  // namespace detail

inline RegionMeasures region_measures(const SimplicialHypersurface& m,
                                      const std::vector<std::uint32_t>& faces) {
    for (std::uint32_t f : faces) {
        if (f >= m.num_faces()) throw BadSpec("region face index out of range");
        const Tri& t = m.triangles[f];
        for (std::uint32_t v : t)
            if (m.vertex_on_boundary[v])
                throw TouchesBoundary(
                    "region face touches the mesh boundary");
    }
    RegionMeasures out;
    std::vector<double> areas, hmass;
    const auto edge_face = detail::directed_edge_faces(m, faces);
    std::vector<double> perim;
    for (std::uint32_t f : faces) {
        areas.push_back(m.per_face_area[f]);
        hmass.push_back(m.per_face_area[f] * detail::face_abs_H(m, f));
        const Tri& t = m.triangles[f];
        for (int k = 0; k < 3; ++k) {
            const auto a = t[k], b = t[(k + 1) % 3];
            if (edge_face.count({b, a})) continue;  // interior edge
            perim.push_back((m.vertices[b] - m.vertices[a]).norm());
            ++out.boundary_edge_count;
        }
    }
    out.area = pairwise_sum(areas);
    out.curvature_mass = pairwise_sum(hmass);
    out.perimeter = pairwise_sum(perim);
    return out;
}

// --------------------------------------------------------------------------
// Exact clipping of a triangle against the ball B_rho(y): the ball cuts the
// triangle's plane in a disk, so the problem is 2D polygon-vs-circle.

namespace detail {

struct Clip2D {
    double area = 0.0;        // triangle ∩ disk
    double arc_length = 0.0;  // circle boundary inside the triangle
    bool crossed = false;     // circle actually intersects the triangle
};

// Signed contribution of edge (a, b) to the area of polygon ∩ disk of
// radius R centered at the origin: pieces of the edge inside the disk
// contribute triangle areas, pieces outside contribute circular sectors.
inline double edge_disk_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                             double R) {
    auto cross = [](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
        return u.x() * v.y() - u.y() * v.x();
    };
    // Segment-circle intersection parameters.
    const Eigen::Vector2d d = b - a;
    const double qa = d.squaredNorm();
    std::vector<double> ts = {0.0, 1.0};
    if (qa > 0.0) {
        const double qb = 2.0 * a.dot(d);
        const double qc = a.squaredNorm() - R * R;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            for (double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)})
                if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const Eigen::Vector2d p = a + ts[i] * d;
        const Eigen::Vector2d q = a + ts[i + 1] * d;
        const Eigen::Vector2d mid = 0.5 * (p + q);
        if (mid.squaredNorm() <= R * R) {
            area += 0.5 * cross(p, q);
        } else {
            // Sector between the endpoint directions, wrapped to (-pi, pi].
            double dth = std::atan2(q.y(), q.x()) - std::atan2(p.y(), p.x());
            while (dth > std::numbers::pi) dth -= 2.0 * std::numbers::pi;
            while (dth <= -std::numbers::pi) dth += 2.0 * std::numbers::pi;
            area += 0.5 * R * R * dth;
        }
    }
    return area;
}

inline bool point_in_triangle_2d(const Eigen::Vector2d& p,
                                 const Eigen::Vector2d& v0,
                                 const Eigen::Vector2d& v1,
                                 const Eigen::Vector2d& v2) {
    auto side = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
        return (b.x() - a.x()) * (c.y() - a.y()) -
               (b.y() - a.y()) * (c.x() - a.x());
    };
    const double s0 = side(v0, v1, p), s1 = side(v1, v2, p), s2 = side(v2, v0, p);
    const bool has_neg = s0 < 0 || s1 < 0 || s2 < 0;
    const bool has_pos = s0 > 0 || s1 > 0 || s2 > 0;
    return !(has_neg && has_pos);
}

inline Clip2D clip_triangle_ball(const Vec3& p0, const Vec3& p1,
                                 const Vec3& p2, const Vec3& center,
                                 double rho) {
    Clip2D out;
    // Plane frame.
    const Vec3 e1r = p1 - p0;
    Vec3 nrm = e1r.cross(p2 - p0);
    const double nlen = nrm.norm();
    if (nlen == 0.0) return out;
    nrm /= nlen;
    const Vec3 e1 = e1r.normalized();
    const Vec3 e2 = nrm.cross(e1);
    const double dist = (p0 - center).dot(nrm);
    const double rr = rho * rho - dist * dist;
    if (rr <= 0.0) return out;  // plane misses the ball
    const double R = std::sqrt(rr);
    const Vec3 c3 = center + dist * nrm;  // disk center in the plane
    auto to2d = [&](const Vec3& p) {
        return Eigen::Vector2d((p - c3).dot(e1), (p - c3).dot(e2));
    };
    Eigen::Vector2d v0 = to2d(p0), v1 = to2d(p1), v2 = to2d(p2);
    // Reject triangles that do not meet the disk at all; without this the
    // sector bookkeeping below can leave roundoff-sized areas behind.
    if (!point_in_triangle_2d(Eigen::Vector2d::Zero(), v0, v1, v2)) {
        auto seg_dist = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
            const Eigen::Vector2d d = b - a;
            const double qa = d.squaredNorm();
            const double t =
                qa > 0.0 ? std::clamp(-a.dot(d) / qa, 0.0, 1.0) : 0.0;
            return (a + t * d).norm();
        };
        if (seg_dist(v0, v1) >= R && seg_dist(v1, v2) >= R &&
            seg_dist(v2, v0) >= R)
            return out;
    }
    // CCW orientation in the chosen frame.
    const double twice =
        (v1.x() - v0.x()) * (v2.y() - v0.y()) -
        (v1.y() - v0.y()) * (v2.x() - v0.x());
    if (twice < 0.0) std::swap(v1, v2);

    out.area = edge_disk_area(v0, v1, R) + edge_disk_area(v1, v2, R) +
               edge_disk_area(v2, v0, R);
    out.area = std::max(0.0, out.area);

    // Arc length: split the circle at its edge intersections and keep the
    // angular intervals whose midpoints are inside the triangle.
    std::vector<double> angles;
    const Eigen::Vector2d* vs[4] = {&v0, &v1, &v2, &v0};
    for (int e = 0; e < 3; ++e) {
        const Eigen::Vector2d a = *vs[e], d = *vs[e + 1] - *vs[e];
        const double qa = d.squaredNorm();
        if (qa == 0.0) continue;
        const double qb = 2.0 * a.dot(d);
        const double qc = a.squaredNorm() - R * R;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc <= 0.0) continue;
        const double sq = std::sqrt(disc);
        for (double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)})
            if (t >= 0.0 && t <= 1.0) {
                const Eigen::Vector2d p = a + t * d;
                angles.push_back(std::atan2(p.y(), p.x()));
            }
    }
    std::sort(angles.begin(), angles.end());
    out.crossed = !angles.empty();
    std::vector<double> arcs;
    const std::size_t na = angles.size();
    if (na == 0) {
        const Eigen::Vector2d probe(R, 0.0);
        if (point_in_triangle_2d(probe, v0, v1, v2))
            arcs.push_back(2.0 * std::numbers::pi * R);
    } else {
        for (std::size_t i = 0; i < na; ++i) {
            const double a0 = angles[i];
            const double a1 =
                i + 1 < na ? angles[i + 1] : angles[0] + 2.0 * std::numbers::pi;
            const double mid = 0.5 * (a0 + a1);
            const Eigen::Vector2d probe(R * std::cos(mid), R * std::sin(mid));
            if (point_in_triangle_2d(probe, v0, v1, v2))
                arcs.push_back(R * (a1 - a0));
        }
    }
    out.arc_length = pairwise_sum(arcs);
    return out;
}

// Length of segment (a, b) inside the ball.
inline double segment_in_ball(const Vec3& a, const Vec3& b, const Vec3& center,
                              double rho) {
    const Vec3 d = b - a;
    const Vec3 rel = a - center;
    const double qa = d.squaredNorm();
    if (qa == 0.0) return 0.0;
    const double qb = 2.0 * rel.dot(d);
    const double qc = rel.squaredNorm() - rho * rho;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) return qc <= 0.0 ? std::sqrt(qa) : 0.0;
    const double sq = std::sqrt(disc);
    const double t0 = std::clamp((-qb - sq) / (2.0 * qa), 0.0, 1.0);
    const double t1 = std::clamp((-qb + sq) / (2.0 * qa), 0.0, 1.0);
    return (t1 - t0) * std::sqrt(qa);
}

}  // namespace detail

struct BallRegionMeasures {
    double area = 0.0;              // |E ∩ B_rho(y)|
    double perimeter = 0.0;         // relative perimeter of E ∩ B_rho
    double edge_perimeter = 0.0;    // the |∂E ∩ B_rho| part alone
    double curvature_mass = 0.0;    // int over E ∩ B_rho of |H|
    std::size_t crossing_faces = 0;  // quality flag: faces cut by ∂B_rho
};

inline BallRegionMeasures ball_region_measures(
    const SimplicialHypersurface& m, const std::vector<std::uint32_t>& faces,
    const Vec3& y, double rho) {
    BallRegionMeasures out;
    std::vector<double> areas, hmass, arcs, edges;
    const auto edge_face = detail::directed_edge_faces(m, faces);
    for (std::uint32_t f : faces) {
        const Tri& t = m.triangles[f];
        const detail::Clip2D clip = detail::clip_triangle_ball(
            m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]], y, rho);
        if (clip.area <= 0.0 && clip.arc_length <= 0.0) continue;
        areas.push_back(clip.area);
        hmass.push_back(clip.area * detail::face_abs_H(m, f));
        arcs.push_back(clip.arc_length);
        if (clip.crossed) ++out.crossing_faces;
        for (int k = 0; k < 3; ++k) {
            const auto a = t[k], b = t[(k + 1) % 3];
            if (edge_face.count({b, a})) continue;
            edges.push_back(detail::segment_in_ball(m.vertices[a],
                                                    m.vertices[b], y, rho));
        }
    }
    out.area = pairwise_sum(areas);
    out.curvature_mass = pairwise_sum(hmass);
    out.edge_perimeter = pairwise_sum(edges);
    out.perimeter = out.edge_perimeter + pairwise_sum(arcs);
    return out;
}

// --------------------------------------------------------------------------
// Inequality modes.

enum class IsoperimetricMode { global, ball, flat_equality };

inline InequalityReport eval_isoperimetric(
    const SimplicialHypersurface& m, const std::vector<std::uint32_t>& faces,
    IsoperimetricMode mode, const Vec3& y = Vec3::Zero(), double rho = 1.0) {
    const int n = m.intrinsic_dim();
    InequalityReport rep;
    rep.surface = m.name;
    rep.surface_fingerprint = m.fingerprint();
    rep.params = {{"n", double(n)}};
    const double h_rel = m.mean_edge_length() / m.bbox_diagonal();

    if (mode == IsoperimetricMode::ball) {
        if (!(rho > 0.0)) throw ParamOutOfRange("ball mode needs rho > 0");
        const BallRegionMeasures b = ball_region_measures(m, faces, y, rho);
        if (b.area <= 0.0)
            throw EmptyIntersection("E ∩ B_rho(y) has no area");
        rep.name = "isoperimetric_ball";
        rep.params.push_back({"r", rho});
        rep.lhs = n * b.area;
        rep.lhs_terms.push_back({"scaled_area", rep.lhs, 0.0});
        rep.rhs = rho * (b.perimeter + b.curvature_mass);
        rep.rhs_terms.push_back({"perimeter_term", rho * b.perimeter, 0.0});
        rep.rhs_terms.push_back(
            {"curvature_term", rho * b.curvature_mass, 0.0});
        rep.extras = {{"crossing_faces", double(b.crossing_faces)}};
    } else {
        const RegionMeasures r = region_measures(m, faces);
        if (mode == IsoperimetricMode::flat_equality) {
            double hmax = 0.0;
            std::set<std::uint32_t> used;
            for (std::uint32_t f : faces)
                for (std::uint32_t v : m.triangles[f]) used.insert(v);
            for (std::uint32_t v : used)
                hmax = std::max(hmax,
                                std::abs(m.per_vertex_mean_curvature[v]));
            if (hmax > 1e-6)
                throw NotFlat("flat_equality mode: max |H| = " +
                              std::to_string(hmax));
            rep.name = "isoperimetric_flat";
            rep.lhs = n * std::pow(unit_ball_volume(n), 1.0 / n) *
                      std::pow(r.area, (n - 1.0) / n);
            rep.lhs_terms.push_back({"scaled_area", rep.lhs, 0.0});
            rep.rhs = r.perimeter;
            rep.rhs_terms.push_back({"perimeter_term", rep.rhs, 0.0});
        } else {
            rep.name = "isoperimetric_global";
            rep.pass_fail_applies = false;
            rep.note = "empirical ratio; the constant is not explicit";
            rep.lhs = std::pow(r.area, (n - 1.0) / n);
            rep.lhs_terms.push_back({"area_power", rep.lhs, 0.0});
            rep.rhs = r.perimeter + r.curvature_mass;
            rep.rhs_terms.push_back({"perimeter_term", r.perimeter, 0.0});
            rep.rhs_terms.push_back({"curvature_term", r.curvature_mass, 0.0});
        }
    }
    rep.margin = rep.rhs - rep.lhs;
    rep.ratio = rep.rhs != 0.0 ? rep.lhs / rep.rhs
                               : (rep.lhs == 0.0 ? 1.0 : INFINITY);
    rep.tolerance = 2.0 * h_rel * std::max(std::abs(rep.lhs),
                                           std::abs(rep.rhs));
    return rep;
}

// Closed-form flat-equality check on a regular polygon with `sides` sides:
// the mesh-free analytic limit of the round-disk equality case.
inline InequalityReport flat_polygon_isoperimetry(int sides,
                                                  double circumradius = 1.0) {
    if (sides < 3) throw ParamOutOfRange("polygon needs >= 3 sides");
    InequalityReport rep;
    rep.name = "isoperimetric_flat";
    rep.surface = "regular_polygon(" + std::to_string(sides) + ")";
    rep.params = {{"n", 2.0}};
    const double m = sides;
    const double area =
        0.5 * m * circumradius * circumradius * std::sin(2.0 * std::numbers::pi / m);
    const double per = 2.0 * m * circumradius * std::sin(std::numbers::pi / m);
    rep.lhs = 2.0 * std::sqrt(std::numbers::pi * area);
    rep.rhs = per;
    rep.lhs_terms.push_back({"scaled_area", rep.lhs, 0.0});
    rep.rhs_terms.push_back({"perimeter_term", rep.rhs, 0.0});
    rep.margin = rep.rhs - rep.lhs;
    rep.ratio = rep.lhs / rep.rhs;
    rep.tolerance = 1e-12 * rep.rhs;
    return rep;
}

// --------------------------------------------------------------------------
// Monotonicity profile rho^(-n) |E_rho| exp( int_0^rho (|∂E ∩ B_sigma| +
// int_{E_sigma} |H|) / |E_sigma| d sigma ), nondecreasing with rho -> 0
// limit the unit-ball volume.

struct MonotonicityProfile {
    std::vector<double> rho;
    std::vector<double> value;
    double min_forward_difference = 0.0;
    double limit_estimate = 0.0;  // value at the smallest rho
};

inline MonotonicityProfile monotonicity_profile(
    const SimplicialHypersurface& m, const std::vector<std::uint32_t>& faces,
    const Vec3& y, std::vector<double> rho_grid) {
    const int n = m.intrinsic_dim();
    if (rho_grid.empty() || !std::is_sorted(rho_grid.begin(), rho_grid.end()))
        throw ParamOutOfRange("rho grid must be nonempty and increasing");
    // Jitter dodges tangency radii (the continuum statement holds a.e.).
    const double jitter = 1e-9 * m.bbox_diagonal();
    for (double& r : rho_grid) r += jitter;

    MonotonicityProfile out;
    double integral = 0.0;
    double prev_rho = 0.0, prev_rate = 0.0;
    bool have_prev = false;
    for (double rho : rho_grid) {
        const BallRegionMeasures b = ball_region_measures(m, faces, y, rho);
        if (b.area <= 0.0)
            throw EmptyIntersection("E ∩ B_rho(y) is empty at rho = " +
                                    std::to_string(rho));
        const double rate = (b.edge_perimeter + b.curvature_mass) / b.area;
        if (have_prev)
            integral += 0.5 * (rho - prev_rho) * (rate + prev_rate);
        else
            integral += rho * rate;  // rate is bounded near 0 on smooth points
        prev_rho = rho;
        prev_rate = rate;
        have_prev = true;
        out.rho.push_back(rho);
        out.value.push_back(std::pow(rho, -n) * b.area * std::exp(integral));
    }
    out.limit_estimate = out.value.front();
    out.min_forward_difference = 0.0;
    for (std::size_t i = 0; i + 1 < out.value.size(); ++i)
        out.min_forward_difference = std::min(
            out.min_forward_difference, out.value[i + 1] - out.value[i]);
    return out;
}

// Analytic path on the unit sphere: E a geodesic cap centered at y with
// chord radius `chord`. |E_rho| = pi rho^2 exactly (chord metric), the cap
// boundary stays outside B_rho for rho < chord, and |H| = 2, so the profile
// is pi exp(2 rho): nondecreasing with limit pi at rho -> 0.
inline MonotonicityProfile sphere_cap_profile_analytic(
    double chord, const std::vector<double>& rho_grid) {
    if (!(chord > 0.0 && chord < 2.0))
        throw ParamOutOfRange("cap chord radius in (0, 2)");
    MonotonicityProfile out;
    for (double rho : rho_grid) {
        if (rho >= chord)
            throw ParamOutOfRange("profile grid must stay inside the cap");
        out.rho.push_back(rho);
        out.value.push_back(std::numbers::pi * std::exp(2.0 * rho));
    }
    out.limit_estimate = out.value.front();
    out.min_forward_difference = 0.0;
    for (std::size_t i = 0; i + 1 < out.value.size(); ++i)
        out.min_forward_difference = std::min(
            out.min_forward_difference, out.value[i + 1] - out.value[i]);
    return out;
}

// Face subsets from simple predicates (CLI region specs).
inline std::vector<std::uint32_t> faces_in_ball(const SimplicialHypersurface& m,
                                                const Vec3& y, double rho) {
    std::vector<std::uint32_t> out;
    for (std::size_t f = 0; f < m.num_faces(); ++f) {
        const Tri& t = m.triangles[f];
        const Vec3 c = (m.vertices[t[0]] + m.vertices[t[1]] +
                        m.vertices[t[2]]) / 3.0;
        if ((c - y).norm() < rho) out.push_back(static_cast<std::uint32_t>(f));
    }
    return out;
}

inline std::vector<std::uint32_t> faces_upper_half(
    const SimplicialHypersurface& m, int axis = 2) {
    std::vector<std::uint32_t> out;
    for (std::size_t f = 0; f < m.num_faces(); ++f) {
        const Tri& t = m.triangles[f];
        const Vec3 c = (m.vertices[t[0]] + m.vertices[t[1]] +
                        m.vertices[t[2]]) / 3.0;
        if (c[axis] > 0.0) out.push_back(static_cast<std::uint32_t>(f));
    }
    return out;
}

}  // namespace hsi
