#pragma once

// Benchmark surfaces and test-function families, addressable by spec strings
// like "icosphere:subdiv=4" or "log_cutoff:eps=1e-4,R=1".

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "hsi/core.hpp"
#include "hsi/fields.hpp"
#include "hsi/mesh.hpp"
#include "hsi/revolution.hpp"
#include "hsi/surface.hpp"

namespace hsi {

// --------------------------------------------------------------------------
// Spec strings: "name:key=val,key=val".

struct ParsedSpec {
    std::string name;
    std::map<std::string, double> params;

    double get(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
    bool has(const std::string& key) const { return params.count(key) > 0; }
};

inline ParsedSpec parse_spec(const std::string& spec) {
    ParsedSpec out;
    const auto colon = spec.find(':');
    out.name = spec.substr(0, colon);
    if (out.name.empty()) throw BadSpec("empty spec string");
    if (colon == std::string::npos) return out;
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string item = rest.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw BadSpec("bad spec item '" + item + "' in '" + spec + "'");
        const std::string key = item.substr(0, eq);
        char* end = nullptr;
        const std::string valstr = item.substr(eq + 1);
        const double val = std::strtod(valstr.c_str(), &end);
        if (end == valstr.c_str() || *end != '\0')
            throw BadSpec("bad numeric value in '" + item + "'");
        out.params[key] = val;
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// --------------------------------------------------------------------------
// Mesh generators.

namespace detail {

// Flip to make per-face normals agree (on average) with a direction field.
inline SimplicialHypersurface oriented(
    SimplicialHypersurface m, const std::function<Vec3(const Vec3&)>& dir) {
    double dot = 0.0;
    for (std::size_t f = 0; f < m.num_faces(); ++f) {
        const Tri& t = m.triangles[f];
        const Vec3 c = (m.vertices[t[0]] + m.vertices[t[1]] +
                        m.vertices[t[2]]) / 3.0;
        dot += m.per_face_normal[f].dot(dir(c)) * m.per_face_area[f];
    }
    if (dot < 0.0) return flip_orientation(m);
    return m;
}

struct GridMesh {
    std::vector<Vec3> vertices;
    std::vector<Tri> triangles;
    // (nu + 1) x (nv + 1) vertex grid indices, possibly with seams merged.
    std::vector<std::vector<std::uint32_t>> index;
};

// Tensor-product grid over [0,1]^2 mapped by `point`, with optional wrap in
// either direction and optional pole collapse at v = 0 / v = 1.
inline GridMesh grid_mesh(int nu, int nv,
                          const std::function<Vec3(double, double)>& point,
                          bool wrap_u, bool wrap_v) {
    GridMesh g;
    g.index.assign(nu + 1, std::vector<std::uint32_t>(nv + 1, 0));
    for (int i = 0; i <= nu; ++i) {
        for (int j = 0; j <= nv; ++j) {
            if (wrap_u && i == nu) {
                g.index[i][j] = g.index[0][j];
                continue;
            }
            if (wrap_v && j == nv) {
                g.index[i][j] = g.index[i][0];
                continue;
            }
            g.index[i][j] = static_cast<std::uint32_t>(g.vertices.size());
            g.vertices.push_back(point(double(i) / nu, double(j) / nv));
        }
    }
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const std::uint32_t a = g.index[i][j], b = g.index[i + 1][j],
                                c = g.index[i + 1][j + 1], d = g.index[i][j + 1];
            g.triangles.push_back({a, b, c});
            g.triangles.push_back({a, c, d});
        }
    }
    return g;
}

}  // namespace detail

inline SimplicialHypersurface make_icosphere(int subdiv, double radius = 1.0,
                                             double perturb_amp = 0.0) {
    if (subdiv < 0 || subdiv > 7) throw BadSpec("icosphere subdiv in [0,7]");
    if (radius <= 0.0) throw BadSpec("icosphere radius must be > 0");
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {
        {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
    for (Vec3& p : v) p.normalize();
    std::vector<Tri> f = {
        {0, 11, 5},  {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},   {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},   {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},   {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int s = 0; s < subdiv; ++s) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
        auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            Vec3 p = (v[a] + v[b]).normalized();
            const std::uint32_t idx = static_cast<std::uint32_t>(v.size());
            v.push_back(p);
            mid[key] = idx;
            return idx;
        };
        std::vector<Tri> next;
        next.reserve(f.size() * 4);
        for (const Tri& t : f) {
            const std::uint32_t ab = midpoint(t[0], t[1]),
                                bc = midpoint(t[1], t[2]),
                                ca = midpoint(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }
    for (Vec3& p : v) {
        double r = radius;
        if (perturb_amp != 0.0) {
            // Smooth deterministic bump pattern; amp = 0 reproduces the
            // round sphere exactly.
            const double g = std::sin(3.0 * p.x()) * std::sin(2.0 * p.y()) +
                             std::cos(2.0 * p.z());
            r *= 1.0 + perturb_amp * 0.5 * g;
        }
        p *= r;
    }
    SimplicialHypersurface m = build_mesh(std::move(v), std::move(f));
    m = detail::oriented(std::move(m), [](const Vec3& x) { return x; });
    m.name = perturb_amp == 0.0
                 ? "icosphere(subdiv=" + std::to_string(subdiv) + ")"
                 : "perturbed_sphere(amp=" + std::to_string(perturb_amp) + ")";
    return m;
}

inline SimplicialHypersurface make_flat_annulus_mesh(double r0, double r1,
                                                     int rings = 48,
                                                     int segs = 96) {
    if (!(0.0 < r0 && r0 < r1)) throw BadSpec("annulus mesh needs 0 < r0 < r1");
    // Geometric ring spacing resolves the near-origin weight.
    const double q = std::pow(r1 / r0, 1.0 / rings);
    auto pt = [&](double u, double v) {
        const double r = r0 * std::pow(q, v * rings);
        const double th = 2.0 * std::numbers::pi * u;
        return Vec3(r * std::cos(th), r * std::sin(th), 0.0);
    };
    detail::GridMesh g = detail::grid_mesh(segs, rings, pt, true, false);
    SimplicialHypersurface m =
        build_mesh(std::move(g.vertices), std::move(g.triangles));
    m = detail::oriented(std::move(m),
                         [](const Vec3&) { return Vec3(0, 0, 1); });
    m.name = "flat_annulus_mesh(" + std::to_string(r0) + "," +
             std::to_string(r1) + ")";
    return m;
}

inline SimplicialHypersurface make_flat_disk_mesh(double radius = 1.0,
                                                  int rings = 32,
                                                  int segs = 64) {
    if (radius <= 0.0) throw BadSpec("disk radius must be > 0");
    std::vector<Vec3> v;
    std::vector<Tri> f;
    v.emplace_back(0.0, 0.0, 0.0);
    for (int j = 1; j <= rings; ++j) {
        const double r = radius * j / rings;
        for (int i = 0; i < segs; ++i) {
            const double th = 2.0 * std::numbers::pi * i / segs;
            v.emplace_back(r * std::cos(th), r * std::sin(th), 0.0);
        }
    }
    auto idx = [&](int ring, int i) {
        return ring == 0 ? 0u
                         : static_cast<std::uint32_t>(1 + (ring - 1) * segs +
                                                      (i % segs));
    };
    for (int i = 0; i < segs; ++i)
        f.push_back({0u, idx(1, i), idx(1, i + 1)});
    for (int j = 1; j < rings; ++j) {
        for (int i = 0; i < segs; ++i) {
            f.push_back({idx(j, i), idx(j + 1, i), idx(j + 1, i + 1)});
            f.push_back({idx(j, i), idx(j + 1, i + 1), idx(j, i + 1)});
        }
    }
    SimplicialHypersurface m = build_mesh(std::move(v), std::move(f));
    m = detail::oriented(std::move(m),
                         [](const Vec3&) { return Vec3(0, 0, 1); });
    m.name = "flat_disk_mesh(R=" + std::to_string(radius) + ")";
    return m;
}

inline SimplicialHypersurface make_torus_mesh(double major = 2.0,
                                              double minor = 1.0,
                                              int nu = 64, int nv = 32) {
    if (!(major > minor && minor > 0.0))
        throw BadSpec("torus needs major > minor > 0");
    auto pt = [&](double u, double v) {
        const double th = 2.0 * std::numbers::pi * u;
        const double ph = 2.0 * std::numbers::pi * v;
        const double w = major + minor * std::cos(ph);
        return Vec3(w * std::cos(th), w * std::sin(th), minor * std::sin(ph));
    };
    detail::GridMesh g = detail::grid_mesh(nu, nv, pt, true, true);
    SimplicialHypersurface m =
        build_mesh(std::move(g.vertices), std::move(g.triangles));
    m = detail::oriented(std::move(m), [major](const Vec3& x) {
        Vec3 axis(x.x(), x.y(), 0.0);
        const double len = axis.norm();
        if (len > 0.0) axis *= major / len;
        return Vec3(x - axis);
    });
    m.name = "torus(" + std::to_string(major) + "," + std::to_string(minor) +
             ")";
    return m;
}

inline SimplicialHypersurface make_graph_mesh(double amp = 0.3,
                                              double extent = 1.0,
                                              int res = 48) {
    if (extent <= 0.0) throw BadSpec("graph extent must be > 0");
    const double sigma = 0.3 * extent;
    auto pt = [&](double u, double v) {
        const double x = extent * (2.0 * u - 1.0);
        const double y = extent * (2.0 * v - 1.0);
        const double z =
            amp * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
        return Vec3(x, y, z);
    };
    detail::GridMesh g = detail::grid_mesh(res, res, pt, false, false);
    SimplicialHypersurface m =
        build_mesh(std::move(g.vertices), std::move(g.triangles));
    m = detail::oriented(std::move(m),
                         [](const Vec3&) { return Vec3(0, 0, 1); });
    m.name = "graph(amp=" + std::to_string(amp) + ")";
    return m;
}

inline SimplicialHypersurface make_cylinder_mesh(double radius = 1.0,
                                                 double length = 2.0,
                                                 int segs = 64,
                                                 int stacks = 32) {
    if (radius <= 0.0 || length <= 0.0)
        throw BadSpec("cylinder needs radius, length > 0");
    auto pt = [&](double u, double v) {
        const double th = 2.0 * std::numbers::pi * u;
        return Vec3(radius * std::cos(th), radius * std::sin(th),
                    length * (v - 0.5));
    };
    detail::GridMesh g = detail::grid_mesh(segs, stacks, pt, true, false);
    SimplicialHypersurface m =
        build_mesh(std::move(g.vertices), std::move(g.triangles));
    m = detail::oriented(std::move(m), [](const Vec3& x) {
        return Vec3(x.x(), x.y(), 0.0);
    });
    m.name = "cylinder_mesh(R=" + std::to_string(radius) + ")";
    return m;
}

inline SimplicialHypersurface make_ellipsoid_mesh(double a, double b, double c,
                                                  int subdiv = 4) {
    if (a <= 0.0 || b <= 0.0 || c <= 0.0)
        throw BadSpec("ellipsoid semi-axes must be > 0");
    SimplicialHypersurface sphere = make_icosphere(subdiv);
    std::vector<Vec3> v = sphere.vertices;
    for (Vec3& p : v) p = Vec3(a * p.x(), b * p.y(), c * p.z());
    SimplicialHypersurface m = build_mesh(std::move(v), sphere.triangles);
    m = detail::oriented(std::move(m), [](const Vec3& x) { return x; });
    m.name = "ellipsoid(" + std::to_string(a) + "," + std::to_string(b) + "," +
             std::to_string(c) + ")";
    return m;
}

inline SimplicialHypersurface make_catenoid_mesh(double neck = 1.0,
                                                 double half_span = 2.0,
                                                 int segs = 64,
                                                 int stacks = 48) {
    const RevolutionHypersurface prof = revolution_catenoid(2, neck, half_span);
    auto pt = [&](double u, double v) {
        const double t = prof.t0 + (prof.t1 - prof.t0) * v;
        const ProfilePoint p = prof.at(t);
        const double th = 2.0 * std::numbers::pi * u;
        return Vec3(p.r * std::cos(th), p.r * std::sin(th), p.z);
    };
    detail::GridMesh g = detail::grid_mesh(segs, stacks, pt, true, false);
    SimplicialHypersurface m =
        build_mesh(std::move(g.vertices), std::move(g.triangles));
    m = detail::oriented(std::move(m), [](const Vec3& x) {
        return Vec3(x.x(), x.y(), 0.0);
    });
    m.name = "catenoid_mesh(neck=" + std::to_string(neck) + ")";
    return m;
}

// --------------------------------------------------------------------------
// Surface factory from a spec string.

inline Surface make_surface(const std::string& spec_string) {
    const ParsedSpec s = parse_spec(spec_string);
    const int n = static_cast<int>(s.get("n", 2));
    if (s.name == "sphere")
        return Surface::from_revolution(revolution_sphere(s.get("R", 1.0), n));
    if (s.name == "flat_annulus")
        return Surface::from_revolution(
            revolution_annulus(s.get("r0", 0.01), s.get("r1", 1.0), n));
    if (s.name == "flat_disk")
        return Surface::from_revolution(
            revolution_annulus(0.0, s.get("R", 1.0), n));
    if (s.name == "cylinder")
        return Surface::from_revolution(
            revolution_cylinder(s.get("R", 1.0), s.get("L", 2.0), n));
    if (s.name == "catenoid")
        return Surface::from_revolution(revolution_catenoid(
            std::max(n, 2), s.get("neck", 1.0), s.get("span", 2.0)));
    if (s.name == "icosphere")
        return Surface::from_mesh(make_icosphere(
            static_cast<int>(s.get("subdiv", 4)), s.get("R", 1.0)));
    if (s.name == "perturbed_sphere")
        return Surface::from_mesh(make_icosphere(
            static_cast<int>(s.get("subdiv", 4)), s.get("R", 1.0),
            s.get("amp", 0.05)));
    if (s.name == "flat_annulus_mesh")
        return Surface::from_mesh(make_flat_annulus_mesh(
            s.get("r0", 0.01), s.get("r1", 1.0),
            static_cast<int>(s.get("rings", 48)),
            static_cast<int>(s.get("segs", 96))));
    if (s.name == "flat_disk_mesh")
        return Surface::from_mesh(make_flat_disk_mesh(
            s.get("R", 1.0), static_cast<int>(s.get("rings", 32)),
            static_cast<int>(s.get("segs", 64))));
    if (s.name == "torus")
        return Surface::from_mesh(make_torus_mesh(
            s.get("R", 2.0), s.get("r", 1.0),
            static_cast<int>(s.get("nu", 64)),
            static_cast<int>(s.get("nv", 32))));
    if (s.name == "graph")
        return Surface::from_mesh(make_graph_mesh(
            s.get("amp", 0.3), s.get("extent", 1.0),
            static_cast<int>(s.get("res", 48))));
    if (s.name == "cylinder_mesh")
        return Surface::from_mesh(make_cylinder_mesh(
            s.get("R", 1.0), s.get("L", 2.0),
            static_cast<int>(s.get("segs", 64)),
            static_cast<int>(s.get("stacks", 32))));
    if (s.name == "ellipsoid")
        return Surface::from_mesh(make_ellipsoid_mesh(
            s.get("a", 1.0), s.get("b", 1.0), s.get("c", 1.5),
            static_cast<int>(s.get("subdiv", 4))));
    if (s.name == "catenoid_mesh")
        return Surface::from_mesh(make_catenoid_mesh(
            s.get("neck", 1.0), s.get("span", 2.0),
            static_cast<int>(s.get("segs", 64)),
            static_cast<int>(s.get("stacks", 48))));
    throw BadSpec("unknown surface '" + s.name + "'");
}

// --------------------------------------------------------------------------
// Test-function families.

namespace detail {

// C1 cubic ramp on [0, 1].
inline double smoothstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}
inline double smoothstep_deriv(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 6.0 * u * (1.0 - u);
}

// Plateau profile in a normalized coordinate tau in [0, 1]: ramps of width
// w up at the left end and down at the right end, C1 cubic.
inline double plateau(double tau, double w) {
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    return smoothstep(tau / w) * smoothstep((1.0 - tau) / w);
}
inline double plateau_deriv(double tau, double w) {
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    const double up = smoothstep(tau / w), dn = smoothstep((1.0 - tau) / w);
    return smoothstep_deriv(tau / w) / w * dn -
           up * smoothstep_deriv((1.0 - tau) / w) / w;
}

// omega(s) = s^(-(n-2)/2) times a plateau in log s between eps and R.
// `ramp_log_width` is the ramp length in log units.
inline ScalarField ground_state_family(double eps, double R, int n,
                                       double ramp_log_width,
                                       const std::string& name) {
    if (!(eps > 0.0 && eps < R))
        throw BadSpec(name + " needs 0 < eps < R");
    const double L = std::log(R / eps);
    const double w = std::min(ramp_log_width / L, 0.45);
    const double c1 = 0.5 * (n - 2);
    auto g = [=](double s) {
        if (s <= eps || s >= R) return 0.0;
        const double tau = std::log(s / eps) / L;
        return std::pow(s, -c1) * plateau(tau, w);
    };
    auto dg = [=](double s) {
        if (s <= eps || s >= R) return 0.0;
        const double tau = std::log(s / eps) / L;
        return std::pow(s, -c1 - 1.0) *
               (plateau_deriv(tau, w) / L - c1 * plateau(tau, w));
    };
    return make_radial_field(g, dg, eps, R, name);
}

}  // namespace detail

inline ScalarField make_testfn(const std::string& spec_string,
                               const Surface& surface) {
    const ParsedSpec s = parse_spec(spec_string);
    const int n = surface.dim();

    ScalarField out;
    if (s.name == "constant") {
        out = make_radial_field([](double) { return 1.0; },
                                [](double) { return 0.0; }, 0.0,
                                std::numeric_limits<double>::infinity(),
                                "constant");
        out.has_support_annulus = false;
    } else if (s.name == "radial_bump") {
        const double lo = s.get("delta", 0.25), hi = s.get("R", 1.0);
        if (!(0.0 <= lo && lo < hi)) throw BadSpec("radial_bump needs delta < R");
        const double span = hi - lo;
        auto g = [=](double r) {
            if (r <= lo || r >= hi) return 0.0;
            const double u = (r - lo) / span;
            const double sn = std::sin(std::numbers::pi * u);
            return sn * sn;
        };
        auto dg = [=](double r) {
            if (r <= lo || r >= hi) return 0.0;
            const double u = (r - lo) / span;
            return std::numbers::pi / span * std::sin(2.0 * std::numbers::pi * u);
        };
        out = make_radial_field(g, dg, lo, hi, "radial_bump");
    } else if (s.name == "log_cutoff") {
        const double eps = s.get("eps", 1e-2), R = s.get("R", 1.0);
        // Ramps take a fixed quarter of the log range.
        out = detail::ground_state_family(eps, R, n,
                                          0.25 * std::log(R / eps),
                                          "log_cutoff");
    } else if (s.name == "ground_state_cutoff") {
        const double eps = s.get("eps", 1e-2), R = s.get("R", 1.0);
        // Ramps take one e-fold at each end regardless of the range.
        out = detail::ground_state_family(eps, R, n, 1.0,
                                          "ground_state_cutoff");
    } else if (s.name == "cone") {
        const double R = s.get("R", 1.0);
        if (R <= 0.0) throw BadSpec("cone needs R > 0");
        auto g = [R](double r) { return std::max(0.0, 1.0 - r / R); };
        auto dg = [R](double r) { return r < R ? -1.0 / R : 0.0; };
        out = make_radial_field(g, dg, 0.0, R, "cone");
    } else if (s.name == "random_bump") {
        if (!surface.is_mesh())
            throw BadSpec("random_bump is a mesh-path family");
        const SimplicialHypersurface& m = surface.mesh();
        const std::uint64_t seed =
            static_cast<std::uint64_t>(s.get("seed", 1.0));
        const int count = static_cast<int>(s.get("count", 5));
        if (count < 1) throw BadSpec("random_bump needs count >= 1");
        const double h = m.mean_edge_length();
        const double diam = m.bbox_diagonal();
        std::vector<double> vals(m.num_vertices(), 0.0);
        for (int b = 0; b < count; ++b) {
            SplitMixRng rng(split_stream(seed, static_cast<std::uint64_t>(b)));
            const std::size_t center = static_cast<std::size_t>(
                rng.next_double() * static_cast<double>(m.num_vertices()));
            const Vec3 c = m.vertices[std::min(center, m.num_vertices() - 1)];
            const double width =
                5.0 * h + (0.25 * diam - 5.0 * h) * rng.next_double();
            const double w2 = width * width;
            for (std::size_t v = 0; v < m.num_vertices(); ++v)
                vals[v] += std::exp(-(m.vertices[v] - c).squaredNorm() / w2);
        }
        // Per-vertex hat cutoff keeps the field admissible on bordered meshes.
        for (std::size_t v = 0; v < m.num_vertices(); ++v)
            if (m.vertex_on_collar[v]) vals[v] = 0.0;
        out = make_per_vertex_field(std::move(vals), "random_bump");
    } else {
        throw BadSpec("unknown test function '" + s.name + "'");
    }

    if (out.has_support_annulus) {
        // The declared support must meet the surface at all.
        double lo = std::numeric_limits<double>::max(), hi = 0.0;
        if (surface.is_mesh()) {
            for (const Vec3& p : surface.mesh().vertices) {
                lo = std::min(lo, p.norm());
                hi = std::max(hi, p.norm());
            }
        } else {
            const RevolutionHypersurface& r = surface.revolution();
            for (int i = 0; i <= 128; ++i) {
                const double t = r.t0 + (r.t1 - r.t0) * i / 128.0;
                lo = std::min(lo, r.abs_x(t));
                hi = std::max(hi, r.abs_x(t));
            }
        }
        if (out.support_hi <= lo || out.support_lo >= hi)
            throw SupportOutsideSurface(out.name +
                                        " support does not meet " +
                                        surface.name());
    }
    return out;
}

}  // namespace hsi
