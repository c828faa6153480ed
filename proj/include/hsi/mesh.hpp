#pragma once

// Oriented triangulated hypersurfaces (n = 2 in ambient dimension 3):
// construction with manifold/orientation checks, face and vertex normals,
// lumped vertex areas, cotangent mean curvature, and mesh file IO.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hsi/core.hpp"
#include "json.hpp"

namespace hsi {

using Vec3 = Eigen::Vector3d;
using Tri = std::array<std::uint32_t, 3>;

struct SimplicialHypersurface {
    int ambient_dim = 3;  // intrinsic dimension n = 2
    std::string name = "mesh";
    std::vector<Vec3> vertices;
    std::vector<Tri> triangles;

    std::vector<Vec3> per_face_normal;
    std::vector<double> per_face_area;
    std::vector<Vec3> per_vertex_normal;
    std::vector<double> per_vertex_area;        // lumped (barycentric) mass
    std::vector<double> per_vertex_mean_curvature;  // H, sum convention
    // Cotangent at corner k of each face, paired with the opposite edge.
    std::vector<std::array<double, 3>> corner_cot;

    std::vector<bool> vertex_on_boundary;
    std::vector<bool> vertex_on_collar;  // boundary vertices and their 1-ring
    std::vector<std::array<std::uint32_t, 2>> boundary_edges;

    int intrinsic_dim() const { return 2; }
    std::size_t num_vertices() const { return vertices.size(); }
    std::size_t num_faces() const { return triangles.size(); }

    long euler_characteristic() const {
        std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
        for (const Tri& t : triangles)
            for (int k = 0; k < 3; ++k) {
                auto a = t[k], b = t[(k + 1) % 3];
                edges[{std::min(a, b), std::max(a, b)}]++;
            }
        return static_cast<long>(vertices.size()) -
               static_cast<long>(edges.size()) +
               static_cast<long>(triangles.size());
    }

    double bbox_diagonal() const {
        Vec3 lo = vertices.front(), hi = vertices.front();
        for (const Vec3& v : vertices) {
            lo = lo.cwiseMin(v);
            hi = hi.cwiseMax(v);
        }
        return (hi - lo).norm();
    }

    double min_abs_x() const {
        double m = std::numeric_limits<double>::max();
        for (const Vec3& v : vertices) m = std::min(m, v.norm());
        return m;
    }

    double mean_edge_length() const {
        double s = 0.0;
        std::size_t c = 0;
        for (const Tri& t : triangles)
            for (int k = 0; k < 3; ++k) {
                s += (vertices[t[k]] - vertices[t[(k + 1) % 3]]).norm();
                ++c;
            }
        return s / static_cast<double>(c);
    }

    std::uint64_t fingerprint() const {
        std::uint64_t h = fnv1a(vertices.data(), vertices.size() * sizeof(Vec3));
        h = fnv1a(triangles.data(), triangles.size() * sizeof(Tri), h);
        return h;
    }
};

namespace detail {

inline void compute_face_data(SimplicialHypersurface& m) {
    const std::size_t nf = m.num_faces();
    m.per_face_normal.resize(nf);
    m.per_face_area.resize(nf);
    m.corner_cot.resize(nf);
    const double diag2 = m.bbox_diagonal() * m.bbox_diagonal();
    for (std::size_t f = 0; f < nf; ++f) {
        const Tri& t = m.triangles[f];
        const Vec3& p0 = m.vertices[t[0]];
        const Vec3& p1 = m.vertices[t[1]];
        const Vec3& p2 = m.vertices[t[2]];
        const Vec3 cr = (p1 - p0).cross(p2 - p0);
        const double area = 0.5 * cr.norm();
        if (area < 1e-14 * diag2)
            throw DegenerateFace("face " + std::to_string(f) + " has area " +
                                 std::to_string(area));
        m.per_face_area[f] = area;
        m.per_face_normal[f] = cr / cr.norm();
        for (int k = 0; k < 3; ++k) {
            const Vec3 e1 = m.vertices[t[(k + 1) % 3]] - m.vertices[t[k]];
            const Vec3 e2 = m.vertices[t[(k + 2) % 3]] - m.vertices[t[k]];
            m.corner_cot[f][k] = e1.dot(e2) / e1.cross(e2).norm();
        }
    }
}

inline void check_topology(SimplicialHypersurface& m) {
    // Directed edge multiset: a consistently oriented manifold mesh has each
    // undirected edge covered by at most two faces, in opposite directions.
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
    for (const Tri& t : m.triangles)
        for (int k = 0; k < 3; ++k) {
            auto a = t[k], b = t[(k + 1) % 3];
            if (a == b) throw DegenerateFace("repeated vertex index in face");
            directed[{a, b}]++;
        }
    m.vertex_on_boundary.assign(m.num_vertices(), false);
    m.boundary_edges.clear();
    for (const auto& [e, count] : directed) {
        auto rev = directed.find({e.second, e.first});
        const int opposite = rev == directed.end() ? 0 : rev->second;
        if (count > 1) {
            if (opposite > 0)
                throw NonManifold("edge shared by more than two faces");
            throw InconsistentOrientation(
                "edge traversed twice in the same direction");
        }
        if (count + opposite > 2)
            throw NonManifold("edge shared by more than two faces");
        if (opposite == 0) {
            m.vertex_on_boundary[e.first] = true;
            m.vertex_on_boundary[e.second] = true;
            if (e.first < e.second) m.boundary_edges.push_back({e.first, e.second});
            else m.boundary_edges.push_back({e.second, e.first});
        }
    }
    // Keep each boundary edge once.
    std::sort(m.boundary_edges.begin(), m.boundary_edges.end());
    m.boundary_edges.erase(
        std::unique(m.boundary_edges.begin(), m.boundary_edges.end()),
        m.boundary_edges.end());

    m.vertex_on_collar.assign(m.num_vertices(), false);
    for (const Tri& t : m.triangles) {
        const bool touches = m.vertex_on_boundary[t[0]] ||
                             m.vertex_on_boundary[t[1]] ||
                             m.vertex_on_boundary[t[2]];
        if (touches)
            for (int k = 0; k < 3; ++k) m.vertex_on_collar[t[k]] = true;
    }
}

inline void compute_vertex_data(SimplicialHypersurface& m) {
    const std::size_t nv = m.num_vertices();
    m.per_vertex_normal.assign(nv, Vec3::Zero());
    m.per_vertex_area.assign(nv, 0.0);
    for (std::size_t f = 0; f < m.num_faces(); ++f) {
        const Tri& t = m.triangles[f];
        for (int k = 0; k < 3; ++k) {
            m.per_vertex_normal[t[k]] += m.per_face_area[f] * m.per_face_normal[f];
            m.per_vertex_area[t[k]] += m.per_face_area[f] / 3.0;
        }
    }
    for (std::size_t v = 0; v < nv; ++v) {
        if (m.per_vertex_area[v] <= 0.0)
            throw ZeroVertexArea("isolated vertex " + std::to_string(v));
        const double len = m.per_vertex_normal[v].norm();
        if (len == 0.0)
            throw InconsistentOrientation("vertex normal cancels at vertex " +
                                          std::to_string(v));
        m.per_vertex_normal[v] /= len;
    }
}

}  // namespace detail

// Cotangent Laplace-Beltrami applied to a per-vertex scalar field:
// (Lf)_i = (1/(2 A_i)) sum_j w_ij (f_j - f_i). On the unit sphere applied to
// a coordinate this approaches -2 x^i.
inline std::vector<double> laplace_beltrami(const SimplicialHypersurface& m,
                                            const std::vector<double>& f) {
    if (f.size() != m.num_vertices())
        throw FieldSizeMismatch("laplace_beltrami: field/vertex count");
    std::vector<double> out(m.num_vertices(), 0.0);
    for (std::size_t fi = 0; fi < m.num_faces(); ++fi) {
        const Tri& t = m.triangles[fi];
        for (int k = 0; k < 3; ++k) {
            const auto i = t[(k + 1) % 3], j = t[(k + 2) % 3];
            const double w = 0.5 * m.corner_cot[fi][k];
            out[i] += w * (f[j] - f[i]);
            out[j] += w * (f[i] - f[j]);
        }
    }
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
        out[v] /= m.per_vertex_area[v];
    return out;
}

// Discrete mean curvature: H nu = -Laplace(x), H = (-Laplace(x)) . nu.
// Sum-of-principal-curvatures convention; H = n on the unit sphere with
// outward normals. Undefined (set to zero) on boundary vertices.
inline void compute_mean_curvature(SimplicialHypersurface& m) {
    std::vector<double> coord(m.num_vertices());
    std::vector<Vec3> lap(m.num_vertices(), Vec3::Zero());
    for (int c = 0; c < 3; ++c) {
        for (std::size_t v = 0; v < m.num_vertices(); ++v)
            coord[v] = m.vertices[v][c];
        const std::vector<double> lc = laplace_beltrami(m, coord);
        for (std::size_t v = 0; v < m.num_vertices(); ++v) lap[v][c] = lc[v];
    }
    m.per_vertex_mean_curvature.resize(m.num_vertices());
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
        m.per_vertex_mean_curvature[v] =
            m.vertex_on_boundary[v] ? 0.0 : -lap[v].dot(m.per_vertex_normal[v]);
}

inline SimplicialHypersurface build_mesh(std::vector<Vec3> vertices,
                                         std::vector<Tri> triangles) {
    SimplicialHypersurface m;
    m.vertices = std::move(vertices);
    m.triangles = std::move(triangles);
    if (m.vertices.empty() || m.triangles.empty())
        throw BadSpec("empty mesh");
    for (const Tri& t : m.triangles)
        for (std::uint32_t idx : t)
            if (idx >= m.vertices.size())
                throw BadSpec("vertex index out of range");
    detail::compute_face_data(m);
    detail::check_topology(m);
    detail::compute_vertex_data(m);
    compute_mean_curvature(m);
    return m;
}

// Global normal flip: reverse the winding of every face and rebuild.
inline SimplicialHypersurface flip_orientation(const SimplicialHypersurface& m) {
    std::vector<Tri> tris = m.triangles;
    for (Tri& t : tris) std::swap(t[1], t[2]);
    SimplicialHypersurface out = build_mesh(m.vertices, tris);
    out.name = m.name;
    return out;
}

inline SimplicialHypersurface transform(const SimplicialHypersurface& m,
                                        const Eigen::Matrix3d& rot,
                                        double scale = 1.0) {
    std::vector<Vec3> verts(m.vertices.size());
    for (std::size_t i = 0; i < verts.size(); ++i)
        verts[i] = scale * (rot * m.vertices[i]);
    SimplicialHypersurface out = build_mesh(verts, m.triangles);
    out.name = m.name;
    return out;
}

// ---------------------------------------------------------------------------
// Mesh IO: OFF, OBJ (triangles only), and the JSON schema
// {ambient_dim, vertices:[[f64;3]], triangles:[[u32;3]]}.

inline SimplicialHypersurface load_off(std::istream& in) {
    std::string tag;
    in >> tag;
    if (tag != "OFF") throw BadSpec("not an OFF file");
    std::size_t nv = 0, nf = 0, ne = 0;
    in >> nv >> nf >> ne;
    std::vector<Vec3> verts(nv);
    for (auto& v : verts) in >> v[0] >> v[1] >> v[2];
    std::vector<Tri> tris(nf);
    for (auto& t : tris) {
        int deg = 0;
        in >> deg;
        if (deg != 3) throw BadSpec("OFF: only triangle faces are supported");
        in >> t[0] >> t[1] >> t[2];
    }
    if (!in) throw BadSpec("truncated OFF file");
    return build_mesh(std::move(verts), std::move(tris));
}

inline SimplicialHypersurface load_obj(std::istream& in) {
    std::vector<Vec3> verts;
    std::vector<Tri> tris;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3 v;
            ls >> v[0] >> v[1] >> v[2];
            verts.push_back(v);
        } else if (tag == "f") {
            std::array<std::uint32_t, 3> idx{};
            int count = 0;
            std::string tok;
            while (ls >> tok) {
                if (count >= 3)
                    throw BadSpec("OBJ: only triangle faces are supported");
                // "v", "v/vt", "v/vt/vn", "v//vn" -> leading index
                idx[count++] =
                    static_cast<std::uint32_t>(std::stoul(tok) - 1);
            }
            if (count != 3) throw BadSpec("OBJ: face with fewer than 3 vertices");
            tris.push_back(idx);
        }
    }
    return build_mesh(std::move(verts), std::move(tris));
}

inline SimplicialHypersurface load_mesh_json(const nlohmann::json& j) {
    if (j.value("ambient_dim", 3) != 3)
        throw BadSpec("mesh JSON: ambient_dim must be 3");
    std::vector<Vec3> verts;
    for (const auto& v : j.at("vertices"))
        verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>(),
                           v.at(2).get<double>());
    std::vector<Tri> tris;
    for (const auto& t : j.at("triangles"))
        tris.push_back({t.at(0).get<std::uint32_t>(),
                        t.at(1).get<std::uint32_t>(),
                        t.at(2).get<std::uint32_t>()});
    return build_mesh(std::move(verts), std::move(tris));
}

inline nlohmann::json mesh_to_json(const SimplicialHypersurface& m) {
    nlohmann::json j;
    j["ambient_dim"] = m.ambient_dim;
    auto& jv = j["vertices"] = nlohmann::json::array();
    for (const Vec3& v : m.vertices) jv.push_back({v[0], v[1], v[2]});
    auto& jt = j["triangles"] = nlohmann::json::array();
    for (const Tri& t : m.triangles) jt.push_back({t[0], t[1], t[2]});
    return j;
}

inline SimplicialHypersurface load_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadSpec("cannot open mesh file: " + path);
    if (path.size() > 4 && path.substr(path.size() - 4) == ".off")
        return load_off(in);
    if (path.size() > 4 && path.substr(path.size() - 4) == ".obj")
        return load_obj(in);
    nlohmann::json j;
    in >> j;
    return load_mesh_json(j);
}

}  // namespace hsi
