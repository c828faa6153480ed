#pragma once

// Level-set foliation of a scalar function u on a box domain: extract the
// level hypersurfaces, verify the coarea formula, and evaluate the foliated
// Hardy inequality by accumulating per-level integrals over the level grid.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hsi/core.hpp"
#include "hsi/mesh.hpp"
#include "hsi/quadrature.hpp"
#include "hsi/report.hpp"
#include "hsi/revolution.hpp"
#include "hsi/tangential.hpp"
#include "json.hpp"

namespace hsi {

// --------------------------------------------------------------------------
// Regular grid of f64 samples.

struct Grid {
    std::array<int, 3> dims{0, 0, 0};
    std::array<double, 3> spacing{1, 1, 1};
    std::array<double, 3> origin{0, 0, 0};
    std::vector<double> values;  // x fastest: i + dims[0]*(j + dims[1]*k)

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(j) +
                    static_cast<std::size_t>(dims[1]) *
                        static_cast<std::size_t>(k));
    }
    double at(int i, int j, int k) const { return values[index(i, j, k)]; }
    Vec3 point(int i, int j, int k) const {
        return Vec3(origin[0] + i * spacing[0], origin[1] + j * spacing[1],
                    origin[2] + k * spacing[2]);
    }
    double umin() const { return *std::min_element(values.begin(), values.end()); }
    double umax() const { return *std::max_element(values.begin(), values.end()); }

    // Central-difference gradient at a node (one-sided at the border).
    Vec3 node_gradient(int i, int j, int k) const {
        Vec3 g;
        const int idx[3] = {i, j, k};
        for (int d = 0; d < 3; ++d) {
            int lo[3] = {i, j, k}, hi[3] = {i, j, k};
            if (idx[d] > 0) --lo[d];
            if (idx[d] + 1 < dims[d]) ++hi[d];
            const double span = (hi[d] - lo[d]) * spacing[d];
            g[d] = (at(hi[0], hi[1], hi[2]) - at(lo[0], lo[1], lo[2])) / span;
        }
        return g;
    }
};

inline Grid make_grid(std::array<int, 3> dims, std::array<double, 3> spacing,
                      std::array<double, 3> origin,
                      const std::function<double(const Vec3&)>& u) {
    if (dims[0] < 2 || dims[1] < 2 || dims[2] < 2)
        throw BadSpec("grid needs at least 2 samples per axis");
    Grid g;
    g.dims = dims;
    g.spacing = spacing;
    g.origin = origin;
    g.values.resize(std::size_t(dims[0]) * dims[1] * dims[2]);
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i)
                g.values[g.index(i, j, k)] = u(g.point(i, j, k));
    return g;
}

// File format: one JSON header line {dims, spacing, origin}, '\n', then
// dims[0]*dims[1]*dims[2] little-endian f64 values.
inline void save_grid(const Grid& g, const std::string& path) {
    nlohmann::ordered_json header;
    header["dims"] = g.dims;
    header["spacing"] = g.spacing;
    header["origin"] = g.origin;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadSpec("cannot write grid file " + path);
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(g.values.data()),
              static_cast<std::streamsize>(g.values.size() * sizeof(double)));
}

inline Grid load_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadSpec("cannot read grid file " + path);
    std::string line;
    std::getline(in, line);
    const nlohmann::json header = nlohmann::json::parse(line);
    Grid g;
    const auto d = header.at("dims").get<std::vector<int>>();
    const auto s = header.at("spacing").get<std::vector<double>>();
    const auto o = header.at("origin").get<std::vector<double>>();
    if (d.size() != 3 || s.size() != 3 || o.size() != 3)
        throw BadSpec("grid header must carry 3D dims/spacing/origin");
    std::copy(d.begin(), d.end(), g.dims.begin());
    std::copy(s.begin(), s.end(), g.spacing.begin());
    std::copy(o.begin(), o.end(), g.origin.begin());
    g.values.resize(std::size_t(g.dims[0]) * g.dims[1] * g.dims[2]);
    in.read(reinterpret_cast<char*>(g.values.data()),
            static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!in) throw BadSpec("grid file truncated: " + path);
    return g;
}

// --------------------------------------------------------------------------
// Level-set extraction by marching tetrahedra (6 tetrahedra per cell,
// diagonals consistent across faces). Triangles are oriented so the normal
// points along grad u.

struct LevelSlice {
    double level = 0.0;
    SimplicialHypersurface mesh;
    double min_grad_norm = 0.0;
};

namespace detail {

// Corner offsets in binary order x + 2y + 4z.
inline constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                                      {1, 1, 0}, {0, 0, 1}, {1, 0, 1},
                                      {0, 1, 1}, {1, 1, 1}};
// Six tetrahedra sharing the 0-7 diagonal.
inline constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7},
                                    {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};

}  // namespace detail

inline std::vector<LevelSlice> slice_levelsets(
    const Grid& g, const std::vector<double>& levels,
    std::vector<double>* dropped = nullptr) {
    const double range = g.umax() - g.umin();
    const double grad_floor =
        1e-6 * range / (std::min({g.spacing[0], g.spacing[1], g.spacing[2]}) *
                        std::max({g.dims[0], g.dims[1], g.dims[2]}));

    // Cell u-range for fast level rejection.
    const int cx = g.dims[0] - 1, cy = g.dims[1] - 1, cz = g.dims[2] - 1;
    std::vector<float> cell_min(std::size_t(cx) * cy * cz),
        cell_max(std::size_t(cx) * cy * cz);
    for (int k = 0; k < cz; ++k)
        for (int j = 0; j < cy; ++j)
            for (int i = 0; i < cx; ++i) {
                double lo = 1e300, hi = -1e300;
                for (const auto& c : detail::kCorner) {
                    const double v = g.at(i + c[0], j + c[1], k + c[2]);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                const std::size_t ci =
                    std::size_t(i) + std::size_t(cx) * (j + std::size_t(cy) * k);
                cell_min[ci] = static_cast<float>(lo);
                cell_max[ci] = static_cast<float>(hi);
            }

    std::vector<LevelSlice> out;
    for (double level : levels) {
        // Nudge off exact node values (Sard-style regular value proxy);
        // the offset stays above the cut-snapping threshold.
        const double t = level + 1e-5 * range;
        std::vector<Vec3> verts;
        std::vector<Tri> tris;
        std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> edge_vertex;
        auto cut_edge = [&](int i0, int j0, int k0, int i1, int j1, int k1) {
            std::size_t a = g.index(i0, j0, k0), b = g.index(i1, j1, k1);
            if (a > b) std::swap(a, b);
            const double va = g.values[a], vb = g.values[b];
            double s = (t - va) / (vb - va);
            // Snap cuts passing almost through a node onto it, so the
            // sliver triangles degenerate exactly and drop without cracks.
            std::pair<std::size_t, std::size_t> key{a, b};
            if (s < 1e-4) {
                s = 0.0;
                key = {a, a};
            } else if (s > 1.0 - 1e-4) {
                s = 1.0;
                key = {b, b};
            }
            auto it = edge_vertex.find(key);
            if (it != edge_vertex.end()) return it->second;
            // Recover node coordinates from the flat indices.
            auto coords = [&](std::size_t idx) {
                const int i = static_cast<int>(idx % g.dims[0]);
                const int j = static_cast<int>((idx / g.dims[0]) % g.dims[1]);
                const int k = static_cast<int>(idx / g.dims[0] / g.dims[1]);
                return g.point(i, j, k);
            };
            const Vec3 p = coords(a) + s * (coords(b) - coords(a));
            const std::uint32_t vi = static_cast<std::uint32_t>(verts.size());
            verts.push_back(p);
            edge_vertex[key] = vi;
            return vi;
        };

        for (int k = 0; k < cz; ++k)
            for (int j = 0; j < cy; ++j)
                for (int i = 0; i < cx; ++i) {
                    const std::size_t ci =
                        std::size_t(i) +
                        std::size_t(cx) * (j + std::size_t(cy) * k);
                    if (cell_max[ci] < t || cell_min[ci] > t) continue;
                    int ni[8], nj[8], nk[8];
                    double d[8];
                    for (int c = 0; c < 8; ++c) {
                        ni[c] = i + detail::kCorner[c][0];
                        nj[c] = j + detail::kCorner[c][1];
                        nk[c] = k + detail::kCorner[c][2];
                        d[c] = g.at(ni[c], nj[c], nk[c]) - t;
                    }
                    for (const auto& tet : detail::kTets) {
                        int inside[4], nin = 0;
                        for (int c = 0; c < 4; ++c)
                            if (d[tet[c]] > 0.0) inside[nin++] = c;
                        if (nin == 0 || nin == 4) continue;
                        auto cut = [&](int ca, int cb) {
                            const int a = tet[ca], b = tet[cb];
                            return cut_edge(ni[a], nj[a], nk[a], ni[b], nj[b],
                                            nk[b]);
                        };
                        if (nin == 1 || nin == 3) {
                            // One vertex isolated: single triangle.
                            int apex = -1;
                            for (int c = 0; c < 4; ++c) {
                                const bool in = d[tet[c]] > 0.0;
                                if ((nin == 1) == in) apex = c;
                            }
                            int others[3], no = 0;
                            for (int c = 0; c < 4; ++c)
                                if (c != apex) others[no++] = c;
                            tris.push_back({cut(apex, others[0]),
                                            cut(apex, others[1]),
                                            cut(apex, others[2])});
                        } else {
                            // Two-two split: quad, two triangles.
                            int in2[2], out2[2], a = 0, b = 0;
                            for (int c = 0; c < 4; ++c)
                                (d[tet[c]] > 0.0 ? in2[a++] : out2[b++]) = c;
                            const std::uint32_t q0 = cut(in2[0], out2[0]);
                            const std::uint32_t q1 = cut(in2[0], out2[1]);
                            const std::uint32_t q2 = cut(in2[1], out2[1]);
                            const std::uint32_t q3 = cut(in2[1], out2[0]);
                            tris.push_back({q0, q1, q2});
                            tris.push_back({q0, q2, q3});
                        }
                    }
                }

        auto drop = [&](double lv) {
            if (dropped) dropped->push_back(lv);
        };
        if (tris.size() < 4) {
            drop(level);
            continue;
        }
        // Orient every triangle along the interpolated gradient and drop
        // slivers below the welding scale.
        const double diag2 = [&] {
            Vec3 ext(g.spacing[0] * (g.dims[0] - 1),
                     g.spacing[1] * (g.dims[1] - 1),
                     g.spacing[2] * (g.dims[2] - 1));
            return ext.squaredNorm();
        }();
        auto grid_gradient = [&](const Vec3& x) {
            // Gradient at the nearest node; adequate for orientation.
            int i = std::clamp(int(std::round((x[0] - g.origin[0]) / g.spacing[0])),
                               0, g.dims[0] - 1);
            int j = std::clamp(int(std::round((x[1] - g.origin[1]) / g.spacing[1])),
                               0, g.dims[1] - 1);
            int k = std::clamp(int(std::round((x[2] - g.origin[2]) / g.spacing[2])),
                               0, g.dims[2] - 1);
            return g.node_gradient(i, j, k);
        };
        std::vector<Tri> kept;
        double min_grad = std::numeric_limits<double>::max();
        for (Tri tr : tris) {
            const Vec3 e1 = verts[tr[1]] - verts[tr[0]];
            const Vec3 e2 = verts[tr[2]] - verts[tr[0]];
            const Vec3 nrm = e1.cross(e2);
            // Exactly-degenerate triangles from snapped cuts.
            if (0.5 * nrm.norm() < 1e-20 * diag2) continue;
            const Vec3 c = (verts[tr[0]] + verts[tr[1]] + verts[tr[2]]) / 3.0;
            const Vec3 grad = grid_gradient(c);
            min_grad = std::min(min_grad, grad.norm());
            if (nrm.dot(grad) < 0.0) std::swap(tr[1], tr[2]);
            kept.push_back(tr);
        }
        if (kept.size() < 4 || min_grad < grad_floor) {
            drop(level);
            continue;
        }
        // Compact away vertices orphaned by the sliver filter.
        {
            std::vector<std::uint32_t> remap(verts.size(),
                                             std::uint32_t(-1));
            std::vector<Vec3> vkept;
            for (Tri& tr : kept)
                for (std::uint32_t& v : tr) {
                    if (remap[v] == std::uint32_t(-1)) {
                        remap[v] = static_cast<std::uint32_t>(vkept.size());
                        vkept.push_back(verts[v]);
                    }
                    v = remap[v];
                }
            verts = std::move(vkept);
        }
        LevelSlice slice;
        slice.level = level;
        slice.min_grad_norm = min_grad;
        try {
            slice.mesh = build_mesh(std::move(verts), std::move(kept));
        } catch (const Error&) {
            // Tangent or node-aligned level: drop it, Sard-style.
            drop(level);
            continue;
        }
        slice.mesh.name = "levelset(t=" + std::to_string(level) + ")";
        // Level-set mean curvature div(grad u/|grad u|) from the grid,
        // sampled at the nearest node: far more accurate on marching-tet
        // slivers than the cotangent estimate.
        {
            // Only nodes near the slice are needed, so compute lazily with
            // a per-level cache.
            std::map<std::size_t, double> cache;
            auto node_div = [&](int i, int j, int k) {
                const std::size_t idx = g.index(i, j, k);
                auto it = cache.find(idx);
                if (it != cache.end()) return it->second;
                double sum = 0.0;
                for (int dcomp = 0; dcomp < 3; ++dcomp) {
                    int lo[3] = {i, j, k}, hi[3] = {i, j, k};
                    if (lo[dcomp] > 0) --lo[dcomp];
                    if (hi[dcomp] + 1 < g.dims[dcomp]) ++hi[dcomp];
                    const double span = (hi[dcomp] - lo[dcomp]) *
                                        g.spacing[dcomp];
                    const Vec3 glo = g.node_gradient(lo[0], lo[1], lo[2]);
                    const Vec3 ghi = g.node_gradient(hi[0], hi[1], hi[2]);
                    const double nlo = glo.norm(), nhi = ghi.norm();
                    const double flo = nlo > 0 ? glo[dcomp] / nlo : 0.0;
                    const double fhi = nhi > 0 ? ghi[dcomp] / nhi : 0.0;
                    sum += (fhi - flo) / span;
                }
                cache[idx] = sum;
                return sum;
            };
            for (std::size_t v = 0; v < slice.mesh.num_vertices(); ++v) {
                const Vec3& x = slice.mesh.vertices[v];
                int i = std::clamp(
                    int(std::round((x[0] - g.origin[0]) / g.spacing[0])), 1,
                    g.dims[0] - 2);
                int j = std::clamp(
                    int(std::round((x[1] - g.origin[1]) / g.spacing[1])), 1,
                    g.dims[1] - 2);
                int k = std::clamp(
                    int(std::round((x[2] - g.origin[2]) / g.spacing[2])), 1,
                    g.dims[2] - 2);
                slice.mesh.per_vertex_mean_curvature[v] = node_div(i, j, k);
            }
        }
        out.push_back(std::move(slice));
    }
    return out;
}

// --------------------------------------------------------------------------
// Level grid selection: uniform levels between the 5th and 95th percentile
// of u over the support of phi (all nodes when phi is null).

inline std::vector<double> default_levels(
    const Grid& g, const std::function<double(const Vec3&)>& phi = nullptr,
    int count = 64) {
    std::vector<double> vals;
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i)
                if (!phi || std::abs(phi(g.point(i, j, k))) > 0.0)
                    vals.push_back(g.at(i, j, k));
    if (vals.size() < 2) throw BadSpec("level selection: empty support");
    std::sort(vals.begin(), vals.end());
    const double lo = vals[static_cast<std::size_t>(0.05 * (vals.size() - 1))];
    const double hi = vals[static_cast<std::size_t>(0.95 * (vals.size() - 1))];
    std::vector<double> levels(count);
    for (int i = 0; i < count; ++i)
        levels[i] = lo + (hi - lo) * (i + 0.5) / count;
    return levels;
}

// --------------------------------------------------------------------------
// Coarea check: int_{lo < u < hi} |grad u| q dx vs sum_t dt int_{u=t} q dV.

struct CoareaCheck {
    double volume_side = 0.0;
    double levelset_side = 0.0;
    double relative_gap = 0.0;
    std::size_t dropped_levels = 0;
};

inline CoareaCheck coarea_consistency(
    const Grid& g, const std::function<double(const Vec3&)>& q,
    int level_count = 64) {
    const std::vector<double> levels = default_levels(g, nullptr, level_count);
    const double lo = levels.front(), hi = levels.back();
    const double dt = levels.size() > 1 ? levels[1] - levels[0] : hi - lo;

    CoareaCheck out;
    // Volume side: midpoint rule over cells with u in the level window
    // (cell-centered trilinear average of u and central-difference gradient).
    {
        std::vector<double> terms;
        const double vol = g.spacing[0] * g.spacing[1] * g.spacing[2];
        for (int k = 0; k + 1 < g.dims[2]; ++k)
            for (int j = 0; j + 1 < g.dims[1]; ++j)
                for (int i = 0; i + 1 < g.dims[0]; ++i) {
                    double u = 0.0;
                    Vec3 grad = Vec3::Zero();
                    for (const auto& c : detail::kCorner) {
                        u += g.at(i + c[0], j + c[1], k + c[2]);
                        grad += g.node_gradient(i + c[0], j + c[1], k + c[2]);
                    }
                    u /= 8.0;
                    grad /= 8.0;
                    if (u < lo - 0.5 * dt || u > hi + 0.5 * dt) continue;
                    const Vec3 c = g.point(i, j, k) +
                                   0.5 * Vec3(g.spacing[0], g.spacing[1],
                                              g.spacing[2]);
                    terms.push_back(vol * grad.norm() * q(c));
                }
        out.volume_side = pairwise_sum(terms);
    }
    // Level-set side.
    {
        std::vector<double> dropped;
        const std::vector<LevelSlice> slices =
            slice_levelsets(g, levels, &dropped);
        out.dropped_levels = dropped.size();
        std::vector<double> terms;
        QuadratureSpec spec;
        spec.mesh_rule_degree = 2;
        for (const LevelSlice& s : slices) {
            const WeightedIntegral I = integrate_mesh(
                s.mesh,
                [&](std::size_t, const std::array<double, 3>&, const Vec3& x) {
                    return q(x);
                },
                0.0, spec);
            terms.push_back(dt * I.value);
        }
        out.levelset_side = pairwise_sum(terms);
    }
    out.relative_gap = std::abs(out.volume_side - out.levelset_side) /
                       std::max({std::abs(out.volume_side),
                                 std::abs(out.levelset_side), 1e-300});
    return out;
}

// --------------------------------------------------------------------------
// Foliated Hardy inequality on a grid domain:
//   LHS = (n-a) int |grad u| |phi|^p / |x|^a
//         + a int (u_r^2/|grad u|) |phi|^p / |x|^a,
//   RHS = Holder product of the per-level mass and energy integrals
//         accumulated over the level grid (coarea on each factor).

struct FoliationProblem {
    const Grid* grid = nullptr;
    std::function<double(const Vec3&)> phi;       // compactly supported
    std::function<Vec3(const Vec3&)> grad_phi;    // ambient gradient
    double p = 2.0;
    double a = 0.0;
    int level_count = 64;
    double exclusion_delta = 0.0;  // phi must vanish for |x| < delta if a > 0
};

inline InequalityReport eval_foliated_hardy(const FoliationProblem& prob) {
    const Grid& g = *prob.grid;
    const int n = 2;  // level sets of a 3D grid are 2-surfaces
    if (!(prob.p >= 1.0)) throw ParamOutOfRange("p must be >= 1");
    if (!(prob.a >= 0.0) || prob.a >= n)
        throw ExponentOutOfRange("a must lie in [0, n)");
    if (prob.a > 0.0 && !(prob.exclusion_delta > 0.0))
        throw SingularityUnprotected(
            "a > 0 needs an exclusion radius for the grid path");

    InequalityReport rep;
    rep.name = "foliated_hardy";
    rep.params = {{"n", double(n)}, {"p", prob.p}, {"a", prob.a}};
    rep.surface = "grid(" + std::to_string(g.dims[0]) + "^3)";
    rep.surface_fingerprint =
        fnv1a(g.values.data(), g.values.size() * sizeof(double));

    const std::vector<double> levels =
        default_levels(g, prob.phi, prob.level_count);
    const double lo = levels.front(), hi = levels.back();
    const double dt = levels.size() > 1 ? levels[1] - levels[0] : hi - lo;

    auto weight = [&](double absx) {
        if (prob.a == 0.0) return 1.0;
        if (absx < prob.exclusion_delta) return 0.0;
        return std::pow(absx, -prob.a);
    };

    // LHS by cell-midpoint quadrature restricted to the level window.
    {
        std::vector<double> t_rad, t_full;
        const double vol = g.spacing[0] * g.spacing[1] * g.spacing[2];
        for (int k = 0; k + 1 < g.dims[2]; ++k)
            for (int j = 0; j + 1 < g.dims[1]; ++j)
                for (int i = 0; i + 1 < g.dims[0]; ++i) {
                    double u = 0.0;
                    Vec3 grad = Vec3::Zero();
                    for (const auto& c : detail::kCorner) {
                        u += g.at(i + c[0], j + c[1], k + c[2]);
                        grad += g.node_gradient(i + c[0], j + c[1], k + c[2]);
                    }
                    u /= 8.0;
                    grad /= 8.0;
                    if (u < lo - 0.5 * dt || u > hi + 0.5 * dt) continue;
                    const Vec3 c = g.point(i, j, k) +
                                   0.5 * Vec3(g.spacing[0], g.spacing[1],
                                              g.spacing[2]);
                    const double ph = prob.phi(c);
                    if (ph == 0.0) continue;
                    const double w = weight(c.norm());
                    if (w == 0.0) continue;
                    const double gn = grad.norm();
                    const double phip = std::pow(std::abs(ph), prob.p);
                    t_full.push_back(vol * gn * phip * w);
                    if (prob.a > 0.0 && gn > 0.0 && c.norm() > 0.0) {
                        const double ur = grad.dot(c) / c.norm();
                        t_rad.push_back(vol * (ur * ur / gn) * phip * w);
                    }
                }
        const double full = pairwise_sum(t_full);
        const double rad = pairwise_sum(t_rad);
        rep.lhs = (n - prob.a) * full + prob.a * rad;
        rep.lhs_terms.push_back({"hardy_term", (n - prob.a) * full, 0.0});
        rep.lhs_terms.push_back({"radial_term", prob.a * rad, 0.0});
    }

    // RHS: per-level factor integrals over the sliced meshes.
    {
        std::vector<double> dropped;
        const std::vector<LevelSlice> slices =
            slice_levelsets(g, levels, &dropped);
        QuadratureSpec spec;
        spec.mesh_rule_degree = 2;
        std::vector<double> mass_terms, energy_terms;
        for (const LevelSlice& s : slices) {
            const SimplicialHypersurface& m = s.mesh;
            std::vector<double> phiv(m.num_vertices());
            for (std::size_t v = 0; v < m.num_vertices(); ++v)
                phiv[v] = prob.phi(m.vertices[v]);
            const std::vector<Vec3> gphi = tangential_gradient(m, phiv);
            auto density = [&](bool energy) {
                return [&, energy](std::size_t f,
                                   const std::array<double, 3>& b,
                                   const Vec3& x) {
                    const double w = weight(x.norm());
                    if (w == 0.0) return 0.0;
                    const Tri& tr = m.triangles[f];
                    const double ph = b[0] * phiv[tr[0]] +
                                      b[1] * phiv[tr[1]] + b[2] * phiv[tr[2]];
                    if (!energy) return std::pow(std::abs(ph), prob.p) * w;
                    const double H =
                        b[0] * m.per_vertex_mean_curvature[tr[0]] +
                        b[1] * m.per_vertex_mean_curvature[tr[1]] +
                        b[2] * m.per_vertex_mean_curvature[tr[2]];
                    const double q2 =
                        prob.p * prob.p * gphi[f].squaredNorm() +
                        H * H * ph * ph;
                    const double wshift =
                        prob.a == 0.0 ? std::pow(x.norm(), prob.p)
                                      : w * std::pow(x.norm(), prob.p);
                    return std::pow(q2, 0.5 * prob.p) * wshift;
                };
            };
            mass_terms.push_back(
                dt * integrate_mesh(m, density(false), 0.0, spec).value);
            energy_terms.push_back(
                dt * integrate_mesh(m, density(true), 0.0, spec).value);
        }
        const double F1 = pairwise_sum(mass_terms);
        const double F2 = pairwise_sum(energy_terms);
        rep.rhs = std::pow(F1, (prob.p - 1.0) / prob.p) *
                  std::pow(F2, 1.0 / prob.p);
        rep.rhs_terms.push_back({"holder_product", rep.rhs, 0.0});
        rep.extras = {{"factor_mass", F1},
                      {"factor_energy", F2},
                      {"dropped_levels", double(dropped.size())}};
    }

    rep.margin = rep.rhs - rep.lhs;
    rep.ratio = rep.rhs != 0.0 ? rep.lhs / rep.rhs : 1.0;
    rep.tolerance = 0.05 * std::max(std::abs(rep.lhs), std::abs(rep.rhs));
    rep.note = "grid path; tolerance reflects slicing resolution";
    return rep;
}

// Radial analytic path for u = |x| on the shell rho0 < |x| < rho1 in
// R^(n+1): the levels are n-spheres of radius t with grad u = u_r = 1,
// grad_T phi = 0 for radial phi, and H = n/t, so both sides collapse to
// n |S^n| int phi^p t^(n-a) dt. Both sides use the same nodes, making the
// collapse exact up to roundoff.
struct RadialFoliation {
    double lhs = 0.0;
    double rhs = 0.0;
};

inline RadialFoliation eval_foliated_hardy_radial(
    int n, const std::function<double(double)>& phi, double p, double a,
    double rho0, double rho1, int panels = 512) {
    if (!(p >= 1.0)) throw ParamOutOfRange("p must be >= 1");
    if (!(a >= 0.0) || a >= n) throw ExponentOutOfRange("a in [0, n)");
    if (!(0.0 < rho0 && rho0 < rho1)) throw ParamOutOfRange("need 0 < rho0 < rho1");
    const GaussLegendre gl = gauss_legendre(8);
    const double area = unit_sphere_area(n);
    std::vector<double> mass_terms, energy_terms;
    const double span = (rho1 - rho0) / panels;
    for (int pa = 0; pa < panels; ++pa) {
        const double t0 = rho0 + pa * span;
        for (std::size_t q = 0; q < gl.node.size(); ++q) {
            const double t = t0 + 0.5 * span * (gl.node[q] + 1.0);
            const double w = 0.5 * span * gl.weight[q];
            const double phip = std::pow(std::abs(phi(t)), p);
            // Level-sphere integrals: dV = |S^n| t^n, weight t^(-a).
            const double mass = area * std::pow(t, n - a) * phip;
            // |p grad_T phi - H nu phi| = (n/t)|phi| on the level sphere.
            const double energy = area * std::pow(t, n - a) *
                                  std::pow(n / t * std::abs(phi(t)), p) *
                                  std::pow(t, p);
            mass_terms.push_back(w * mass);
            energy_terms.push_back(w * energy);
        }
    }
    const double F1 = pairwise_sum(mass_terms);
    const double F2 = pairwise_sum(energy_terms);
    RadialFoliation out;
    // |grad u| = u_r = 1, so the volume integrals reduce to F1 by coarea.
    out.lhs = (n - a) * F1 + a * F1;
    out.rhs = std::pow(F1, (p - 1.0) / p) * std::pow(F2, 1.0 / p);
    return out;
}

}  // namespace hsi
