#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "hsi/foliation.hpp"
#include "oracles.hpp"

using namespace hsi;

namespace {

Grid cube_grid(int n, double half, const std::function<double(const Vec3&)>& u) {
    const double h = 2.0 * half / (n - 1);
    return make_grid({n, n, n}, {h, h, h}, {-half, -half, -half}, u);
}

double mesh_area(const SimplicialHypersurface& m) {
    double a = 0.0;
    for (double f : m.per_face_area) a += f;
    return a;
}

}  // namespace

TEST_CASE("grid sampling and node gradients are exact on affine data") {
    const Grid g = cube_grid(9, 1.0, [](const Vec3& x) {
        return 0.5 * x[0] - 2.0 * x[1] + x[2] + 3.0;
    });
    REQUIRE(g.at(0, 0, 0) == Catch::Approx(0.5 * -1.0 + 2.0 - 1.0 + 3.0));
    REQUIRE((g.point(8, 0, 4) - Vec3(1.0, -1.0, 0.0)).norm() <= 1e-14);
    for (int k : {0, 4, 8})
        for (int j : {0, 3})
            for (int i : {1, 8})
                REQUIRE((g.node_gradient(i, j, k) - Vec3(0.5, -2.0, 1.0))
                            .norm() <= 1e-12);
    REQUIRE_THROWS_AS(make_grid({1, 4, 4}, {1, 1, 1}, {0, 0, 0},
                                [](const Vec3&) { return 0.0; }),
                      BadSpec);
}

TEST_CASE("grid files round trip through the binary format") {
    const Grid g = cube_grid(7, 1.0, [](const Vec3& x) {
        return std::sin(x[0]) + x[1] * x[2];
    });
    const std::string path = "test_grid_io.bin";
    save_grid(g, path);
    const Grid back = load_grid(path);
    REQUIRE(back.dims == g.dims);
    REQUIRE(back.spacing == g.spacing);
    REQUIRE(back.origin == g.origin);
    REQUIRE(back.values == g.values);
    std::remove(path.c_str());
    REQUIRE_THROWS_AS(load_grid("no_such_grid_file.bin"), BadSpec);
}

TEST_CASE("slices of a linear function are flat planes of exact area") {
    const Grid g = cube_grid(17, 1.0, [](const Vec3& x) { return x[2]; });
    std::vector<double> dropped;
    const std::vector<LevelSlice> slices =
        slice_levelsets(g, {-0.3, 0.1, 0.4, 2.0}, &dropped);
    REQUIRE(slices.size() == 3);
    REQUIRE(dropped == std::vector<double>{2.0});
    for (const LevelSlice& s : slices) {
        INFO("level " << s.level);
        // Cross-section of the box is the 2 x 2 square.
        REQUIRE(mesh_area(s.mesh) == Catch::Approx(4.0).epsilon(1e-9));
        REQUIRE_FALSE(s.mesh.boundary_edges.empty());
        for (std::size_t v = 0; v < s.mesh.num_vertices(); ++v)
            REQUIRE(s.mesh.vertices[v][2] ==
                    Catch::Approx(s.level).margin(1e-3));
        // Oriented along grad u = e3, and flat: H from the grid vanishes.
        for (std::size_t f = 0; f < s.mesh.num_faces(); ++f)
            REQUIRE(s.mesh.per_face_normal[f][2] > 0.99);
        for (std::size_t v = 0; v < s.mesh.num_vertices(); ++v)
            REQUIRE(std::abs(s.mesh.per_vertex_mean_curvature[v]) <= 1e-6);
    }
}

TEST_CASE("a level set of |x|^2 is a watertight sphere") {
    const Grid g = cube_grid(48, 1.2,
                             [](const Vec3& x) { return x.squaredNorm(); });
    const std::vector<LevelSlice> slices = slice_levelsets(g, {0.81});
    REQUIRE(slices.size() == 1);
    const SimplicialHypersurface& m = slices[0].mesh;
    REQUIRE(m.boundary_edges.empty());
    const long V = static_cast<long>(m.num_vertices());
    const long F = static_cast<long>(m.num_faces());
    REQUIRE(V - 3 * F / 2 + F == 2);
    REQUIRE(mesh_area(m) ==
            Catch::Approx(4.0 * std::numbers::pi * 0.81).epsilon(0.02));
    // Outward orientation (along grad u = 2x) and H close to 2/r.
    double h_err = 0.0;
    std::size_t count = 0;
    for (std::size_t v = 0; v < m.num_vertices(); ++v) {
        REQUIRE(m.per_vertex_normal[v].dot(m.vertices[v]) > 0.0);
        h_err += std::abs(m.per_vertex_mean_curvature[v] - 2.0 / 0.9);
        ++count;
    }
    REQUIRE(h_err / count <= 0.05);
}

TEST_CASE("default level grids stay inside the sampled range") {
    const Grid g = cube_grid(16, 1.0,
                             [](const Vec3& x) { return x.squaredNorm(); });
    const std::vector<double> levels = default_levels(g, nullptr, 20);
    REQUIRE(levels.size() == 20);
    REQUIRE(std::is_sorted(levels.begin(), levels.end()));
    REQUIRE(levels.front() >= g.umin());
    REQUIRE(levels.back() <= g.umax());
    // Restricting to a support region narrows the window.
    const std::vector<double> inner = default_levels(
        g, [](const Vec3& x) { return x.norm() < 0.5 ? 1.0 : 0.0; }, 20);
    REQUIRE(inner.back() < levels.back());
}

TEST_CASE("coarea consistency on slab and radial foliations") {
    const Grid slab = cube_grid(33, 1.0, [](const Vec3& x) { return x[2]; });
    const CoareaCheck flat = coarea_consistency(
        slab, [](const Vec3& x) { return 1.0 + 0.2 * x[0]; }, 32);
    REQUIRE(flat.relative_gap <= 0.02);
    REQUIRE(flat.dropped_levels == 0);

    const Grid rad = cube_grid(48, 1.0,
                               [](const Vec3& x) { return x.norm(); });
    const CoareaCheck round =
        coarea_consistency(rad, [](const Vec3&) { return 1.0; }, 32);
    REQUIRE(round.relative_gap <= 0.03);
}

TEST_CASE("foliated inequality holds on a slab foliation") {
    const Grid g = cube_grid(40, 1.0, [](const Vec3& x) { return x[2]; });
    FoliationProblem prob;
    prob.grid = &g;
    // Supported in 0.3 < |x| < 0.85, strictly outside the exclusion radius
    // used below, so the weighted case never truncates the support.
    prob.phi = [](const Vec3& x) {
        const double r = x.norm();
        if (r <= 0.3 || r >= 0.85) return 0.0;
        const double u = (r - 0.3) / 0.55;
        const double sn = std::sin(std::numbers::pi * u);
        return sn * sn;
    };
    prob.grad_phi = [](const Vec3&) { return Vec3::Zero(); };
    prob.p = 2.0;
    prob.level_count = 32;

    prob.a = 0.0;
    const InequalityReport rep = eval_foliated_hardy(prob);
    REQUIRE(rep.passed());
    REQUIRE(rep.lhs > 0.0);
    REQUIRE(rep.rhs > 0.0);

    prob.a = 1.0;
    REQUIRE_THROWS_AS(eval_foliated_hardy(prob), SingularityUnprotected);
    prob.exclusion_delta = 0.25;
    const InequalityReport weighted = eval_foliated_hardy(prob);
    REQUIRE(weighted.passed());

    prob.a = 2.0;
    REQUIRE_THROWS_AS(eval_foliated_hardy(prob), ExponentOutOfRange);
    prob.a = 0.0;
    prob.p = 0.5;
    REQUIRE_THROWS_AS(eval_foliated_hardy(prob), ParamOutOfRange);
}

TEST_CASE("radial foliation collapses to exact equality") {
    auto bump = [](double t) {
        if (t <= 0.3 || t >= 1.7) return 0.0;
        const double u = (t - 0.3) / 1.4;
        const double sn = std::sin(std::numbers::pi * u);
        return sn * sn;
    };
    for (int n : {2, 3, 4}) {
        for (double a : {0.0, 1.0}) {
            const RadialFoliation rf =
                eval_foliated_hardy_radial(n, bump, 2.0, a, 0.3, 1.7);
            INFO("n=" << n << " a=" << a);
            REQUIRE(rf.lhs == Catch::Approx(rf.rhs).epsilon(1e-12));
            // Both sides equal n |S^n| int phi^p t^(n-a) dt.
            const double want =
                double(n) * oracle::sphere_area(n) *
                oracle::integrate(
                    [&](double t) {
                        return bump(t) * bump(t) * std::pow(t, n - a);
                    },
                    0.3, 1.7);
            REQUIRE(rf.lhs == Catch::Approx(want).epsilon(1e-8));
        }
    }
    REQUIRE_THROWS_AS(eval_foliated_hardy_radial(3, bump, 2.0, 3.0, 0.3, 1.7),
                      ExponentOutOfRange);
    REQUIRE_THROWS_AS(eval_foliated_hardy_radial(3, bump, 0.5, 0.0, 0.3, 1.7),
                      ParamOutOfRange);
    REQUIRE_THROWS_AS(eval_foliated_hardy_radial(3, bump, 2.0, 0.0, 1.7, 0.3),
                      ParamOutOfRange);
}
