#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hsi/corpus.hpp"
#include "oracles.hpp"

using namespace hsi;

TEST_CASE("spec strings parse into name and numeric parameters") {
    const ParsedSpec s = parse_spec("icosphere:subdiv=4,R=2.5");
    REQUIRE(s.name == "icosphere");
    REQUIRE(s.get("subdiv", 0.0) == 4.0);
    REQUIRE(s.get("R", 0.0) == 2.5);
    REQUIRE(s.get("missing", -7.0) == -7.0);
    REQUIRE(s.has("R"));
    REQUIRE_FALSE(s.has("missing"));

    REQUIRE(parse_spec("torus").params.empty());
    REQUIRE_THROWS_AS(parse_spec(""), BadSpec);
    REQUIRE_THROWS_AS(parse_spec("a:b"), BadSpec);
    REQUIRE_THROWS_AS(parse_spec("a:k=zzz"), BadSpec);
    REQUIRE_THROWS_AS(make_surface("klein_bottle"), BadSpec);
    REQUIRE_THROWS_AS(make_testfn("mystery", make_surface("icosphere")),
                      BadSpec);
}

TEST_CASE("zero-amplitude perturbed sphere is the round icosphere") {
    const SimplicialHypersurface round = make_icosphere(3);
    const SimplicialHypersurface flat = make_icosphere(3, 1.0, 0.0);
    REQUIRE(round.fingerprint() == flat.fingerprint());
    // Nonzero amplitude actually moves vertices.
    const SimplicialHypersurface bumpy = make_icosphere(3, 1.0, 0.05);
    REQUIRE(round.fingerprint() != bumpy.fingerprint());
    double worst = 0.0;
    for (const Vec3& p : bumpy.vertices)
        worst = std::max(worst, std::abs(p.norm() - 1.0));
    REQUIRE(worst > 1e-3);
    REQUIRE(worst < 0.1);
}

TEST_CASE("radial-normal alignment on the benchmark meshes") {
    // Sphere: x/|x| equals the normal up to discretization.
    const SimplicialHypersurface sph = make_icosphere(4);
    for (std::size_t v = 0; v < sph.num_vertices(); ++v) {
        const double xnu = sph.per_vertex_normal[v].dot(
            sph.vertices[v].normalized());
        REQUIRE(xnu == Catch::Approx(1.0).margin(1e-3));
    }
    // Flat annulus: x is in-plane, the normal is vertical.
    const SimplicialHypersurface ann = make_flat_annulus_mesh(0.2, 1.0);
    for (std::size_t v = 0; v < ann.num_vertices(); ++v)
        REQUIRE(std::abs(ann.per_vertex_normal[v].dot(
                    ann.vertices[v].normalized())) <= 1e-12);
}

TEST_CASE("torus mesh is closed with euler characteristic zero") {
    const SimplicialHypersurface t = make_torus_mesh(2.0, 1.0, 48, 24);
    REQUIRE(t.boundary_edges.empty());
    const long V = static_cast<long>(t.num_vertices());
    const long F = static_cast<long>(t.num_faces());
    REQUIRE(V - 3 * F / 2 + F == 0);
}

TEST_CASE("test functions respect their declared support annulus") {
    const Surface s = make_surface("flat_annulus:r0=0.1,r1=1");
    for (const char* spec : {"radial_bump:delta=0.2,R=0.8",
                             "log_cutoff:eps=0.15,R=0.9", "cone:R=0.7",
                             "ground_state_cutoff:eps=0.2,R=0.95"}) {
        const ScalarField f = make_testfn(spec, s);
        INFO(spec);
        REQUIRE(f.has_support_annulus);
        REQUIRE(check_support_annulus(f));
        // Vanishes at the inner support edge (unless supported to r = 0),
        // alive strictly inside.
        if (f.support_lo > 0.0) REQUIRE(f.radial(f.support_lo) == 0.0);
        REQUIRE(std::abs(f.radial(0.5 * (f.support_lo + f.support_hi))) >
                0.0);
    }
}

TEST_CASE("log cutoff carries the inverse-power profile in its plateau") {
    const Surface s = make_surface("flat_annulus:r0=1e-4,r1=1,n=4");
    const ScalarField f = make_testfn("log_cutoff:eps=1e-3,R=1", s);
    // In the flat middle of the plateau g(s) = s^(-(n-2)/2) exactly.
    for (double r : {0.03, 0.05, 0.08})
        REQUIRE(f.radial(r) == Catch::Approx(std::pow(r, -1.0)).epsilon(1e-12));
    // Derivative consistent with a central difference.
    const double h = 1e-6;
    const double fd = (f.radial(0.05 + h) - f.radial(0.05 - h)) / (2.0 * h);
    REQUIRE(f.radial_deriv(0.05) == Catch::Approx(fd).epsilon(1e-6));
}

TEST_CASE("support must intersect the surface") {
    const Surface s = make_surface("icosphere:subdiv=2");
    REQUIRE_THROWS_AS(make_testfn("radial_bump:delta=5,R=6", s),
                      SupportOutsideSurface);
    REQUIRE_THROWS_AS(make_testfn("log_cutoff:eps=0.001,R=0.01", s),
                      SupportOutsideSurface);
    REQUIRE_NOTHROW(make_testfn("radial_bump:delta=0.5,R=1.5", s));
}

TEST_CASE("random bumps are deterministic in the seed and mesh-only") {
    const Surface s = make_surface("icosphere:subdiv=3");
    const ScalarField a = make_testfn("random_bump:seed=11,count=4", s);
    const ScalarField b = make_testfn("random_bump:seed=11,count=4", s);
    const ScalarField c = make_testfn("random_bump:seed=12,count=4", s);
    REQUIRE(a.values == b.values);
    REQUIRE(a.values != c.values);

    const Surface rev = make_surface("sphere:n=3");
    REQUIRE_THROWS_AS(make_testfn("random_bump:seed=1", rev), BadSpec);

    // Vanishes on the boundary collar of a bordered mesh.
    const Surface disk = make_surface("flat_disk_mesh:rings=12,segs=24");
    const ScalarField d = make_testfn("random_bump:seed=3", disk);
    const SimplicialHypersurface& m = disk.mesh();
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
        if (m.vertex_on_collar[v]) REQUIRE(d.values[v] == 0.0);
}

TEST_CASE("surface factory covers profile and mesh families coherently") {
    for (const char* spec :
         {"sphere:n=3,R=2", "flat_annulus:r0=0.1,r1=2,n=5", "flat_disk:R=1.5",
          "cylinder:R=0.5,L=3", "catenoid:neck=1,span=2,n=2"}) {
        const Surface s = make_surface(spec);
        INFO(spec);
        REQUIRE_FALSE(s.is_mesh());
        REQUIRE(s.dim() >= 2);
        REQUIRE(s.scale() > 0.0);
    }
    for (const char* spec :
         {"icosphere:subdiv=2", "torus:nu=24,nv=12", "graph:res=16",
          "cylinder_mesh:segs=24,stacks=12", "ellipsoid:subdiv=2",
          "catenoid_mesh:segs=24,stacks=16",
          "flat_disk_mesh:rings=8,segs=16"}) {
        const Surface s = make_surface(spec);
        INFO(spec);
        REQUIRE(s.is_mesh());
        REQUIRE(s.dim() == 2);
        REQUIRE(s.fingerprint() == make_surface(spec).fingerprint());
    }
}
