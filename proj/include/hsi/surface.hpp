#pragma once

// Unified view of a mesh or revolution geometry paired with a test function.
// Every Hardy-type side reduces to integrals of pointwise data
// (phi, |grad_T phi|, H, |x|, (x/|x|).nu) against the weight |x|^(-a),
// so the evaluators are written once against this interface.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hsi/core.hpp"
#include "hsi/fields.hpp"
#include "hsi/mesh.hpp"
#include "hsi/quadrature.hpp"
#include "hsi/revolution.hpp"
#include "hsi/tangential.hpp"

namespace hsi {

struct PointData {
    double phi = 0.0;
    double grad_norm = 0.0;  // |grad_T phi|
    double H = 0.0;
    double abs_x = 0.0;
    double xnu = 0.0;  // (x/|x|) . nu
};

class Surface {
public:
    Surface() = default;
    explicit Surface(std::shared_ptr<const SimplicialHypersurface> m)
        : mesh_(std::move(m)) {}
    explicit Surface(std::shared_ptr<const RevolutionHypersurface> s)
        : rev_(std::move(s)) {}

    static Surface from_mesh(SimplicialHypersurface m) {
        return Surface(
            std::make_shared<const SimplicialHypersurface>(std::move(m)));
    }
    static Surface from_revolution(RevolutionHypersurface s) {
        return Surface(
            std::make_shared<const RevolutionHypersurface>(std::move(s)));
    }

    bool is_mesh() const { return static_cast<bool>(mesh_); }
    const SimplicialHypersurface& mesh() const { return *mesh_; }
    const RevolutionHypersurface& revolution() const { return *rev_; }

    int dim() const { return is_mesh() ? mesh_->intrinsic_dim() : rev_->n; }

    std::string name() const {
        return is_mesh() ? mesh_->name : rev_->name;
    }
    std::uint64_t fingerprint() const {
        return is_mesh() ? mesh_->fingerprint() : rev_->fingerprint();
    }

    // Characteristic length used for relative tolerances.
    double scale() const {
        if (is_mesh()) return mesh_->bbox_diagonal();
        double rmax = 0.0;
        for (int i = 0; i <= 64; ++i) {
            const double t = rev_->t0 + (rev_->t1 - rev_->t0) * i / 64.0;
            rmax = std::max(rmax, rev_->abs_x(t));
        }
        return 2.0 * rmax;
    }

    double max_abs_H() const {
        if (is_mesh()) {
            double h = 0.0;
            for (std::size_t v = 0; v < mesh_->num_vertices(); ++v)
                if (!mesh_->vertex_on_collar[v])
                    h = std::max(h,
                                 std::abs(mesh_->per_vertex_mean_curvature[v]));
            return h;
        }
        double h = 0.0;
        const int probes = 513;
        for (int i = 1; i < probes; ++i) {
            const double t = rev_->t0 + (rev_->t1 - rev_->t0) * i / probes;
            h = std::max(h, std::abs(rev_->mean_curvature(t)));
        }
        return h;
    }

    double min_abs_x() const {
        if (is_mesh()) return mesh_->min_abs_x();
        double m = std::numeric_limits<double>::max();
        const int probes = 512;
        for (int i = 0; i <= probes; ++i) {
            const double t = rev_->t0 + (rev_->t1 - rev_->t0) * i / probes;
            m = std::min(m, rev_->abs_x(t));
        }
        return m;
    }

    // A revolution profile end is "closed" when the radius pinches to zero
    // (poles of a sphere, center of a disk); otherwise it is a boundary
    // circle where admissible test functions must vanish.
    bool end_closed(bool upper) const {
        const double t = upper ? rev_->t1 : rev_->t0;
        return rev_->at(t).r < 1e-9 * scale();
    }

private:
    std::shared_ptr<const SimplicialHypersurface> mesh_;
    std::shared_ptr<const RevolutionHypersurface> rev_;
};

using Density = std::function<double(const PointData&)>;

// Compact-support admissibility: on meshes with boundary the field must
// vanish on the boundary collar; on revolution surfaces it must vanish at
// every non-closed profile end.
inline void check_admissible(const Surface& s, const ScalarField& phi) {
    if (s.is_mesh()) {
        const SimplicialHypersurface& m = s.mesh();
        if (m.boundary_edges.empty()) return;
        const std::vector<double> v = sample_vertices(m, phi);
        double peak = 0.0;
        for (double x : v) peak = std::max(peak, std::abs(x));
        for (std::size_t i = 0; i < m.num_vertices(); ++i)
            if (m.vertex_on_collar[i] &&
                std::abs(v[i]) > 1e-9 * std::max(1.0, peak))
                throw SupportViolation(phi.name +
                                       " does not vanish on the boundary "
                                       "collar of " + m.name);
        return;
    }
    const RevolutionHypersurface& r = s.revolution();
    if (!phi.is_radial)
        throw BadSpec("revolution path requires a radial test function");
    double peak = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double t = r.t0 + (r.t1 - r.t0) * i / 64.0;
        peak = std::max(peak, std::abs(phi.radial(r.abs_x(t))));
    }
    for (int side = 0; side < 2; ++side) {
        if (s.end_closed(side == 1)) continue;
        const double tend = side == 1 ? r.t1 : r.t0;
        const double val = phi.radial(r.abs_x(tend));
        if (std::abs(val) > 1e-9 * std::max(1.0, peak))
            throw SupportViolation(phi.name +
                                   " does not vanish at the open profile end "
                                   "of " + r.name);
    }
}

// Weighted integral of density(PointData)/|x|^a over the surface.
inline WeightedIntegral integrate_density(const Surface& s,
                                          const ScalarField& phi,
                                          const Density& density,
                                          double weight_exponent,
                                          const QuadratureSpec& spec) {
    if (!s.is_mesh()) {
        const RevolutionHypersurface& r = s.revolution();
        if (!phi.is_radial)
            throw BadSpec("revolution path requires a radial test function");
        if (weight_exponent >= r.n)
            throw ExponentOutOfRange(
                "weight exponent a = " + std::to_string(weight_exponent) +
                " must satisfy a < n = " + std::to_string(r.n));
        auto f = [&](double t) {
            const ProfilePoint p = r.at(t);
            PointData d;
            d.abs_x = std::hypot(p.r, p.z);
            d.phi = phi.radial(d.abs_x);
            // phi(x) = g(|x|): |grad_T phi| = |g'(|x|)| |d|x|/dt| since the
            // profile is arc length and g has no angular dependence.
            const double dabs = d.abs_x > 0.0
                                    ? (p.r * p.rp + p.z * p.zp) / d.abs_x
                                    : 1.0;
            d.grad_norm = std::abs(phi.radial_deriv(d.abs_x) * dabs);
            d.H = r.mean_curvature(t);
            d.xnu = d.abs_x > 0.0 ? (p.r * p.zp - p.z * p.rp) / d.abs_x : 0.0;
            const double dv = density(d);
            return dv == 0.0
                       ? 0.0
                       : dv * singular_weight(d.abs_x, weight_exponent, spec);
        };
        const RevolutionQuadResult q = integrate_revolution(
            r, f, spec.profile_panels, spec.profile_gl_order);
        return {q.value, q.error_estimate};
    }

    const SimplicialHypersurface& m = s.mesh();
    const std::vector<double> phiv = sample_vertices(m, phi);
    const std::vector<Vec3> grad = tangential_gradient(m, phiv);
    auto f = [&](std::size_t face, const std::array<double, 3>& b,
                 const Vec3& x) {
        const Tri& t = m.triangles[face];
        PointData d;
        d.phi = b[0] * phiv[t[0]] + b[1] * phiv[t[1]] + b[2] * phiv[t[2]];
        d.grad_norm = grad[face].norm();
        d.H = b[0] * m.per_vertex_mean_curvature[t[0]] +
              b[1] * m.per_vertex_mean_curvature[t[1]] +
              b[2] * m.per_vertex_mean_curvature[t[2]];
        d.abs_x = x.norm();
        Vec3 nu = b[0] * m.per_vertex_normal[t[0]] +
                  b[1] * m.per_vertex_normal[t[1]] +
                  b[2] * m.per_vertex_normal[t[2]];
        const double nn = nu.norm();
        d.xnu = (nn > 0.0 && d.abs_x > 0.0) ? x.dot(nu) / (nn * d.abs_x) : 0.0;
        return density(d);
    };
    return integrate_mesh(m, f, weight_exponent, spec);
}

// Default quadrature for a (surface, field) pair: exclusion at the declared
// support annulus when the field stays away from the origin.
inline QuadratureSpec default_quadrature(const ScalarField& phi) {
    QuadratureSpec spec;
    if (phi.has_support_annulus && phi.support_lo > 0.0) {
        spec.policy = SingularPolicy::exclusion;
        spec.exclusion_delta = 0.5 * phi.support_lo;
    }
    return spec;
}

}  // namespace hsi
