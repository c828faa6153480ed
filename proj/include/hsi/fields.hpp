#pragma once

// Scalar test functions and ambient vector fields on a hypersurface.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hsi/core.hpp"
#include "hsi/mesh.hpp"

namespace hsi {

struct ScalarField {
    enum class Kind { per_vertex, callable };
    Kind kind = Kind::callable;

    std::vector<double> values;                   // per_vertex
    std::function<double(const Vec3&)> eval;      // callable, mesh path

    // Radial form g(|x|) with derivative, when the field is a function of
    // |x| only. This is what the revolution path consumes.
    bool is_radial = false;
    std::function<double(double)> radial;
    std::function<double(double)> radial_deriv;

    // Declared support annulus [lo, hi] in |x|; field must vanish outside.
    double support_lo = 0.0;
    double support_hi = std::numeric_limits<double>::infinity();
    bool has_support_annulus = false;

    std::string name = "field";

    double operator()(const Vec3& x) const {
        if (kind != Kind::callable)
            throw FieldSizeMismatch("scalar field is not callable");
        return eval(x);
    }
};

inline ScalarField make_per_vertex_field(std::vector<double> values,
                                         std::string name = "per_vertex") {
    ScalarField f;
    f.kind = ScalarField::Kind::per_vertex;
    f.values = std::move(values);
    f.name = std::move(name);
    return f;
}

inline ScalarField make_callable_field(std::function<double(const Vec3&)> eval,
                                       std::string name = "callable") {
    ScalarField f;
    f.kind = ScalarField::Kind::callable;
    f.eval = std::move(eval);
    f.name = std::move(name);
    return f;
}

inline ScalarField make_radial_field(std::function<double(double)> g,
                                     std::function<double(double)> dg,
                                     double lo, double hi,
                                     std::string name = "radial") {
    ScalarField f;
    f.kind = ScalarField::Kind::callable;
    f.is_radial = true;
    f.radial = g;
    f.radial_deriv = std::move(dg);
    f.eval = [g](const Vec3& x) { return g(x.norm()); };
    f.support_lo = lo;
    f.support_hi = hi;
    f.has_support_annulus = true;
    f.name = std::move(name);
    return f;
}

// Sample a field to per-vertex values.
inline std::vector<double> sample_vertices(const SimplicialHypersurface& m,
                                           const ScalarField& f) {
    if (f.kind == ScalarField::Kind::per_vertex) {
        if (f.values.size() != m.num_vertices())
            throw FieldSizeMismatch(f.name + ": " +
                                    std::to_string(f.values.size()) +
                                    " values for " +
                                    std::to_string(m.num_vertices()) +
                                    " vertices");
        return f.values;
    }
    std::vector<double> out(m.num_vertices());
    for (std::size_t v = 0; v < m.num_vertices(); ++v)
        out[v] = f.eval(m.vertices[v]);
    return out;
}

// Sampled check of the declared support annulus.
inline bool check_support_annulus(const ScalarField& f, int samples = 1000) {
    if (!f.has_support_annulus || !f.eval) return true;
    SplitMixRng rng(0x5eedf00dull);
    for (int i = 0; i < samples; ++i) {
        // Points outside [lo, hi] in |x|, random directions.
        const double u = rng.next_double();
        double r;
        if (i % 2 == 0) {
            r = f.support_lo * u;  // inside the hole
            if (f.support_lo == 0.0) continue;
        } else {
            if (!std::isfinite(f.support_hi)) continue;
            r = f.support_hi * (1.0 + 3.0 * u) + 1e-12;
        }
        const double z = 2.0 * rng.next_double() - 1.0;
        const double th = 2.0 * std::numbers::pi * rng.next_double();
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        const Vec3 x = r * Vec3(s * std::cos(th), s * std::sin(th), z);
        if (std::abs(f.eval(x)) > 1e-12) return false;
    }
    return true;
}

struct VectorField {
    enum class Kind { per_face, per_vertex, callable };
    Kind kind = Kind::callable;
    std::vector<Vec3> values;
    std::function<Vec3(const Vec3&)> eval;
    bool tangent = false;
    std::string name = "vector_field";
};

inline VectorField make_per_face_vf(std::vector<Vec3> values,
                                    bool tangent = false) {
    VectorField z;
    z.kind = VectorField::Kind::per_face;
    z.values = std::move(values);
    z.tangent = tangent;
    return z;
}

inline VectorField make_per_vertex_vf(std::vector<Vec3> values,
                                      bool tangent = false) {
    VectorField z;
    z.kind = VectorField::Kind::per_vertex;
    z.values = std::move(values);
    z.tangent = tangent;
    return z;
}

inline VectorField make_callable_vf(std::function<Vec3(const Vec3&)> eval,
                                    bool tangent = false) {
    VectorField z;
    z.kind = VectorField::Kind::callable;
    z.eval = std::move(eval);
    z.tangent = tangent;
    return z;
}

// Per-vertex samples of a vector field; checks the tangency declaration.
inline std::vector<Vec3> sample_vertices(const SimplicialHypersurface& m,
                                         const VectorField& z) {
    std::vector<Vec3> out;
    switch (z.kind) {
        case VectorField::Kind::per_vertex:
            if (z.values.size() != m.num_vertices())
                throw FieldSizeMismatch(z.name + ": per-vertex size mismatch");
            out = z.values;
            break;
        case VectorField::Kind::callable:
            out.resize(m.num_vertices());
            for (std::size_t v = 0; v < m.num_vertices(); ++v)
                out[v] = z.eval(m.vertices[v]);
            break;
        case VectorField::Kind::per_face:
            throw FieldSizeMismatch(z.name +
                                    ": per-face field has no vertex samples");
    }
    if (z.tangent) {
        for (std::size_t v = 0; v < m.num_vertices(); ++v) {
            const double dot = std::abs(out[v].dot(m.per_vertex_normal[v]));
            if (dot > 1e-10 * std::max(1.0, out[v].norm()))
                throw FieldSizeMismatch(z.name +
                                        ": declared tangent but Z.nu != 0");
        }
    }
    return out;
}

}  // namespace hsi
