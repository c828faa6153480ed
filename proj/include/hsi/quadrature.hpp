#pragma once

// Weighted integration over meshes and profiles, with explicit handling of
// the singular weights |x|^(-a) carried by every Hardy-type term.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hsi/core.hpp"
#include "hsi/mesh.hpp"
#include "json.hpp"

namespace hsi {

enum class SingularPolicy { none, exclusion, regularization };

struct QuadratureSpec {
    int mesh_rule_degree = 4;   // symmetric triangle rule, degree in {2,4,6}
    int profile_panels = 256;   // composite Gauss-Legendre panels
    int profile_gl_order = 8;
    SingularPolicy policy = SingularPolicy::none;
    double exclusion_delta = 0.0;
    double regularization_eps = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["mesh_rule_degree"] = mesh_rule_degree;
        j["profile_panels"] = profile_panels;
        j["profile_gl_order"] = profile_gl_order;
        j["singular_policy"] = policy == SingularPolicy::none
                                   ? "none"
                                   : (policy == SingularPolicy::exclusion
                                          ? "exclusion"
                                          : "regularization");
        j["exclusion_delta"] = exclusion_delta;
        j["regularization_eps"] = regularization_eps;
        j["summation"] = "fixed-order pairwise";
        return j;
    }
};

struct TriangleRule {
    // Barycentric points and weights (weights sum to 1).
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weight;
};

inline const TriangleRule& triangle_rule(int degree) {
    static const TriangleRule deg2 = [] {
        TriangleRule r;
        r.bary = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
        r.weight = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        return r;
    }();
    static const TriangleRule deg4 = [] {
        TriangleRule r;
        const double a = 0.445948490915965, wa = 0.223381589678011;
        const double b = 0.091576213509771, wb = 0.109951743655322;
        for (int k = 0; k < 3; ++k) {
            std::array<double, 3> pa{a, a, a}, pb{b, b, b};
            pa[k] = 1.0 - 2.0 * a;
            pb[k] = 1.0 - 2.0 * b;
            r.bary.push_back(pa);
            r.weight.push_back(wa);
            r.bary.push_back(pb);
            r.weight.push_back(wb);
        }
        return r;
    }();
    static const TriangleRule deg6 = [] {
        TriangleRule r;
        const double a1 = 0.063089014491502, w1 = 0.050844906370207;
        const double a2 = 0.249286745170910, w2 = 0.116786275726379;
        for (int k = 0; k < 3; ++k) {
            std::array<double, 3> p1{a1, a1, a1}, p2{a2, a2, a2};
            p1[k] = 1.0 - 2.0 * a1;
            p2[k] = 1.0 - 2.0 * a2;
            r.bary.push_back(p1);
            r.weight.push_back(w1);
            r.bary.push_back(p2);
            r.weight.push_back(w2);
        }
        const double u = 0.310352451033785, v = 0.636502499121399,
                     w = 0.053145049844816, w3 = 0.082851075618374;
        const std::array<std::array<double, 3>, 6> perms = {
            std::array<double, 3>{u, v, w}, {v, w, u}, {w, u, v},
            {u, w, v}, {w, v, u}, {v, u, w}};
        for (const auto& p : perms) {
            r.bary.push_back(p);
            r.weight.push_back(w3);
        }
        return r;
    }();
    switch (degree) {
        case 2: return deg2;
        case 4: return deg4;
        case 6: return deg6;
        default: throw ParamOutOfRange("triangle rule degree must be 2, 4, or 6");
    }
}

struct WeightedIntegral {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Apply the singular policy to the weight factor 1/|x|^a.
inline double singular_weight(double abs_x, double a,
                              const QuadratureSpec& spec) {
    if (a == 0.0) return 1.0;
    switch (spec.policy) {
        case SingularPolicy::exclusion:
            if (abs_x < spec.exclusion_delta) return 0.0;
            return std::pow(abs_x, -a);
        case SingularPolicy::regularization:
            return std::pow(abs_x * abs_x +
                                spec.regularization_eps * spec.regularization_eps,
                            -0.5 * a);
        case SingularPolicy::none:
            return std::pow(abs_x, -a);
    }
    return std::pow(abs_x, -a);
}

// density(face index, barycentric coords, position) -> value (weight not
// included). Integrates density / |x|^a over the mesh.
inline WeightedIntegral integrate_mesh(
    const SimplicialHypersurface& m,
    const std::function<double(std::size_t, const std::array<double, 3>&,
                               const Vec3&)>& density,
    double weight_exponent, const QuadratureSpec& spec) {
    const int n = m.intrinsic_dim();
    if (weight_exponent >= n)
        throw ExponentOutOfRange("weight exponent a = " +
                                 std::to_string(weight_exponent) +
                                 " must satisfy a < n = " + std::to_string(n));
    const bool singular = weight_exponent > 0.0;
    if (singular && spec.policy == SingularPolicy::exclusion &&
        spec.exclusion_delta <= 0.0)
        throw SingularityUnprotected("exclusion policy with delta <= 0");
    if (singular && spec.policy == SingularPolicy::regularization &&
        spec.regularization_eps <= 0.0)
        throw SingularityUnprotected("regularization policy with eps <= 0");
    const double probe_radius = 1e-3 * m.bbox_diagonal();

    auto run = [&](int degree) {
        const TriangleRule& rule = triangle_rule(degree);
        std::vector<double> contributions;
        contributions.reserve(m.num_faces() * rule.bary.size());
        for (std::size_t f = 0; f < m.num_faces(); ++f) {
            const Tri& t = m.triangles[f];
            for (std::size_t q = 0; q < rule.bary.size(); ++q) {
                const auto& b = rule.bary[q];
                const Vec3 x = b[0] * m.vertices[t[0]] +
                               b[1] * m.vertices[t[1]] +
                               b[2] * m.vertices[t[2]];
                const double d = density(f, b, x);
                if (d == 0.0) continue;
                const double ax = x.norm();
                if (singular && spec.policy == SingularPolicy::none &&
                    ax < probe_radius)
                    throw SingularityUnprotected(
                        "weighted density is nonzero near the origin and no "
                        "singular policy is active");
                contributions.push_back(m.per_face_area[f] * rule.weight[q] *
                                        d *
                                        singular_weight(ax, weight_exponent,
                                                        spec));
            }
        }
        return pairwise_sum(contributions);
    };

    WeightedIntegral out;
    out.value = run(spec.mesh_rule_degree);
    const int check_degree = spec.mesh_rule_degree >= 6 ? 4 : 2;
    out.error_estimate = std::abs(out.value - run(check_degree));
    return out;
}

}  // namespace hsi
