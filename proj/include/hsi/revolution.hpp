#pragma once

// Hypersurfaces of revolution in R^{n+1}: an arc-length profile t -> (r, z)
// in the half-plane r >= 0, spun over S^{n-1}. Surface integrals of
// rotationally symmetric data collapse to 1D integrals against r(t)^{n-1}.
//
// Conventions: profile unit tangent (r', z'), surface normal direction
// (z', -r') (rotated through the symmetry group), and
//   H(t) = (z'' r' - r'' z') + (n-1) z'(t) / r(t),
// which gives H = n/R on the sphere of radius R traversed from the south
// pole with this normal pointing outward.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "hsi/core.hpp"
#include "json.hpp"

namespace hsi {

struct ProfilePoint {
    double r = 0, z = 0;
    double rp = 0, zp = 0;    // first derivatives in arc length
    double rpp = 0, zpp = 0;  // second derivatives
};

struct RevolutionHypersurface {
    int n = 2;            // intrinsic dimension; ambient dimension n + 1
    double t0 = 0, t1 = 1;
    std::function<ProfilePoint(double)> profile;
    std::string name = "revolution";

    ProfilePoint at(double t) const { return profile(t); }

    double mean_curvature(double t) const {
        const ProfilePoint p = profile(t);
        return (p.zpp * p.rp - p.rpp * p.zp) + (n - 1) * p.zp / p.r;
    }
    // |x| and (x . nu) at profile parameter t; nu = (z' theta, -r').
    double abs_x(double t) const {
        const ProfilePoint p = profile(t);
        return std::hypot(p.r, p.z);
    }
    double x_dot_nu(double t) const {
        const ProfilePoint p = profile(t);
        return p.r * p.zp - p.z * p.rp;
    }

    std::uint64_t fingerprint() const {
        // Hash of a fixed geometry sampling.
        std::vector<double> probe;
        for (int i = 0; i <= 64; ++i) {
            const double t = t0 + (t1 - t0) * i / 64.0;
            const ProfilePoint p = profile(t);
            probe.push_back(p.r);
            probe.push_back(p.z);
        }
        probe.push_back(static_cast<double>(n));
        return fnv1a(probe.data(), probe.size() * sizeof(double));
    }
};

namespace detail {

inline void validate_profile(const RevolutionHypersurface& s) {
    const int probes = 257;
    for (int i = 1; i < probes - 1; ++i) {
        const double t = s.t0 + (s.t1 - s.t0) * i / (probes - 1.0);
        const ProfilePoint p = s.at(t);
        if (!(p.r > 0.0))
            throw NonPositiveRadius("profile radius <= 0 at t = " +
                                    std::to_string(t));
        const double speed = p.rp * p.rp + p.zp * p.zp;
        if (std::abs(speed - 1.0) > 1e-10)
            throw NonSmoothProfile("profile is not arc-length parametrized");
    }
}

}  // namespace detail

inline RevolutionHypersurface revolution_sphere(double radius, int n) {
    if (radius <= 0.0) throw NonPositiveRadius("sphere radius must be > 0");
    if (n < 2) throw ParamOutOfRange("revolution surfaces need n >= 2");
    RevolutionHypersurface s;
    s.n = n;
    s.t0 = 0.0;
    s.t1 = std::numbers::pi * radius;
    s.name = "sphere(R=" + std::to_string(radius) + ")";
    s.profile = [radius](double t) {
        const double a = t / radius;
        ProfilePoint p;
        p.r = radius * std::sin(a);
        p.z = -radius * std::cos(a);
        p.rp = std::cos(a);
        p.zp = std::sin(a);
        p.rpp = -std::sin(a) / radius;
        p.zpp = std::cos(a) / radius;
        return p;
    };
    detail::validate_profile(s);
    return s;
}

inline RevolutionHypersurface revolution_annulus(double r0, double r1, int n) {
    if (r0 < 0.0 || r1 <= r0)
        throw NonPositiveRadius("annulus radii must satisfy 0 <= r0 < r1");
    if (n < 2) throw ParamOutOfRange("revolution surfaces need n >= 2");
    RevolutionHypersurface s;
    s.n = n;
    s.t0 = r0;
    s.t1 = r1;
    s.name = "flat_annulus(" + std::to_string(r0) + "," + std::to_string(r1) + ")";
    s.profile = [](double t) {
        ProfilePoint p;
        p.r = t;
        p.z = 0.0;
        p.rp = 1.0;
        p.zp = 0.0;
        return p;
    };
    detail::validate_profile(s);
    return s;
}

inline RevolutionHypersurface revolution_cylinder(double radius, double length,
                                                  int n) {
    if (radius <= 0.0) throw NonPositiveRadius("cylinder radius must be > 0");
    if (length <= 0.0) throw ParamOutOfRange("cylinder length must be > 0");
    if (n < 2) throw ParamOutOfRange("revolution surfaces need n >= 2");
    RevolutionHypersurface s;
    s.n = n;
    s.t0 = 0.0;
    s.t1 = length;
    s.name = "cylinder(R=" + std::to_string(radius) + ")";
    s.profile = [radius, length](double t) {
        ProfilePoint p;
        p.r = radius;
        p.z = t - 0.5 * length;
        p.rp = 0.0;
        p.zp = 1.0;
        return p;
    };
    detail::validate_profile(s);
    return s;
}

// ---------------------------------------------------------------------------
// Catenoid-type minimal profile: H = 0 enforced through the tangent-angle
// system  r' = sin(psi), z' = cos(psi), psi' = (n-1) cos(psi) / r,
// integrated from the neck outward (classic RK4, fixed fine step), which is
// the conservation law r^{n-1} cos(psi) = neck^{n-1} in differential form.

struct CatenoidProfileData {
    int n = 2;
    double neck = 1.0;
    double half_span = 2.0;  // arc length from neck to either end
    // Uniform arc-length tables on [0, half_span].
    std::vector<double> r, z, psi, dpsi;
    double step = 0.0;
};

inline CatenoidProfileData solve_catenoid_profile(int n, double neck_radius,
                                                  double half_span = 2.0) {
    if (neck_radius <= 0.0)
        throw NonPositiveRadius("catenoid neck radius must be > 0");
    if (n < 2) throw ParamOutOfRange("catenoid needs n >= 2");
    if (half_span <= 0.0) throw ParamOutOfRange("catenoid span must be > 0");

    CatenoidProfileData data;
    data.n = n;
    data.neck = neck_radius;
    data.half_span = half_span;

    const int steps = 1 << 15;
    const double h = half_span / steps;
    data.step = h;
    double r = neck_radius, z = 0.0, psi = 0.0;
    auto rhs = [n](double r_, double psi_, double& dr, double& dz,
                   double& dpsi) {
        dr = std::sin(psi_);
        dz = std::cos(psi_);
        dpsi = (n - 1) * std::cos(psi_) / r_;
    };
    data.r.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        double dr, dz, dpsi;
        rhs(r, psi, dr, dz, dpsi);
        data.r.push_back(r);
        data.z.push_back(z);
        data.psi.push_back(psi);
        data.dpsi.push_back(dpsi);
        if (i == steps) break;
        // RK4 on (r, z, psi).
        double k1r = dr, k1z = dz, k1p = dpsi;
        double k2r, k2z, k2p;
        rhs(r + 0.5 * h * k1r, psi + 0.5 * h * k1p, k2r, k2z, k2p);
        double k3r, k3z, k3p;
        rhs(r + 0.5 * h * k2r, psi + 0.5 * h * k2p, k3r, k3z, k3p);
        double k4r, k4z, k4p;
        rhs(r + h * k3r, psi + h * k3p, k4r, k4z, k4p);
        r += h / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r);
        z += h / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
        psi += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        if (!std::isfinite(r) || !std::isfinite(psi) || r <= 0.0)
            throw StepperFailure("catenoid integration left the domain");
    }
    return data;
}

inline RevolutionHypersurface revolution_catenoid(int n, double neck_radius,
                                                  double half_span = 2.0) {
    auto data =
        std::make_shared<CatenoidProfileData>(
            solve_catenoid_profile(n, neck_radius, half_span));
    RevolutionHypersurface s;
    s.n = n;
    s.t0 = -half_span;
    s.t1 = half_span;
    s.name = "catenoid(n=" + std::to_string(n) + ")";
    s.profile = [data, n](double t) {
        const double sgn = t < 0.0 ? -1.0 : 1.0;
        const double s_ = std::abs(t);
        // Cubic Hermite on the uniform table.
        const double pos = std::min(
            s_ / data->step, static_cast<double>(data->r.size() - 1) - 1e-12);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double u = pos - static_cast<double>(i);
        const double h = data->step;
        auto hermite = [u, h](double f0, double f1, double d0, double d1) {
            const double u2 = u * u, u3 = u2 * u;
            return (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * h * d0 +
                   (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * h * d1;
        };
        const double psi0 = data->psi[i], psi1 = data->psi[i + 1];
        const double psi = hermite(psi0, psi1, data->dpsi[i], data->dpsi[i + 1]);
        const double r =
            hermite(data->r[i], data->r[i + 1], std::sin(psi0), std::sin(psi1));
        const double z =
            hermite(data->z[i], data->z[i + 1], std::cos(psi0), std::cos(psi1));
        const double dpsi = (n - 1) * std::cos(psi) / r;
        // Mirror across the neck: r even in t, z odd.
        ProfilePoint p;
        p.r = r;
        p.z = sgn * z;
        p.rp = sgn * std::sin(psi);
        p.zp = std::cos(psi);
        p.rpp = dpsi * std::cos(psi);
        p.zpp = -sgn * dpsi * std::sin(psi);
        return p;
    };
    detail::validate_profile(s);
    return s;
}

// ---------------------------------------------------------------------------
// Sampled profile: natural cubic splines for r(t) and z(t), resampled to
// arc length (default 2048 nodes, doubled until the integral of |H|
// stabilizes to 1e-10 relative).

namespace detail {

class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 3) throw NonSmoothProfile("sampled profile needs >= 3 nodes");
        // Natural spline: tridiagonal solve for second derivatives.
        std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
        b[0] = b[n - 1] = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            if (h0 <= 0.0 || h1 <= 0.0)
                throw NonSmoothProfile("sample parameters must be increasing");
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            d[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        }
        m_.assign(n, 0.0);
        // Thomas algorithm.
        for (std::size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        m_[n - 1] = d[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
    }

    double operator()(double x, int deriv = 0) const {
        std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
        switch (deriv) {
            case 0:
                return A * y_[i] + B * y_[i + 1] +
                       ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) *
                           h * h / 6.0;
            case 1:
                return (y_[i + 1] - y_[i]) / h -
                       (3 * A * A - 1) / 6.0 * h * m_[i] +
                       (3 * B * B - 1) / 6.0 * h * m_[i + 1];
            default:
                return A * m_[i] + B * m_[i + 1];
        }
    }
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

private:
    std::size_t segment(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        if (i == 0) return 0;
        if (i >= x_.size()) return x_.size() - 2;
        return i - 1;
    }
    std::vector<double> x_, y_, m_;
};

}  // namespace detail

inline RevolutionHypersurface revolution_sampled(std::vector<double> t,
                                                 std::vector<double> r,
                                                 std::vector<double> z,
                                                 int n) {
    if (t.size() != r.size() || t.size() != z.size())
        throw BadSpec("sampled profile: t/r/z size mismatch");
    if (n < 2) throw ParamOutOfRange("revolution surfaces need n >= 2");
    for (double rv : r)
        if (rv <= 0.0)
            throw NonPositiveRadius("sampled profile radius must be > 0");
    auto rs = std::make_shared<detail::CubicSpline>(t, r);
    auto zs = std::make_shared<detail::CubicSpline>(t, z);

    // Cumulative arc length on a fine parameter grid (trapezoid).
    auto build = [&](int nodes) {
        const int fine = 16 * nodes;
        std::vector<double> param(fine + 1), arclen(fine + 1, 0.0);
        for (int i = 0; i <= fine; ++i)
            param[i] = t.front() + (t.back() - t.front()) * i / fine;
        auto speed = [&](double tt) {
            return std::hypot((*rs)(tt, 1), (*zs)(tt, 1));
        };
        for (int i = 1; i <= fine; ++i)
            arclen[i] = arclen[i - 1] + 0.5 * (param[i] - param[i - 1]) *
                                            (speed(param[i]) + speed(param[i - 1]));
        // Invert arc length at uniform nodes and retabulate r, z there.
        std::vector<double> su(nodes + 1), ru(nodes + 1), zu(nodes + 1);
        const double total = arclen.back();
        std::size_t j = 0;
        for (int i = 0; i <= nodes; ++i) {
            const double s = total * i / nodes;
            while (j + 1 < arclen.size() && arclen[j + 1] < s) ++j;
            const double seg = arclen[j + 1] - arclen[j];
            const double u = seg > 0.0 ? (s - arclen[j]) / seg : 0.0;
            const double tt = param[j] + u * (param[j + 1] - param[j]);
            su[i] = s;
            ru[i] = (*rs)(tt);
            zu[i] = (*zs)(tt);
        }
        return std::make_pair(
            std::make_shared<detail::CubicSpline>(su, ru),
            std::make_shared<detail::CubicSpline>(su, zu));
    };

    // Double the resampling density until int |H| stabilizes.
    int nodes = 2048;
    std::shared_ptr<detail::CubicSpline> rarc, zarc;
    double prev_hmass = std::numeric_limits<double>::quiet_NaN();
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::tie(rarc, zarc) = build(nodes);
        RevolutionHypersurface probe;
        probe.n = n;
        probe.t0 = rarc->front();
        probe.t1 = rarc->back();
        auto ra = rarc, za = zarc;
        probe.profile = [ra, za](double s) {
            ProfilePoint p;
            p.r = (*ra)(s);
            p.z = (*za)(s);
            // Normalize the tangent so downstream arc-length checks hold.
            double rp = (*ra)(s, 1), zp = (*za)(s, 1);
            const double len = std::hypot(rp, zp);
            p.rp = rp / len;
            p.zp = zp / len;
            p.rpp = (*ra)(s, 2) / (len * len);
            p.zpp = (*za)(s, 2) / (len * len);
            return p;
        };
        double hmass = 0.0;
        const int probes = 4096;
        for (int i = 1; i < probes; ++i) {
            const double s =
                probe.t0 + (probe.t1 - probe.t0) * i / probes;
            hmass += std::abs(probe.mean_curvature(s));
        }
        hmass *= (probe.t1 - probe.t0) / probes;
        if (std::isfinite(prev_hmass) &&
            std::abs(hmass - prev_hmass) <=
                1e-10 * std::max(1.0, std::abs(hmass))) {
            probe.name = "sampled";
            detail::validate_profile(probe);
            return probe;
        }
        prev_hmass = hmass;
        nodes *= 2;
        if (attempt == 3) {
            probe.name = "sampled";
            detail::validate_profile(probe);
            return probe;
        }
    }
    throw NonSmoothProfile("unreachable");
}

inline RevolutionHypersurface load_profile_json(const nlohmann::json& j) {
    return revolution_sampled(j.at("t").get<std::vector<double>>(),
                              j.at("r").get<std::vector<double>>(),
                              j.at("z").get<std::vector<double>>(),
                              j.at("n").get<int>());
}

// Reflection z -> -z (used by symmetry tests).
inline RevolutionHypersurface reflect_z(const RevolutionHypersurface& s) {
    RevolutionHypersurface out = s;
    const double t0 = s.t0, t1 = s.t1;
    auto base = s.profile;
    out.profile = [base, t0, t1](double t) {
        ProfilePoint p = base(t0 + t1 - t);
        ProfilePoint q;
        q.r = p.r;
        q.z = -p.z;
        q.rp = -p.rp;
        q.zp = p.zp;
        q.rpp = p.rpp;
        q.zpp = -p.zpp;
        return q;
    };
    out.name = s.name + "/reflected";
    return out;
}

// ---------------------------------------------------------------------------
// 1D reduction: int_M f dV = |S^{n-1}| int f(t) r(t)^{n-1} dt for
// rotationally symmetric f. Composite Gauss-Legendre.

struct RevolutionQuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

inline double integrate_profile_panels(const RevolutionHypersurface& s,
                                       const std::function<double(double)>& f,
                                       int panels, const GaussLegendre& gl) {
    std::vector<double> contributions;
    contributions.reserve(static_cast<std::size_t>(panels) * gl.node.size());
    const double span = (s.t1 - s.t0) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = s.t0 + p * span;
        for (std::size_t q = 0; q < gl.node.size(); ++q) {
            const double t = a + 0.5 * span * (gl.node[q] + 1.0);
            const double val = f(t) * std::pow(s.at(t).r, s.n - 1);
            if (!std::isfinite(val))
                throw SingularIntegrand("non-finite integrand at t = " +
                                        std::to_string(t));
            contributions.push_back(0.5 * span * gl.weight[q] * val);
        }
    }
    return unit_sphere_area(s.n - 1) * pairwise_sum(contributions);
}

inline RevolutionQuadResult integrate_revolution(
    const RevolutionHypersurface& s, const std::function<double(double)>& f,
    int panels = 256, int gl_order = 8) {
    static thread_local std::map<int, GaussLegendre> cache;
    auto it = cache.find(gl_order);
    if (it == cache.end())
        it = cache.emplace(gl_order, gauss_legendre(gl_order)).first;
    const GaussLegendre& gl = it->second;
    RevolutionQuadResult out;
    out.value = integrate_profile_panels(s, f, panels, gl);
    const double coarse = integrate_profile_panels(s, f, std::max(1, panels / 2), gl);
    out.error_estimate = std::abs(out.value - coarse);
    return out;
}

}  // namespace hsi
