#pragma once

// Shared numeric utilities: error types, deterministic reductions,
// Gauss-Legendre nodes, seeded RNG stream splitting.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsi {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define HSI_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

HSI_DEFINE_ERROR(NonManifold);
HSI_DEFINE_ERROR(DegenerateFace);
HSI_DEFINE_ERROR(InconsistentOrientation);
HSI_DEFINE_ERROR(FieldSizeMismatch);
HSI_DEFINE_ERROR(ZeroVertexArea);
HSI_DEFINE_ERROR(OriginOnSurface);
HSI_DEFINE_ERROR(SupportViolation);
HSI_DEFINE_ERROR(NonPositiveRadius);
HSI_DEFINE_ERROR(NonSmoothProfile);
HSI_DEFINE_ERROR(StepperFailure);
HSI_DEFINE_ERROR(SingularIntegrand);
HSI_DEFINE_ERROR(SingularityUnprotected);
HSI_DEFINE_ERROR(ExponentOutOfRange);
HSI_DEFINE_ERROR(ParamOutOfRange);
HSI_DEFINE_ERROR(NotMinimal);
HSI_DEFINE_ERROR(DimensionTooLow);
HSI_DEFINE_ERROR(SupportExceedsBall);
HSI_DEFINE_ERROR(SupportOutsideSurface);
HSI_DEFINE_ERROR(BadSpec);
HSI_DEFINE_ERROR(TouchesBoundary);
HSI_DEFINE_ERROR(NotFlat);
HSI_DEFINE_ERROR(EmptyIntersection);
HSI_DEFINE_ERROR(DegenerateLevel);
HSI_DEFINE_ERROR(NonQuadratic);
HSI_DEFINE_ERROR(SolverStall);
HSI_DEFINE_ERROR(SingularPencil);

#undef HSI_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Deterministic pairwise summation.
//
// All surface/profile reductions go through this so that results do not
// depend on accumulation order tricks of the optimizer or on a thread count.

inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v));
}

// Accumulates terms and reduces them pairwise at the end.
class Accumulator {
public:
    void add(double x) { terms_.push_back(x); }
    double total() const { return pairwise_sum(terms_); }
    void reserve(std::size_t n) { terms_.reserve(n); }

private:
    std::vector<double> terms_;
};

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
// Legendre polynomial (standard construction).

struct GaussLegendre {
    std::vector<double> node;
    std::vector<double> weight;
};

inline GaussLegendre gauss_legendre(int order) {
    if (order < 1) throw ParamOutOfRange("Gauss-Legendre order must be >= 1");
    GaussLegendre gl;
    gl.node.resize(order);
    gl.weight.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.node[i] = -x;
        gl.node[order - 1 - i] = x;
        gl.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.weight[order - 1 - i] = gl.weight[i];
    }
    return gl;
}

// ---------------------------------------------------------------------------
// RNG stream splitting: child seed = splitmix64(seed ^ golden * (index+1)).
// Deterministic across platforms; used by corpus::random_bump.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t split_stream(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

// Uniform double in [0,1) from a splitmix64 state walked in place.
class SplitMixRng {
public:
    explicit SplitMixRng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return splitmix64(state_ - 0x9E3779B97F4A7C15ull + 0);
    }
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Dimension-dependent constants.

// Surface area of the unit k-sphere S^k embedded in R^{k+1}.
inline double unit_sphere_area(int k) {
    // |S^k| = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
    const double half = 0.5 * (k + 1);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

// Volume of the unit ball in R^k.
inline double unit_ball_volume(int k) {
    return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

// FNV-1a over raw bytes; used for geometry fingerprints in reports.
inline std::uint64_t fnv1a(const void* data, std::size_t bytes,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace hsi
