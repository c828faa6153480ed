#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "hsi/core.hpp"
#include "oracles.hpp"

using namespace hsi;

TEST_CASE("pairwise sum matches long double accumulation") {
    SplitMixRng rng(42);
    std::vector<double> v(10001);
    long double ref = 0.0L;
    for (double& x : v) {
        x = 2.0 * rng.next_double() - 1.0;
        ref += static_cast<long double>(x);
    }
    const double got = pairwise_sum(v);
    REQUIRE(std::abs(got - static_cast<double>(ref)) <= 1e-12);
    REQUIRE(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("accumulator equals pairwise sum of its terms") {
    Accumulator acc;
    std::vector<double> v;
    SplitMixRng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.next_double() - 0.25;
        acc.add(x);
        v.push_back(x);
    }
    REQUIRE(acc.total() == pairwise_sum(v));
}

TEST_CASE("gauss-legendre integrates polynomials of degree 2k-1 exactly") {
    for (int order : {2, 4, 8, 16}) {
        const GaussLegendre gl = gauss_legendre(order);
        double wsum = 0.0;
        for (double w : gl.weight) wsum += w;
        REQUIRE(wsum == Catch::Approx(2.0).epsilon(1e-14));
        // int_{-1}^{1} x^k dx = 0 (k odd), 2/(k+1) (k even).
        for (int k = 0; k <= 2 * order - 1; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < gl.node.size(); ++i)
                s += gl.weight[i] * std::pow(gl.node[i], k);
            const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
            REQUIRE(std::abs(s - exact) <= 1e-13);
        }
    }
    REQUIRE_THROWS_AS(gauss_legendre(0), ParamOutOfRange);
}

TEST_CASE("sphere areas and ball volumes match the recursion oracle") {
    for (int k = 0; k <= 6; ++k)
        REQUIRE(unit_sphere_area(k) ==
                Catch::Approx(oracle::sphere_area(k)).epsilon(1e-13));
    for (int k = 1; k <= 6; ++k)
        REQUIRE(unit_ball_volume(k) ==
                Catch::Approx(oracle::ball_volume(k)).epsilon(1e-13));
    REQUIRE(unit_ball_volume(2) ==
            Catch::Approx(std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("rng streams are deterministic and decorrelated") {
    REQUIRE(split_stream(1, 0) == split_stream(1, 0));
    REQUIRE(split_stream(1, 0) != split_stream(1, 1));
    REQUIRE(split_stream(1, 0) != split_stream(2, 0));
    SplitMixRng a(99), b(99);
    for (int i = 0; i < 100; ++i) {
        const double x = a.next_double();
        REQUIRE(x == b.next_double());
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
    }
}

TEST_CASE("fnv1a matches the published test vector") {
    // FNV-1a 64-bit of "a" is a standard reference value.
    REQUIRE(fnv1a("a", 1) == 0xaf63dc4c8601ec8cull);
    REQUIRE(fnv1a("", 0) == 0xcbf29ce484222325ull);
}
