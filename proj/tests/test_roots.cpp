#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "arclab/roots.hpp"

using namespace arclab;

namespace {
RatPoly from_ints(std::vector<long> c) {
    std::vector<Rat> v(c.size());
    for (size_t i = 0; i < c.size(); ++i) v[i] = Rat(c[i]);
    return RatPoly(std::move(v));
}
}  // namespace

TEST_CASE("s^2 - 1") {
    auto rs = find_roots(from_ints({-1, 0, 1}), 1e-12);
    REQUIRE(rs.roots.size() == 2);
    CHECK(rs.total_multiplicity() == 2);
    auto reals = rs.real_roots();
    std::sort(reals.begin(), reals.end());
    CHECK(reals[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(reals[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("s^2: repeated root at 0") {
    auto rs = find_roots(from_ints({0, 0, 1}), 1e-12);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].multiplicity == 2);
    CHECK(std::abs(rs.roots[0].value) < 1e-12);
}

TEST_CASE("s^3 - 2s against closed-form radicals") {
    auto rs = find_roots(from_ints({0, -2, 0, 1}), 1e-12);
    CHECK(rs.total_multiplicity() == 3);
    auto reals = rs.real_roots();
    REQUIRE(reals.size() == 3);
    std::sort(reals.begin(), reals.end());
    double r = std::sqrt(2.0);
    CHECK(std::abs(reals[0] + r) <= 1e-12 * r);
    CHECK(std::abs(reals[1]) <= 1e-12);
    CHECK(std::abs(reals[2] - r) <= 1e-12 * r);
}

TEST_CASE("complex roots come in conjugate pairs") {
    // (s^2+1)(s^2+s+1)
    auto p = from_ints({1, 0, 1}) * from_ints({1, 1, 1});
    auto rs = find_roots(p, 1e-12);
    CHECK(rs.total_multiplicity() == 4);
    CHECK(rs.real_roots().empty());
    for (const auto& r : rs.roots) {
        bool paired = false;
        for (const auto& o : rs.roots)
            if (o.value == std::conj(r.value)) paired = true;
        CHECK(paired);
    }
}

TEST_CASE("mixed multiplicities: s^2 (s-1)^3 (s+2)") {
    auto s = RatPoly::identity();
    auto p = s * s;
    auto sm1 = s - RatPoly::constant(Rat(1));
    p = p * sm1 * sm1 * sm1 * (s + RatPoly::constant(Rat(2)));
    auto rs = find_roots(p, 1e-12);
    CHECK(rs.total_multiplicity() == 6);
    REQUIRE(rs.roots.size() == 3);
    for (const auto& r : rs.roots) {
        if (std::abs(r.value) < 1e-9) CHECK(r.multiplicity == 2);
        if (std::abs(r.value - 1.0) < 1e-9) CHECK(r.multiplicity == 3);
        if (std::abs(r.value + 2.0) < 1e-9) CHECK(r.multiplicity == 1);
    }
}

TEST_CASE("near-coincident roots merge into a cluster") {
    // roots at 0 and 1e-15 with tol 1e-12: cluster of multiplicity 2
    Rat eps = rat(1, 1000000000000000L);
    auto s = RatPoly::identity();
    auto p = s * (s - RatPoly::constant(eps));
    auto rs = find_roots(p, 1e-12);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].multiplicity == 2);
}

TEST_CASE("constant polynomial has no roots; zero rejected") {
    auto rs = find_roots(RatPoly::constant(Rat(5)), 1e-12);
    CHECK(rs.roots.empty());
    CHECK_THROWS_AS(find_roots(RatPoly(), 1e-12), std::invalid_argument);
}
