#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arclab/corpus.hpp"
#include "arclab/curve.hpp"
#include "arclab/rng.hpp"

using namespace arclab;

namespace {

Rat random_rat(CounterRng& rng) {
    long num = static_cast<long>(rng.next_below(41)) - 20;
    long den = 1 + static_cast<long>(rng.next_below(9));
    return rat(num, den);
}

Rat factorial_product(int d) {
    Rat acc(1);
    Rat f(1);
    for (int j = 1; j <= d; ++j) {
        f *= j;
        acc *= f;
    }
    return acc;
}

}  // namespace

TEST_CASE("zero polynomial normalizes to the degree -1 sentinel") {
    RatPoly z({Rat(0), Rat(0)});
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);
    CHECK(z.coeffs().empty());
    CHECK((z * RatPoly::identity()).is_zero());
}

TEST_CASE("divmod and exact division") {
    RatPoly num({Rat(-1), Rat(0), Rat(1)});  // s^2 - 1
    RatPoly den({Rat(1), Rat(1)});           // s + 1
    auto q = divide_exact(num, den);
    REQUIRE(q.has_value());
    CHECK(*q == RatPoly({Rat(-1), Rat(1)}));
    CHECK(!divide_exact(num, RatPoly({Rat(2), Rat(1)})).has_value());
}

TEST_CASE("gcd and Yun squarefree decomposition") {
    RatPoly s = RatPoly::identity();
    RatPoly f = s * s * (s - RatPoly::constant(Rat(1)));  // s^2 (s-1)
    auto sf = squarefree_decompose(f);
    REQUIRE(sf.size() == 2);
    CHECK(sf[0].multiplicity == 1);
    CHECK(sf[0].factor == s - RatPoly::constant(Rat(1)));
    CHECK(sf[1].multiplicity == 2);
    CHECK(sf[1].factor == s);
}

TEST_CASE("eval_curve") {
    auto m3 = moment_curve(3);
    auto v = m3.eval_exact(Rat(2));
    CHECK(v == std::vector<Rat>{Rat(2), Rat(4), Rat(8)});

    // s = 0 gives constant terms
    PolyCurve shifted({RatPoly({Rat(5), Rat(1)}), RatPoly({Rat(-7), Rat(0), Rat(1)})});
    auto c = shifted.eval_exact(Rat(0));
    CHECK(c == std::vector<Rat>{Rat(5), Rat(-7)});

    PolyCurve p({RatPoly::identity(), RatPoly({Rat(1), Rat(0), Rat(1)})});  // (t, t^2+1)
    auto half = p.eval_exact(rat(1, 2));
    CHECK(half == std::vector<Rat>{rat(1, 2), rat(5, 4)});
}

TEST_CASE("torsion determinants") {
    CHECK(moment_curve(2).torsion() == RatPoly::constant(Rat(2)));
    CHECK(moment_curve(3).torsion() == RatPoly::constant(Rat(12)));
    auto cusp = corpus_curve("cusp");
    CHECK(cusp.torsion() == RatPoly::monomial(2, Rat(6)));  // 6 s^2
    CHECK(cusp.nondegenerate());
}

TEST_CASE("minor ladder") {
    auto m3 = moment_curve(3);
    CHECK(m3.minor_ladder(1) == m3.component(0).derivative());
    CHECK(m3.minor_ladder(2) == RatPoly::constant(Rat(2)));
    CHECK(m3.minor_ladder(3) == m3.torsion());
    CHECK(m3.minor_ladder(0) == RatPoly::constant(Rat(1)));
    CHECK(m3.minor_ladder(-1) == RatPoly::constant(Rat(1)));
    CHECK_THROWS_AS(m3.minor_ladder(4), std::out_of_range);
}

TEST_CASE("jacobian values") {
    auto m2 = moment_curve(2);
    std::vector<Rat> t{Rat(0), Rat(1)};
    CHECK(m2.jacobian_exact(t) == Rat(2));

    std::vector<Rat> rep{Rat(3), Rat(3)};
    CHECK(m2.jacobian_exact(rep) == Rat(0));

    auto m3 = moment_curve(3);
    std::vector<Rat> t3{Rat(0), Rat(1), Rat(2)};
    CHECK(m3.jacobian_exact(t3) == Rat(12));  // 6 * (1)(2)(1)
}

TEST_CASE("triangularity oracle: moment curves d=2..6") {
    for (int d = 2; d <= 6; ++d) {
        auto m = moment_curve(d);
        CHECK(m.torsion() == RatPoly::constant(factorial_product(d)));

        Rat dfact(1);
        for (int j = 2; j <= d; ++j) dfact *= j;

        CounterRng rng(17, static_cast<uint64_t>(d));
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Rat> t(static_cast<size_t>(d));
            for (auto& x : t) x = random_rat(rng);
            Rat vander(1);
            for (int i = 0; i < d; ++i)
                for (int k = i + 1; k < d; ++k) vander *= t[static_cast<size_t>(k)] - t[static_cast<size_t>(i)];
            CHECK(m.jacobian_exact(t) == Rat(dfact * vander));
        }
    }
}

TEST_CASE("jacobian antisymmetry, exact") {
    auto m3 = corpus_curve("mixed4");
    CounterRng rng(99, 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Rat> t(3);
        for (auto& x : t) x = random_rat(rng);
        int swap_at = static_cast<int>(rng.next_below(2));
        auto swapped = t;
        std::swap(swapped[static_cast<size_t>(swap_at)], swapped[static_cast<size_t>(swap_at) + 1]);
        CHECK(m3.jacobian_exact(t) == Rat(-m3.jacobian_exact(swapped)));
    }
}

TEST_CASE("affine equivariance: torsion and jacobian scale by det(M)") {
    auto curve = corpus_curve("cubic3");
    CounterRng rng(7, 1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rat> m(4);
        Rat det;
        do {
            for (auto& x : m) x = random_rat(rng);
            det = m[0] * m[3] - m[1] * m[2];
        } while (det == 0);
        auto transformed = curve.apply_matrix(m);
        CHECK(transformed.torsion() == det * curve.torsion());

        std::vector<Rat> t{random_rat(rng), random_rat(rng)};
        CHECK(transformed.jacobian_exact(t) == Rat(det * curve.jacobian_exact(t)));
    }
}

TEST_CASE("arclength density") {
    auto m2 = moment_curve(2);
    CHECK(m2.arclength_density(0.37) == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-14));

    auto cusp = corpus_curve("cusp");
    CHECK(cusp.arclength_density(0.0) == 0.0);  // torsion zero at the cusp
    CHECK(cusp.arclength_density(2.0) == doctest::Approx(std::pow(24.0, 1.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("parametrization covariance of the density") {
    auto curve = corpus_curve("mixed4");
    Rat a = rat(3, 2), b = rat(-1, 4);
    auto re = curve.reparametrize_affine(a, b);
    CounterRng rng(5, 2);
    for (int trial = 0; trial < 50; ++trial) {
        double s = rng.uniform(-2.0, 2.0);
        double lhs = re.arclength_density(s);
        double rhs = std::abs(to_double(a)) * curve.arclength_density(to_double(a) * s + to_double(b));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("bareiss determinant cross-checked against exact evaluation") {
    auto curve = corpus_curve("rand6", 314159);
    auto l2 = curve.torsion();
    CounterRng rng(11, 3);
    for (int trial = 0; trial < 25; ++trial) {
        Rat s = random_rat(rng);
        // determinant of the derivative matrix evaluated at s, as scalars
        std::vector<Rat> m(4);
        for (int i = 0; i < 2; ++i) {
            RatPoly p = curve.component(i);
            for (int order = 1; order <= 2; ++order) {
                p = p.derivative();
                m[static_cast<size_t>(i) * 2 + (order - 1)] = p(s);
            }
        }
        CHECK(det_field(m, 2) == l2(s));
    }
}
