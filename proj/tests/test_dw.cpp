#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "arclab/corpus.hpp"
#include "arclab/dw.hpp"
#include "arclab/rng.hpp"

using namespace arclab;

namespace {

RootSet make_roots(std::vector<std::complex<double>> vals) {
    RootSet rs;
    rs.tolerance = 1e-12;
    for (auto v : vals) rs.roots.push_back({v, 1});
    return rs;
}

/// closure-coverage + disjointness of a sorted piece list over j
template <typename Piece>
void check_cover(const std::vector<Piece>& pieces, Interval j) {
    REQUIRE(!pieces.empty());
    CHECK(pieces.front().interval.lo == j.lo);
    CHECK(pieces.back().interval.hi == j.hi);
    for (size_t i = 0; i + 1 < pieces.size(); ++i) {
        CHECK(pieces[i].interval.hi == doctest::Approx(pieces[i + 1].interval.lo).epsilon(1e-12));
        CHECK(pieces[i].interval.lo < pieces[i].interval.hi);
    }
}

}  // namespace

TEST_CASE("d1: single real root splits the line at its center") {
    auto pieces = d1_decompose({-Interval::inf, Interval::inf}, make_roots({{0, 0}}));
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].interval.lo == -Interval::inf);
    CHECK(pieces[0].interval.hi == 0.0);
    CHECK(pieces[1].interval.lo == 0.0);
    CHECK(pieces[1].interval.hi == Interval::inf);
    for (const auto& p : pieces) {
        CHECK(p.b == 0.0);
        REQUIRE(p.per_root.size() == 1);
        CHECK(p.per_root[0].delta == 1);
        CHECK(p.per_root[0].a == doctest::Approx(1.0));
    }
}

TEST_CASE("d1: two real roots, nearest-center partition with factor-2 far-root comparability") {
    auto pieces = d1_decompose({0, 10}, make_roots({{0, 0}, {10, 0}}));
    check_cover(pieces, {0, 10});
    // the piece containing (0, 5) has b = 0 and delta = 0 for the far root
    for (const auto& p : pieces) {
        if (p.interval.lo == 0.0 && p.interval.hi >= 5.0) {
            CHECK(p.b == 0.0);
            CHECK(p.per_root[1].delta == 0);
            // |s-10| within ratio [1/2,2] of A on samples
            for (double s = 0.25; s < p.interval.hi; s += 0.5) {
                double ratio = std::abs(s - 10.0) / p.per_root[1].a;
                CHECK(ratio >= 0.5);
                CHECK(ratio <= 2.0);
            }
        }
        // nearest-center condition holds everywhere
        for (double frac : {0.1, 0.5, 0.9}) {
            double s = p.interval.lo + frac * p.interval.length();
            CHECK(std::abs(s - p.b) <= std::min(std::abs(s - 0.0), std::abs(s - 10.0)) + 1e-12);
        }
    }
}

TEST_CASE("d1: purely imaginary pair, b = 0 everywhere and |s - i| tracks max(|s|, 1)") {
    auto pieces = d1_decompose({-Interval::inf, Interval::inf}, make_roots({{0, 1}, {0, -1}}));
    for (const auto& p : pieces) {
        CHECK(p.b == 0.0);
        double lo = std::isfinite(p.interval.lo) ? p.interval.lo : -40.0;
        double hi = std::isfinite(p.interval.hi) ? p.interval.hi : 40.0;
        for (int i = 1; i < 8; ++i) {
            double s = lo + (hi - lo) * i / 8.0;
            if (!p.interval.contains(s)) continue;
            double lhs = std::abs(std::complex<double>(s, 0) - std::complex<double>(0, 1));
            // recorded comparability reproduces |s - i| within a factor 2
            double model = p.per_root[0].a * (p.per_root[0].delta == 1 ? std::abs(s) : 1.0);
            CHECK(lhs / model >= 0.5 - 1e-9);
            CHECK(lhs / model <= 2.0 + 1e-9);
            CHECK(lhs / std::max(std::abs(s), 1.0) >= 1.0 - 1e-12);
            CHECK(lhs / std::max(std::abs(s), 1.0) <= std::sqrt(2.0) + 1e-12);
        }
    }
}

TEST_CASE("d1: empty root set returns the interval with b undefined") {
    auto pieces = d1_decompose({2, 3}, RootSet{});
    REQUIRE(pieces.size() == 1);
    CHECK(!pieces[0].b_defined);
    CHECK(pieces[0].interval.lo == 2.0);
    CHECK(pieces[0].interval.hi == 3.0);
}

TEST_CASE("d1: random root sets, coverage and nearest-center invariants") {
    CounterRng rng(404, 0);
    for (int trial = 0; trial < 20; ++trial) {
        int nroots = 1 + static_cast<int>(rng.next_below(4));
        std::vector<std::complex<double>> vals;
        for (int i = 0; i < nroots; ++i) {
            double re = rng.uniform(-5, 5);
            double im = rng.next_below(2) ? rng.uniform(0.01, 2.0) : 0.0;
            vals.emplace_back(re, im);
            if (im != 0) vals.emplace_back(re, -im);
        }
        auto rs = make_roots(vals);
        auto pieces = d1_decompose({-20, 20}, rs);
        check_cover(pieces, {-20, 20});
        for (const auto& p : pieces) {
            CHECK(p.worst_ratio <= 2.0 + 1e-9);
            for (double frac : {0.05, 0.35, 0.65, 0.95}) {
                double s = p.interval.lo + frac * p.interval.length();
                for (size_t k = 0; k < rs.roots.size(); ++k) {
                    double droot = std::abs(s - rs.roots[k].value);
                    CHECK(std::abs(s - p.b) <= droot + 1e-9);
                    double model = p.per_root[k].a * (p.per_root[k].delta == 1 ? std::abs(s - p.b) : 1.0);
                    if (model > 0) {
                        CHECK(droot / model >= 0.5 - 1e-9);
                        CHECK(droot / model <= 2.0 + 1e-9);
                    }
                }
            }
        }
    }
}

TEST_CASE("d2: single root at distance 1") {
    auto pieces = d2_decompose({0, 10}, 0.0, make_roots({{1, 0}}));
    check_cover(pieces, {0, 10});
    // gap (0,1/2], dyadic shells covering [1/2,2], gap [2,10)
    REQUIRE(pieces.size() >= 3);
    CHECK(pieces.front().kind == GapDyadicPiece::Kind::Gap);
    CHECK(pieces.front().interval.hi == doctest::Approx(0.5));
    CHECK(pieces.front().eps[0] == 0);
    CHECK(pieces.back().kind == GapDyadicPiece::Kind::Gap);
    CHECK(pieces.back().interval.lo == doctest::Approx(2.0));
    CHECK(pieces.back().eps[0] == 1);
    for (const auto& p : pieces) {
        if (p.kind == GapDyadicPiece::Kind::Dyadic) {
            CHECK(p.interval.lo >= 0.5 - 1e-12);
            CHECK(p.interval.hi <= 2.0 + 1e-12);
            CHECK(p.interval.hi <= 2.0 * p.level + 1e-12);
            CHECK(p.interval.lo >= p.level - 1e-12);
        } else {
            // the two gap comparabilities at samples
            for (double frac : {0.1, 0.5, 0.9}) {
                double s = p.interval.lo + frac * p.interval.length();
                double lhs = std::abs(s - 1.0);
                CHECK(lhs >= 0.5 * std::abs(s) - 1e-12);
                double model = p.eps[0] == 1 ? std::abs(s) : 1.0;
                CHECK(lhs / model >= 0.5 - 1e-9);
                CHECK(lhs / model <= 2.0 + 1e-9);
            }
        }
    }
}

TEST_CASE("d2: empty betas gives a single gap") {
    auto pieces = d2_decompose({0, 10}, 0.0, RootSet{});
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].kind == GapDyadicPiece::Kind::Gap);
    CHECK(pieces[0].interval.lo == 0.0);
    CHECK(pieces[0].interval.hi == 10.0);
}

TEST_CASE("d2: beta = -1 mirrors the |s| levels") {
    auto pieces = d2_decompose({0, 10}, 0.0, make_roots({{-1, 0}}));
    check_cover(pieces, {0, 10});
    CHECK(pieces.front().interval.hi == doctest::Approx(0.5));
    CHECK(pieces.back().interval.lo == doctest::Approx(2.0));
    for (const auto& p : pieces) {
        if (p.kind != GapDyadicPiece::Kind::Gap) continue;
        for (double frac : {0.2, 0.8}) {
            double s = p.interval.lo + frac * p.interval.length();
            CHECK(std::abs(s + 1.0) >= 0.5 * std::abs(s) - 1e-12);
        }
    }
}

TEST_CASE("d2: unsorted betas rejected") {
    RootSet rs = make_roots({{5, 0}, {1, 0}});
    CHECK_THROWS_AS(d2_decompose({0, 10}, 0.0, rs), std::invalid_argument);
}

TEST_CASE("d2: random root sets, gap and shell invariants") {
    CounterRng rng(606, 0);
    for (int trial = 0; trial < 30; ++trial) {
        double b = rng.uniform(-2.0, 2.0);
        int nroots = 1 + static_cast<int>(rng.next_below(4));
        RootSet rs;
        rs.tolerance = 1e-12;
        for (int i = 0; i < nroots; ++i) {
            double re = rng.uniform(-3.0, 3.0);
            double im = rng.next_below(2) ? rng.uniform(0.0, 2.0) : 0.0;
            rs.roots.push_back({{re, im}, 1});
        }
        std::sort(rs.roots.begin(), rs.roots.end(), [&](const RootRecord& x, const RootRecord& y) {
            return std::abs(b + x.value) < std::abs(b + y.value);
        });
        Interval j{b - 8.0, b + 8.0};
        auto pieces = d2_decompose(j, b, rs);
        check_cover(pieces, j);
        for (const auto& p : pieces) {
            for (double frac : {0.15, 0.5, 0.85}) {
                double s = p.interval.lo + frac * p.interval.length();
                double u = std::abs(s - b);
                if (p.kind == GapDyadicPiece::Kind::Dyadic) {
                    CHECK(u >= p.level * (1 - 1e-9));
                    CHECK(u <= 2 * p.level * (1 + 1e-9));
                } else {
                    for (size_t k = 0; k < rs.roots.size(); ++k) {
                        double lhs = std::abs(std::complex<double>(s - b, 0) - rs.roots[k].value);
                        CHECK(lhs >= 0.5 * u - 1e-12);  // the gap lower bound
                        double rad = std::abs(rs.roots[k].value);
                        double model = p.eps[k] == 1 ? u : rad;
                        if (model > 0) {
                            CHECK(lhs / model >= 0.5 - 1e-9);
                            CHECK(lhs / model <= 2.0 + 1e-9);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("dw pipeline: moment curves decompose to two constant pieces") {
    for (int d = 2; d <= 4; ++d) {
        auto curve = moment_curve(d);
        auto res = dw_decompose(curve);
        REQUIRE(res.leaves.size() == 2);
        double lp = to_double(curve.torsion().coeff(0));
        for (const auto& leaf : res.leaves) {
            CHECK(leaf.K == 0);
            CHECK(leaf.A == doctest::Approx(std::abs(lp)).epsilon(1e-9));
            CHECK(leaf.c_lo == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(leaf.c_hi == doctest::Approx(1.0).epsilon(1e-9));
        }
        CHECK(res.leaves[0].interval.hi == 0.0);
        CHECK(res.leaves[1].interval.lo == 0.0);
    }
}

TEST_CASE("dw pipeline: cusp carries K=2, A=6 on both sides") {
    auto curve = corpus_curve("cusp");
    auto res = dw_decompose(curve);
    REQUIRE(res.leaves.size() == 2);
    for (const auto& leaf : res.leaves) {
        CHECK(leaf.b == 0.0);
        CHECK(leaf.K == 2);
        CHECK(leaf.A == doctest::Approx(6.0).epsilon(1e-9));
        CHECK(leaf.c_hi / leaf.c_lo == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("dw pipeline: (t, t^3 - 3t) gives K=1 around b=0") {
    auto curve = corpus_curve("cubic3");
    CHECK(curve.torsion() == RatPoly::monomial(1, Rat(6)));
    auto res = dw_decompose(curve);
    for (const auto& leaf : res.leaves) {
        CHECK(leaf.b == 0.0);
        CHECK(leaf.K == 1);
    }
}

TEST_CASE("dw pipeline: coverage, disjointness, count bound, K <= N across corpus") {
    for (const auto& entry : corpus_list()) {
        auto curve = corpus_curve(entry.name, 20240811);
        auto res = dw_decompose(curve);
        check_cover(res.leaves, {-Interval::inf, Interval::inf});
        CHECK(static_cast<long>(res.leaves.size()) <= res.piece_bound);
        for (const auto& leaf : res.leaves) {
            CHECK(leaf.K <= curve.degree());
            CHECK(leaf.K >= 0);
            CHECK(leaf.A > 0);
            if (leaf.b_defined) CHECK(!leaf.interval.contains(leaf.b));
            CHECK(leaf.c_lo > 0);
        }
    }
}

TEST_CASE("dw pipeline: monotone center refinement along lineages") {
    auto curve = corpus_curve("rand6", 91);
    auto res = dw_decompose(curve);
    for (const auto& leaf : res.leaves) {
        if (!leaf.interval.bounded()) continue;
        for (double frac : {0.25, 0.75}) {
            double s = leaf.interval.lo + frac * leaf.interval.length();
            double prev = Interval::inf;
            for (const auto& e : leaf.lineage) {
                if (e.tag == LineageEntry::Tag::Dyadic || e.tag == LineageEntry::Tag::Step0) {
                    CHECK(std::abs(s - e.b) <= prev + 1e-9);
                    prev = std::abs(s - e.b);
                }
            }
        }
    }
}

TEST_CASE("torsion comparability: moment and cusp are exactly flat") {
    auto m3 = moment_curve(3);
    auto res3 = dw_decompose(m3);
    auto [lo3, hi3] = verify_torsion_comparability(res3.leaves[1], m3, 64);
    CHECK(lo3 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hi3 == doctest::Approx(1.0).epsilon(1e-9));

    auto cusp = corpus_curve("cusp");
    auto resc = dw_decompose(cusp);
    auto [loc, hic] = verify_torsion_comparability(resc.leaves[1], cusp, 64);
    CHECK(loc == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hic == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(verify_torsion_comparability(resc.leaves[0], cusp, 1), std::invalid_argument);
}

TEST_CASE("geometric inequality: exact cancellation for constant torsion") {
    auto m2 = moment_curve(2);
    auto res = dw_decompose(m2);
    double r = verify_geometric_inequality(res.leaves[1], m2, 2000, 7);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-9));

    auto m3 = moment_curve(3);
    auto res3 = dw_decompose(m3);
    double r3 = verify_geometric_inequality(res3.leaves[1], m3, 2000, 7);
    CHECK(r3 == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("geometric inequality: cusp piece stays strictly positive and is seed-stable") {
    auto cusp = corpus_curve("cusp");
    auto res = dw_decompose(cusp);
    double a = verify_geometric_inequality(res.leaves[1], cusp, 5000, 42);
    double b = verify_geometric_inequality(res.leaves[1], cusp, 5000, 42);
    CHECK(a > 0.0);
    CHECK(a == b);
    double c = verify_geometric_inequality(res.leaves[1], cusp, 5000, 43);
    CHECK(c > 0.0);
}

TEST_CASE("preimage collision probe") {
    auto m2 = moment_curve(2);
    auto res = dw_decompose(m2);
    DecompInterval unit;
    unit.interval = {0.0, 1.0};
    unit.b = 0.0;
    auto probe = preimage_collision_probe(unit, m2, {1, 1}, 20000, 1e-3, 11);
    CHECK(probe.max_multiplicity >= 1);
    CHECK(probe.max_multiplicity <= 2);
    CHECK(!probe.warn);

    // a curve with a genuine fold: (t, t^3-3t) sums can collide
    auto cubic = corpus_curve("cubic3");
    DecompInterval wide;
    wide.interval = {-2.0, 2.0};
    wide.b = 0.0;
    auto probe2 = preimage_collision_probe(wide, cubic, {1, 1}, 60000, 5e-3, 12);
    CHECK(probe2.max_multiplicity >= 1);
    CHECK(probe2.warn == (probe2.max_multiplicity > 2));
    if (probe2.warn) CHECK(!probe2.witnesses.empty());
}

TEST_CASE("normalize_piece: cusp left piece reflects onto (0, 1)-type interval") {
    auto cusp = corpus_curve("cusp");
    auto res = dw_decompose(cusp);
    const auto& left = res.leaves[0];
    auto norm = normalize_piece(left, cusp);
    CHECK(norm.truncated);  // left piece is unbounded
    CHECK(norm.interval.hi - norm.interval.lo == doctest::Approx(1.0));
    CHECK(norm.interval.lo >= 0.0);
    CHECK(norm.K == 2);

    // reflection preserves torsion magnitude: |L_{P(-.)}(w)| = |L_P(-w)|
    auto reflected = cusp.reparametrize_affine(Rat(-1), Rat(0));
    DPoly lp = to_double(cusp.torsion());
    DPoly lr = to_double(reflected.torsion());
    for (double w : {0.3, 1.7, 4.0}) CHECK(std::abs(lr(w)) == doctest::Approx(std::abs(lp(-w))).epsilon(1e-12));
}

TEST_CASE("normalize_piece: comparability constants are invariant") {
    auto curve = corpus_curve("rand6", 77);
    auto res = dw_decompose(curve);
    for (const auto& leaf : res.leaves) {
        if (!leaf.interval.bounded()) continue;
        auto norm = normalize_piece(leaf, curve);
        DecompInterval renorm;
        renorm.interval = norm.interval;
        renorm.b = 0.0;
        renorm.K = norm.K;
        renorm.A = std::pow(norm.amplitude, -curve.dim());
        auto [lo, hi] = verify_torsion_comparability(renorm, norm.curve, 65);
        CHECK(lo == doctest::Approx(leaf.c_lo).epsilon(1e-6));
        CHECK(hi == doctest::Approx(leaf.c_hi).epsilon(1e-6));
        break;  // one bounded leaf suffices here; the full corpus runs in acceptance
    }
}

TEST_CASE("degenerate curve rejected") {
    // (t, 2t): torsion identically zero
    PolyCurve degenerate({RatPoly::identity(), Rat(2) * RatPoly::identity()});
    CHECK(!degenerate.nondegenerate());
    CHECK_THROWS_AS(dw_decompose(degenerate), std::domain_error);
}
