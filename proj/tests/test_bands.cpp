#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arclab/bands.hpp"
#include "arclab/corpus.hpp"
#include "arclab/rng.hpp"

using namespace arclab;

namespace {

std::vector<double> random_points(CounterRng& rng, int k, double lo, double hi) {
    std::vector<double> t(static_cast<size_t>(k));
    for (auto& x : t) x = rng.uniform(lo, hi);
    return t;
}

}  // namespace

TEST_CASE("build_bands: the worked three-point example") {
    SeparationMetric metric{0, 2};
    std::vector<double> t{0.1, 0.1001, 0.5};
    auto bs = build_bands(t, 1.0, metric, {.delta0 = 0.01});
    REQUIRE(bs.has_value());
    REQUIRE(bs->bands.size() == 2);
    CHECK(bs->bands[0] == std::vector<int>{0, 1});
    CHECK(bs->bands[1] == std::vector<int>{2});
    CHECK(bs->classification[0] == IndexClass::Free);
    CHECK(bs->classification[1] == IndexClass::QuasiFree);
    CHECK(bs->classification[2] == IndexClass::Free);
    CHECK(bs->bind[1] == 0);
}

TEST_CASE("build_bands: fully separated and fully clustered") {
    SeparationMetric metric{0, 2};
    auto separated = build_bands(std::vector<double>{0.1, 0.4, 0.9}, 1.0, metric, {.delta0 = 0.01});
    REQUIRE(separated.has_value());
    CHECK(separated->bands.size() == 3);
    for (auto c : separated->classification) CHECK(c == IndexClass::Free);

    auto pair = build_bands(std::vector<double>{0.5, 0.5001}, 1.0, metric, {.delta0 = 0.01});
    REQUIRE(pair.has_value());
    CHECK(pair->bands.size() == 1);
    CHECK(pair->classification[1] == IndexClass::QuasiFree);

    // a tight triple needs the refinement rounds: bound indices appear once
    // some scale delta_r separates nothing and delta' covers the cluster
    auto triple = build_bands(std::vector<double>{0.5, 0.500001, 0.500002}, 1.0, metric, {.delta0 = 0.01});
    REQUIRE(triple.has_value());
    CHECK(triple->bands.size() == 1);
    CHECK(triple->classification[0] == IndexClass::Free);
    CHECK(triple->classification[1] == IndexClass::Bound);
    CHECK(triple->classification[2] == IndexClass::Bound);
}

TEST_CASE("build_bands rejects coincident points") {
    SeparationMetric metric{0, 2};
    CHECK(!build_bands(std::vector<double>{0.3, 0.3}, 1.0, metric).has_value());
}

TEST_CASE("classification totality and clause verification on random configurations") {
    CounterRng rng(2025, 0);
    for (int trial = 0; trial < 200; ++trial) {
        int d = 2 + static_cast<int>(rng.next_below(3));
        int k = d + static_cast<int>(rng.next_below(static_cast<uint64_t>(d)));
        SeparationMetric metric{static_cast<int>(rng.next_below(3)), d};
        auto t = random_points(rng, k, 0.2, 1.0);
        double alpha1 = 0.3;
        auto bs = build_bands(t, alpha1, metric, {.beta1 = 1e-9});
        if (!bs) continue;
        // totality
        int total = bs->count(IndexClass::Free) + bs->count(IndexClass::QuasiFree) + bs->count(IndexClass::Bound);
        CHECK(total == k);
        CHECK(bs->lambda_count() == bs->count(IndexClass::Free) + bs->count(IndexClass::QuasiFree));
        for (const auto& band : bs->bands) CHECK(bs->classification[static_cast<size_t>(band.front())] == IndexClass::Free);
        // clauses at the module constants
        auto rep = verify_band_conclusions(*bs, t, 0.125, 1e-9);
        CHECK(rep.separation_ok);
        CHECK(rep.quasi_bound_ok);
        CHECK(rep.bound_ok);
    }
}

TEST_CASE("idempotence: rebuilding on the same points reproduces the partition") {
    CounterRng rng(2026, 0);
    SeparationMetric metric{1, 3};
    for (int trial = 0; trial < 50; ++trial) {
        auto t = random_points(rng, 5, 0.2, 1.0);
        auto a = build_bands(t, 0.3, metric);
        auto b = build_bands(t, 0.3, metric);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(a->bands == b->bands);
        CHECK(a->delta == b->delta);
    }
}

TEST_CASE("monotonicity: larger delta only merges bands") {
    CounterRng rng(2027, 0);
    SeparationMetric metric{0, 3};
    for (int trial = 0; trial < 50; ++trial) {
        auto t = random_points(rng, 6, 0.2, 1.0);
        auto fine = build_bands(t, 0.3, metric, {.delta0 = 0.02, .max_rounds = 1});
        auto coarse = build_bands(t, 0.3, metric, {.delta0 = 0.2, .max_rounds = 1});
        if (!fine || !coarse) continue;
        // every fine band is contained in some coarse band
        for (const auto& fband : fine->bands) {
            int target = coarse->band_of[static_cast<size_t>(fband.front())];
            for (int idx : fband) CHECK(coarse->band_of[static_cast<size_t>(idx)] == target);
        }
    }
}

TEST_CASE("negative clause checks on a hand-built violation") {
    SeparationMetric metric{0, 2};
    std::vector<double> t{0.2, 0.9};  // far apart
    BandStructure forced;
    forced.bands = {{0, 1}};  // forced into one band
    forced.band_of = {0, 0};
    forced.classification = {IndexClass::Free, IndexClass::QuasiFree};
    forced.bind = {-1, 0};
    forced.delta = 0.01;
    forced.delta_prime = 0.001;
    forced.alpha1 = 1.0;
    forced.metric = metric;
    auto rep = verify_band_conclusions(forced, t, 0.125, 1e-9);
    CHECK(!rep.quasi_bound_ok);  // 0.7 is not below delta*alpha1 = 0.01
    CHECK(!rep.violations.empty());

    // quasi-bound pair below the c0*beta1 lower threshold
    std::vector<double> close{0.5, 0.5 + 1e-9};
    BandStructure tight;
    tight.bands = {{0, 1}};
    tight.band_of = {0, 0};
    tight.classification = {IndexClass::Free, IndexClass::QuasiFree};
    tight.bind = {-1, 0};
    tight.delta = 0.5;
    tight.delta_prime = 0.05;
    tight.alpha1 = 1.0;
    tight.metric = metric;
    auto rep2 = verify_band_conclusions(tight, close, 0.5, 0.01);  // c0 beta1 = 5e-3 > 1e-9
    CHECK(!rep2.quasi_bound_ok);
}

TEST_CASE("within-band comparability") {
    SeparationMetric metric{0, 2};
    std::vector<double> t{0.5, 0.52, 0.9};
    auto bs = build_bands(t, 1.0, metric, {.delta0 = 0.05, .max_rounds = 1});
    REQUIRE(bs.has_value());
    REQUIRE(bs->bands.size() == 2);
    double ratio = within_band_comparability(*bs, t, 0.1);
    CHECK(ratio == doctest::Approx(0.02 / 0.5).epsilon(1e-9));
    CHECK(ratio < 0.5);

    CHECK_THROWS_AS(within_band_comparability(*bs, t, 0.6), std::invalid_argument);

    // separate bands only: vacuous pass
    std::vector<double> apart{0.2, 0.8};
    auto bs2 = build_bands(apart, 1.0, metric, {.delta0 = 0.05, .max_rounds = 1});
    REQUIRE(bs2.has_value());
    CHECK(within_band_comparability(*bs2, apart, 0.1) == 0.0);
}

TEST_CASE("two-stage bands: coarse merge then fine split") {
    SeparationMetric metric{0, 2};
    // 2d-1 = 3 points: a two-scale cluster around the top index
    std::vector<double> t{0.2, 0.68, 0.68002};
    TwoStageOptions opts;
    opts.delta = 0.25;
    opts.epsilon = 1.0 / 64;
    double alpha1 = 1.0, gamma2 = 0.001;
    auto ts = build_two_stage_bands(t, alpha1, gamma2, metric, opts);
    REQUIRE(ts.has_value());
    // first stage: {0} and {1,2} (gap 0.48 > delta alpha1 = 0.25; 2e-5 below)
    CHECK(ts->first.bands.size() == 2);
    CHECK(ts->second_indices == std::vector<int>{1, 2});
    // second stage at rho*gamma2 ~ 2e-6 < 2e-5: the cluster splits
    CHECK(ts->second.bands.size() == 2);

    auto rep = verify_two_stage_conclusions(*ts, t, 0.125, 1e-9, 1e-9);
    CHECK(rep.first.separation_ok);
    CHECK(rep.second.separation_ok);
    CHECK(rep.top_quasi_bound_ok);
}

TEST_CASE("two-stage bands: single point in the top band, and the beta2 sandwich") {
    SeparationMetric metric{0, 2};
    std::vector<double> spread{0.2, 0.5, 0.9};
    auto ts = build_two_stage_bands(spread, 1.0, 0.01, metric, {.delta = 0.25});
    REQUIRE(ts.has_value());
    CHECK(ts->second_indices == std::vector<int>{2});
    CHECK(ts->second.bands.size() == 1);  // trivial second stage

    // quasi-bound top pair with gap between c0*beta1 and c0*beta2: flagged
    std::vector<double> sandwich{0.2, 0.7, 0.7 + 2e-4};
    TwoStageOptions opts;
    opts.delta = 0.25;
    opts.rho = 0.0015;  // rho*gamma2 = 1.5e-3 > 2e-4: same second-stage band
    auto ts2 = build_two_stage_bands(sandwich, 1.0, 1.0, metric, opts);
    REQUIRE(ts2.has_value());
    REQUIRE(ts2->second_indices.size() == 2);
    double beta1 = 1e-4, beta2 = 1e-2;  // c0*beta1 = 1.25e-5 < 2e-4 < c0*beta2 = 1.25e-3
    auto rep = verify_two_stage_conclusions(*ts2, sandwich, 0.125, beta1, beta2);
    CHECK(rep.second.quasi_bound_ok);   // passes the beta1 threshold
    CHECK(!rep.top_quasi_bound_ok);     // fails the beta2 threshold
}

TEST_CASE("two-stage parameter chain enforced") {
    SeparationMetric metric{0, 2};
    std::vector<double> t{0.2, 0.5, 0.9};
    TwoStageOptions bad;
    bad.delta = 0.25;
    bad.delta_prime = 0.2;  // not < eps*delta
    CHECK_THROWS_AS(build_two_stage_bands(t, 1.0, 0.01, metric, bad), std::invalid_argument);
}

TEST_CASE("elim-diff bullets") {
    SeparationMetric metric{0, 2};
    ElimDiffParams p;
    p.alpha1 = 0.1;
    p.beta1 = 0.05;
    p.alpha2 = 0.2;
    p.n = 1.0;
    p.metric = metric;
    // 2d = 4 points, all separations generous
    std::vector<double> good{0.1, 0.3, 0.6, 0.95};
    auto rep = check_elim_diff(good, p);
    CHECK(rep.odd_ok);
    CHECK(rep.even_ok);
    CHECK(rep.top_ok);

    // t_j << t_k: the triangle-inequality branch still clears the threshold
    std::vector<double> skew{0.001, 0.3, 0.6, 0.95};
    CHECK(check_elim_diff(skew, p).top_ok);

    // near-equal pair at the top: alpha2-threshold branch fails
    std::vector<double> tight{0.1, 0.3, 0.6, 0.6001};
    auto rep2 = check_elim_diff(tight, p);
    CHECK(!rep2.top_ok);
    CHECK(!rep2.violations.empty());
}

TEST_CASE("exponent bookkeeping") {
    CHECK(staircase_exponent(4) == 4);   // 1 + 3
    CHECK(staircase_exponent(5) == 6);   // 2 + 4
    CHECK(staircase_exponent(2) == 1);
    CHECK(staircase_exponent(3) == 2);
    for (int d = 2; d <= 8; ++d) CHECK(staircase_exponent(d) >= d - 1);

    auto rec = exponent_bookkeeping(4, 4, 1);
    CHECK(rec.r_d_at_least_d_minus_1);
    CHECK(rec.band_count_ok);  // M + floor(k/2) = 1 + 2 <= 3
    CHECK(!exponent_bookkeeping(4, 6, 1).band_count_ok);  // M + 3 = 4 > 3

    // the quadruple read off the small-top branch: s1 = d-2, s2 = 2,
    // r2 = max(0, (1-n)(d-1)/2 - 1), r1 = d(d-1)/2 - r2
    for (int d : {4, 5}) {
        for (double n : {1.0, 0.7, 0.4, 0.1}) {
            double r2 = std::max(0.0, (1.0 - n) * (d - 1.0) / 2.0 - 1.0);
            double r1 = d * (d - 1.0) / 2.0 - r2;
            auto check = validate_mlf_quadruple(d, r1, r2, d - 2.0, 2.0);
            CHECK(check.ok);
        }
    }
    CHECK(!validate_mlf_quadruple(4, 5.0, 0.0, 2.0, 2.0).ok);
    CHECK(!validate_mlf_quadruple(4, 6.0, 0.0, 3.0, 2.0).ok);
    CHECK(!validate_mlf_quadruple(4, 0.0, 6.0, 4.0, 0.0).ok);  // slack negative
}

TEST_CASE("conditional lower bound: moment curve arithmetic") {
    auto m2 = moment_curve(2);
    SeparationMetric metric{0, 2};
    std::vector<double> t{0.2, 0.8};
    auto bs = build_bands(t, 0.1, metric, {.delta0 = 0.25});
    REQUIRE(bs.has_value());
    REQUIRE(bs->count(IndexClass::QuasiFree) == 0);

    LowerBoundParams p;
    p.alpha1 = 0.1;
    p.beta1 = 0.05;
    p.alpha2 = 0.1;
    p.n = 1.0;
    auto res = lower_bound_JP_product(m2, t, *bs, p);
    // lhs = |2 (t2 - t1)| = 1.2; rhs = alpha1^1 * (alpha2/alpha1)^1 = 0.1
    CHECK(res.lhs == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(res.rhs == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(res.ratio == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("conditional lower bound: threshold saturation scales like delta") {
    auto m2 = moment_curve(2);
    SeparationMetric metric{0, 2};
    double alpha1 = 0.1;
    for (double delta : {0.25, 0.125}) {
        // gap just above the split threshold delta*alpha1
        std::vector<double> t{0.5, 0.5 + delta * alpha1 * 1.01};
        auto bs = build_bands(t, alpha1, metric, {.delta0 = delta, .max_rounds = 1});
        REQUIRE(bs.has_value());
        REQUIRE(bs->bands.size() == 2);
        LowerBoundParams p;
        p.alpha1 = alpha1;
        p.beta1 = alpha1;
        p.alpha2 = alpha1;
        p.n = 1.0;
        auto res = lower_bound_JP_product(m2, t, *bs, p);
        // |J_P| = 2 gap = 2*1.01*delta*alpha1; rhs = alpha1: ratio ~ 2.02 delta
        CHECK(res.ratio == doctest::Approx(2.02 * delta).epsilon(1e-9));
    }
}

TEST_CASE("conditional lower bound refuses violated clauses") {
    auto m2 = moment_curve(2);
    SeparationMetric metric{0, 2};
    std::vector<double> t{0.2, 0.8};
    BandStructure forced;
    forced.bands = {{0, 1}};
    forced.band_of = {0, 0};
    forced.classification = {IndexClass::Free, IndexClass::QuasiFree};
    forced.bind = {-1, 0};
    forced.delta = 0.01;
    forced.delta_prime = 0.001;
    forced.alpha1 = 1.0;
    forced.metric = metric;
    LowerBoundParams p;
    p.alpha1 = 1.0;
    p.beta1 = 0.5;
    p.alpha2 = 1.0;
    CHECK_THROWS_AS(lower_bound_JP_product(m2, t, forced, p), std::invalid_argument);
}
