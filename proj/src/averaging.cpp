#include "arclab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "arclab/exponents.hpp"
#include "arclab/parallel.hpp"
#include "arclab/quadrature.hpp"
#include "arclab/rng.hpp"
#include "arclab/roots.hpp"

namespace arclab {

double mu_interval(const MuMeasure& m, double a, double b) {
    if (a < 0 || b < a) throw std::invalid_argument("mu_interval: need 0 <= a <= b");
    double inv_n = (2.0 * m.K + m.d * (m.d + 1.0)) / (m.d * (m.d + 1.0));
    double n = 1.0 / inv_n;
    return n * (std::pow(b, inv_n) - std::pow(a, inv_n));
}

MeasureRef make_measure(const MuMeasure& m) {
    return MeasureRef{[m](double a, double b) { return mu_interval(m, a, b); }};
}

MeasureRef make_affine_arclength_measure(const PolyCurve& curve) {
    DPoly tors = to_double(curve.torsion());
    double expo = 2.0 / (curve.dim() * (curve.dim() + 1.0));
    return MeasureRef{[tors, expo](double a, double b) {
        auto density = [&](double s) { return std::pow(std::abs(tors(s)), expo); };
        return integrate_adaptive(density, a, b, 1e-10).value;
    }};
}

std::vector<Interval> membership_intervals(const PolyCurve& curve, Interval i, const GridSet& e,
                                           std::span<const double> x, int sign) {
    const int d = curve.dim();
    std::vector<Interval> out;
    std::vector<double> cuts;
    for (const Box& box : e.boxes()) {
        // componentwise: want sign*P_k(s) in [x_k - hi_k, x_k - lo_k]... i.e.
        // P_k(s) within per-component bounds; collect sign-change breakpoints
        cuts.clear();
        cuts.push_back(i.lo);
        cuts.push_back(i.hi);
        std::vector<std::pair<double, double>> bounds(static_cast<size_t>(d));
        for (int k = 0; k < d; ++k) {
            size_t sk = static_cast<size_t>(k);
            double blo, bhi;
            if (sign > 0) {  // x - P(s) in box: x_k - hi <= P_k <= x_k - lo
                blo = x[sk] - box.hi[sk];
                bhi = x[sk] - box.lo[sk];
            } else {  // x + P(s) in box: lo - x <= P_k <= hi - x
                blo = box.lo[sk] - x[sk];
                bhi = box.hi[sk] - x[sk];
            }
            bounds[sk] = {blo, bhi};
            const DPoly& pk = curve.dcomponent_deriv(k, 0);
            DPoly shifted_lo = pk + DPoly(std::vector<double>{-blo});
            DPoly shifted_hi = pk + DPoly(std::vector<double>{-bhi});
            for (double r : real_roots_in(shifted_lo, i.lo, i.hi)) cuts.push_back(r);
            for (double r : real_roots_in(shifted_hi, i.lo, i.hi)) cuts.push_back(r);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (size_t c = 0; c + 1 < cuts.size(); ++c) {
            double mid = 0.5 * (cuts[c] + cuts[c + 1]);
            bool inside = true;
            for (int k = 0; k < d && inside; ++k) {
                double v = curve.dcomponent_deriv(k, 0)(mid);
                auto [blo, bhi] = bounds[static_cast<size_t>(k)];
                if (v < blo || v > bhi) inside = false;
            }
            if (inside) out.push_back({cuts[c], cuts[c + 1]});
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return out;
}

double apply_T(const PolyCurve& curve, Interval i, const MeasureRef& m, const GridSet& e,
               std::span<const double> x, double trunc) {
    if (i.lo < 0) throw std::invalid_argument("apply_T: I must lie in (0, inf)");
    Interval domain = i;
    if (trunc > 0) domain.lo = std::max(domain.lo, trunc);
    if (domain.empty()) return 0;
    double mass = 0;
    for (const Interval& seg : membership_intervals(curve, domain, e, x, +1)) mass += m.mass(seg.lo, seg.hi);
    return mass;
}

PairValue pair_value(const PolyCurve& curve, Interval i, const MeasureRef& m, const GridSet& e,
                     const GridSet& f, int x_samples, uint64_t seed, bool adjoint, double trunc) {
    const GridSet& sample_set = adjoint ? e : f;
    const GridSet& target = adjoint ? f : e;
    const int sign = adjoint ? -1 : +1;
    const int d = curve.dim();
    if (sample_set.empty() || target.empty()) throw std::invalid_argument("pair_value: zero-measure input");

    Interval domain = i;
    if (trunc > 0) domain.lo = std::max(domain.lo, trunc);
    if (domain.empty()) return {0, 0};

    double total_vol = sample_set.measure();
    // largest-remainder allocation of samples per box
    std::vector<int> alloc(sample_set.size(), 1);
    std::vector<std::pair<double, size_t>> frac;
    for (size_t b = 0; b < sample_set.size(); ++b) {
        double want = x_samples * sample_set.boxes()[b].volume() / total_vol;
        alloc[b] = std::max(1, static_cast<int>(want));
        frac.emplace_back(want - std::floor(want), b);
    }
    long have = 0;
    for (int a : alloc) have += a;
    std::sort(frac.rbegin(), frac.rend());
    size_t fi = 0;
    while (have < x_samples && !frac.empty()) {
        alloc[frac[fi % frac.size()].second] += 1;
        ++have;
        ++fi;
    }

    // per-sample values, deterministic stream per global index
    double value = 0, var_sum = 0;
    long global_index = 0;
    for (size_t b = 0; b < sample_set.size(); ++b) {
        const Box& box = sample_set.boxes()[b];
        int nb = alloc[b];
        std::vector<double> vals(static_cast<size_t>(nb));
        long base_index = global_index;
        parallel_for(static_cast<size_t>(nb), [&](size_t s) {
            CounterRng rng(seed, static_cast<uint64_t>(base_index + static_cast<long>(s)));
            std::vector<double> x(static_cast<size_t>(d));
            for (int k = 0; k < d; ++k) x[static_cast<size_t>(k)] = rng.uniform(box.lo[static_cast<size_t>(k)], box.hi[static_cast<size_t>(k)]);
            double mass = 0;
            for (const Interval& seg : membership_intervals(curve, domain, target, x, sign))
                mass += m.mass(seg.lo, seg.hi);
            vals[s] = mass;
        });
        global_index += nb;
        double mean = 0;
        for (double v : vals) mean += v;
        mean /= nb;
        double var = 0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var = nb > 1 ? var / (nb - 1.0) : 0.0;
        double vol = box.volume();
        value += vol * mean;
        var_sum += vol * vol * var / nb;
    }
    return {value, std::sqrt(var_sum)};
}

OperatorFunctionals functionals(const PolyCurve& curve, Interval i, const MeasureRef& m, const GridSet& e,
                                const GridSet& f, int x_samples, uint64_t seed) {
    auto pv = pair_value(curve, i, m, e, f, x_samples, seed, /*adjoint=*/false);
    OperatorFunctionals out;
    out.t_value = pv.value;
    out.error = pv.error;
    out.x_samples = x_samples;
    out.alpha = pv.value / f.measure();
    out.beta = pv.value / e.measure();
    return out;
}

std::pair<GridSet, GridSet> knapp_family(const PolyCurve& curve, Interval i, double delta, double t0) {
    const int d = curve.dim();
    if (!(t0 >= i.lo && t0 + 2 * delta <= i.hi))
        throw std::invalid_argument("knapp_family: [t0, t0 + 2 delta] must lie inside I");

    auto hull = [&](double width) {
        std::vector<double> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j) {
            size_t sj = static_cast<size_t>(j);
            const DPoly& pj = curve.dcomponent_deriv(j, 0);
            double base = pj(t0);
            double mn = 0, mx = 0;
            auto upd = [&](double s) {
                double v = pj(s) - base;
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            };
            upd(t0 + width);
            for (int g = 1; g < 16; ++g) upd(t0 + width * g / 16.0);
            DPoly dpj = to_double(curve.component(j).derivative());
            for (double r : real_roots_in(dpj, t0, t0 + width)) upd(r);
            // anisotropic fattening by the local derivative scale per axis
            double fac = 1.0;
            for (int k = 2; k <= j + 1; ++k) fac *= k;
            double scale = std::abs(curve.dcomponent_deriv(j, j + 1)(t0)) / fac;
            double w = 0.5 * std::pow(width, j + 1) * std::max(scale, 1e-9);
            lo[sj] = mn - w;
            hi[sj] = mx + w;
        }
        return GridSet::box(std::move(lo), std::move(hi));
    };

    GridSet e_delta = hull(delta);
    GridSet f_base = hull(2 * delta);
    std::vector<double> p0(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) p0[static_cast<size_t>(j)] = curve.dcomponent_deriv(j, 0)(t0);
    return {std::move(e_delta), f_base.translated(p0)};
}

double endpoint_p(int d) { return (d + 1.0) / 2.0; }
double endpoint_q(int d) { return endpoint_p(d) * d / (d - 1.0); }

RwtRatio rwt_ratio(const PolyCurve& curve, Interval i, const MeasureRef& m, const GridSet& e,
                   const GridSet& f, double p, double q, int x_samples, uint64_t seed) {
    auto fn = functionals(curve, i, m, e, f, x_samples, seed);
    double qprime_inv = 1.0 - 1.0 / q;
    double denom = std::pow(e.measure(), 1.0 / p) * std::pow(f.measure(), qprime_inv);
    RwtRatio out;
    out.raw = fn;
    out.ratio = fn.t_value / denom;
    out.error = fn.error / denom;
    return out;
}

KnappSweep knapp_sweep(const PolyCurve& curve, Interval i, const MuMeasure& m,
                       const std::vector<double>& deltas, double p, double q, double t0, int x_samples,
                       uint64_t seed) {
    KnappSweep sweep;
    MeasureRef mref = make_measure(m);
    for (double delta : deltas) {
        auto [e, f] = knapp_family(curve, i, delta, t0);
        // common random numbers across the sweep: the same relative sample
        // positions at every delta, so trends are not drowned in independent
        // Monte Carlo noise
        auto r = rwt_ratio(curve, i, mref, e, f, p, q, x_samples, seed);
        sweep.rows.push_back({delta, r.ratio, r.error});
    }
    double mn = Interval::inf, mx = 0;
    for (const auto& row : sweep.rows) {
        mn = std::min(mn, row.ratio);
        mx = std::max(mx, row.ratio);
    }
    sweep.max_over_min = mx / mn;

    // scaling-law prediction: ratio ~ delta^g with
    // g = (D+1) - D/p - D/q', D = d(d+1)/2; g < 0 means the ratio grows as
    // delta shrinks
    double bigd = curve.dim() * (curve.dim() + 1.0) / 2.0;
    double g = (bigd + 1.0) - bigd / p - bigd * (1.0 - 1.0 / q);
    sweep.predicted_sign = g < 0 ? +1 : (g > 0 ? -1 : 0);

    // strict trend with decreasing delta (rows are in the given delta order)
    bool increasing = true, decreasing = true;
    std::vector<SweepRow> ordered = sweep.rows;
    std::sort(ordered.begin(), ordered.end(), [](const SweepRow& a, const SweepRow& b) { return a.delta > b.delta; });
    for (size_t k = 1; k < ordered.size(); ++k) {
        if (!(ordered[k].ratio > ordered[k - 1].ratio)) increasing = false;
        if (!(ordered[k].ratio < ordered[k - 1].ratio)) decreasing = false;
    }
    sweep.monotone = increasing || decreasing;
    sweep.trend_sign = increasing ? +1 : (decreasing ? -1 : 0);
    return sweep;
}

namespace {

/// sampled min of T chi_target over points of `where`
double sampled_min_T(const PolyCurve& curve, Interval i, const MeasureRef& m, const GridSet& target,
                     const GridSet& where, int samples, uint64_t seed, int sign) {
    const int d = curve.dim();
    double total_vol = where.measure();
    double min_v = Interval::inf;
    long global = 0;
    for (const Box& box : where.boxes()) {
        int nb = std::max(1, static_cast<int>(samples * box.volume() / total_vol));
        for (int s = 0; s < nb; ++s, ++global) {
            CounterRng rng(seed ^ 0x5151u, static_cast<uint64_t>(global));
            std::vector<double> x(static_cast<size_t>(d));
            for (int k = 0; k < d; ++k) x[static_cast<size_t>(k)] = rng.uniform(box.lo[static_cast<size_t>(k)], box.hi[static_cast<size_t>(k)]);
            double mass = 0;
            for (const Interval& seg : membership_intervals(curve, i, target, x, sign))
                mass += m.mass(seg.lo, seg.hi);
            min_v = std::min(min_v, mass);
        }
    }
    return min_v;
}

}  // namespace

TwoSetCheck check_mlE_inequality(const PolyCurve& curve, Interval i, const MuMeasure& m, const GridSet& e1,
                                 const GridSet& e2, const GridSet& f, int x_samples, uint64_t seed) {
    TwoSetCheck out;
    MeasureRef mr = make_measure(m);
    const int d = curve.dim();
    // hypotheses: T chi_{E_j} >= alpha_j on (sampled) F; beta_j from the pairing
    // common random numbers across the two sets: identical sets measure
    // identically, so the ordering hypotheses are not broken by noise
    out.alpha1 = sampled_min_T(curve, i, mr, e1, f, x_samples / 4, seed, +1);
    out.alpha2 = sampled_min_T(curve, i, mr, e2, f, x_samples / 4, seed, +1);
    out.beta1 = functionals(curve, i, mr, e1, f, x_samples, seed + 1).beta;
    out.beta2 = functionals(curve, i, mr, e2, f, x_samples, seed + 1).beta;
    if (out.alpha1 <= 0 || out.beta1 <= 0) {
        out.failure = "T chi_E1 vanishes somewhere on sampled F";
        return out;
    }
    if (out.alpha2 < out.alpha1) {
        out.failure = "alpha2 >= alpha1 violated";
        return out;
    }
    out.hypotheses_ok = true;
    double n = m.n();
    out.lhs = e2.measure();
    out.rhs = std::pow(out.alpha1, d * (d + 1.0) / 2.0) * std::pow(out.beta1 / out.alpha1, d - 1.0) *
              std::pow(out.alpha2 / out.alpha1, (d + 1.0) / 2.0 + n * (d - 1.0) / 2.0);
    out.ratio = out.lhs / out.rhs;
    return out;
}

TwoSetCheck check_mlF_inequality(const PolyCurve& curve, Interval i, const MuMeasure& m, const GridSet& e,
                                 const GridSet& f1, const GridSet& f2, double eta, const MlFQuadruple& quad,
                                 int x_samples, uint64_t seed) {
    TwoSetCheck out;
    const int d = curve.dim();
    // exponent bookkeeping for the quadruple
    auto validation = validate_mlf_quadruple(d, quad.r1, quad.r2, quad.s1, quad.s2);
    if (!validation.ok) {
        out.failure = "quadruple: " + validation.reason;
        return out;
    }
    MeasureRef mr = make_measure(m);
    // common random numbers across the two sets (see check_mlE_inequality)
    out.beta1 = sampled_min_T(curve, i, mr, f1, e, x_samples / 4, seed, -1);
    out.beta2 = sampled_min_T(curve, i, mr, f2, e, x_samples / 4, seed, -1);
    auto fn1 = functionals(curve, i, mr, e, f1, x_samples, seed + 1);
    auto fn2 = functionals(curve, i, mr, e, f2, x_samples, seed + 1);
    out.alpha1 = fn1.alpha;
    out.alpha2 = fn2.alpha;
    if (out.beta2 < out.beta1) {
        out.failure = "beta2 >= beta1 violated";
        return out;
    }
    if (out.alpha2 > out.alpha1) {
        out.failure = "alpha2 <= alpha1 violated";
        return out;
    }
    // beta_j >= (1/8) eta T(E,F_j)/|E| with the module's comparability constant
    if (out.beta1 < 0.125 * eta * fn1.t_value / e.measure() ||
        out.beta2 < 0.125 * eta * fn2.t_value / e.measure()) {
        out.failure = "beta_j >= eta T(E,F_j)/|E| violated at the 1/8 threshold";
        return out;
    }
    out.hypotheses_ok = true;
    out.lhs = f2.measure();
    out.rhs = std::pow(eta, quad.c_exponent) * std::pow(out.alpha1, quad.r1) * std::pow(out.alpha2, quad.r2) *
              std::pow(out.beta1, quad.s1) * std::pow(out.beta2, quad.s2);
    out.ratio = out.lhs / out.rhs;
    return out;
}

}  // namespace arclab
