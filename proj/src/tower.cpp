#include "arclab/tower.hpp"

#include <algorithm>
#include <cmath>

#include "arclab/rng.hpp"

namespace arclab {

namespace {

struct LevelSpec {
    const GridSet* target;
    int sign;            // y = x(t) + sign * P(s)
    bool top;
    double demand;
    double floor;         // excise [0, floor]
    double excise_amp;    // near-point radius amp * t_j^{-2K/d(d+1)}
    double small_cutoff;  // top level, t_j below this: floor excision instead
    double excise_floor;
};

/// mlE: 2d levels over (E1, E2, F); mlF: 2d-1 levels over (E, F1, F2). The
/// per-level demands and separations are the same in both variants (odd
/// levels carry beta1, even levels alpha1) except at the top, which carries
/// alpha2 (mlE) resp. beta2 (mlF).
LevelSpec level_spec(int level, int d, TowerVariant variant, const TowerParams& p, const GridSet& a,
                     const GridSet& b, const GridSet& f) {
    LevelSpec spec{};
    double n = p.mu.n();
    double gamma1 = std::max(p.alpha1, p.beta1);
    spec.sign = level % 2 == 1 ? +1 : -1;  // (-1)^{level+1}
    int total = variant == TowerVariant::MlE ? 2 * d : 2 * d - 1;
    spec.top = level == total;
    double top_amp = variant == TowerVariant::MlE ? p.alpha2 : p.beta2;
    if (variant == TowerVariant::MlE)
        spec.target = level % 2 == 1 ? &f : (spec.top ? &b : &a);
    else
        spec.target = level % 2 == 0 ? &a : (spec.top ? &f : &b);  // a = E, b = F1, f = F2
    spec.demand = spec.top ? p.c * top_amp : p.c * (level % 2 == 1 ? p.beta1 : p.alpha1);
    spec.floor = p.c * std::pow(spec.top ? top_amp : gamma1, n);
    spec.excise_amp = spec.top ? p.c * top_amp : p.c * (level % 2 == 1 ? p.beta1 : p.alpha1);
    spec.small_cutoff = spec.top ? p.c * std::pow(top_amp, n) : 0.0;
    spec.excise_floor = 2.0 * spec.small_cutoff;
    return spec;
}

std::vector<Interval> subtract_interval(const std::vector<Interval>& segs, double lo, double hi) {
    std::vector<Interval> out;
    for (const Interval& s : segs) {
        if (hi <= s.lo || lo >= s.hi) {
            out.push_back(s);
            continue;
        }
        if (s.lo < lo) out.push_back({s.lo, lo});
        if (hi < s.hi) out.push_back({hi, s.hi});
    }
    return out;
}

double total_mass(const std::vector<Interval>& segs, const MuMeasure& mu) {
    double m = 0;
    for (const Interval& s : segs) m += mu_interval(mu, s.lo, s.hi);
    return m;
}

/// points at the mu-quantiles (j+1/2)/count inside segs (assumed sorted)
std::vector<double> quantile_points(const std::vector<Interval>& segs, const MuMeasure& mu, int count,
                                    double mass) {
    std::vector<double> out;
    if (segs.empty() || mass <= 0) return out;
    int next = 0;
    double acc = 0;
    for (const Interval& s : segs) {
        double seg_mass = mu_interval(mu, s.lo, s.hi);
        while (next < count) {
            double want = mass * (next + 0.5) / count;
            if (want > acc + seg_mass) break;
            // invert mu on this segment: mu([s.lo, x]) = want - acc
            double inv_n = (2.0 * mu.K + mu.d * (mu.d + 1.0)) / (mu.d * (mu.d + 1.0));
            double n = 1.0 / inv_n;
            double base = std::pow(s.lo, inv_n);
            double x = std::pow(base + (want - acc) / n, n);
            out.push_back(std::min(std::max(x, s.lo), s.hi));
            ++next;
        }
        acc += seg_mass;
    }
    return out;
}

}  // namespace

TupleTower build_tuple_tower(const PolyCurve& curve, Interval i, const GridSet& set_a, const GridSet& set_b,
                             const GridSet& set_f, TowerVariant variant, const TowerParams& params) {
    const int d = curve.dim();
    const int total_levels = variant == TowerVariant::MlE ? 2 * d : 2 * d - 1;
    TupleTower tower;
    tower.variant = variant;
    tower.params = params;

    // x0: best of seeded candidates from the starting set (E1 resp. E)
    const GridSet& start = set_a;
    auto level1 = level_spec(1, d, variant, params, set_a, set_b, set_f);
    double best_mass = -1;
    CounterRng rng(params.seed, 0x70770);
    std::vector<double> x(static_cast<size_t>(d));
    for (int cand = 0; cand < 64; ++cand) {
        const Box& box = start.boxes()[rng.next_below(start.size())];
        for (int k = 0; k < d; ++k) x[static_cast<size_t>(k)] = rng.uniform(box.lo[static_cast<size_t>(k)], box.hi[static_cast<size_t>(k)]);
        auto segs = membership_intervals(curve, i, *level1.target, x, -level1.sign);
        double mass = total_mass(segs, params.mu);
        if (mass > best_mass) {
            best_mass = mass;
            tower.x0 = x;
        }
    }

    struct Node {
        std::vector<double> t;
        std::vector<double> phi;  // x0 + Phi(t)
    };
    std::vector<Node> frontier{{{}, tower.x0}};

    for (int level = 1; level <= total_levels; ++level) {
        auto spec = level_spec(level, d, variant, params, set_a, set_b, set_f);
        TowerLevel record;
        record.level = level;
        record.demanded_mass = spec.demand;
        record.min_admissible_mass = Interval::inf;

        std::vector<Node> next;
        for (const Node& node : frontier) {
            // membership solves x - sign'*P(s) in target with sign' = -spec.sign
            auto segs = membership_intervals(curve, i, *spec.target, node.phi, -spec.sign);
            segs = subtract_interval(segs, 0.0, spec.floor);
            for (double tj : node.t) {
                if (spec.top && tj < spec.small_cutoff) {
                    segs = subtract_interval(segs, 0.0, spec.excise_floor);
                } else {
                    double radius = spec.excise_amp * std::pow(tj, -2.0 * params.mu.K / (params.mu.d * (params.mu.d + 1.0)));
                    segs = subtract_interval(segs, tj - radius, tj + radius);
                }
            }
            double mass = total_mass(segs, params.mu);
            record.min_admissible_mass = std::min(record.min_admissible_mass, mass);
            if (mass < spec.demand) continue;  // this tuple dies
            for (double s : quantile_points(segs, params.mu, params.branch, mass)) {
                Node child;
                child.t = node.t;
                child.t.push_back(s);
                child.phi = node.phi;
                for (int k = 0; k < d; ++k)
                    child.phi[static_cast<size_t>(k)] += spec.sign * curve.dcomponent_deriv(k, 0)(s);
                next.push_back(std::move(child));
                if (static_cast<int>(next.size()) >= params.beam * params.branch) break;
            }
            if (static_cast<int>(next.size()) >= params.beam * params.branch) break;
        }
        // deterministic beam trim: evenly spaced survivors
        if (static_cast<int>(next.size()) > params.beam) {
            std::vector<Node> trimmed;
            trimmed.reserve(static_cast<size_t>(params.beam));
            for (int j = 0; j < params.beam; ++j)
                trimmed.push_back(next[static_cast<size_t>(j) * next.size() / static_cast<size_t>(params.beam)]);
            next = std::move(trimmed);
        }

        record.pass = !next.empty();
        for (const Node& node : next) record.tuples.push_back(node.t);
        tower.levels.push_back(std::move(record));
        if (next.empty()) {
            tower.shortfall = "mass shortfall at level " + std::to_string(level) +
                              " (grid too coarse or parameters too aggressive)";
            return tower;
        }
        frontier = std::move(next);
    }
    tower.complete = true;
    return tower;
}

TowerInvariantReport verify_tower_invariants(const TupleTower& tower) {
    TowerInvariantReport rep;
    if (tower.levels.empty()) return rep;
    const TowerParams& p = tower.params;
    const int d = p.mu.d;
    const int total_levels = tower.variant == TowerVariant::MlE ? 2 * d : 2 * d - 1;
    double n = p.mu.n();
    double gamma1 = std::max(p.alpha1, p.beta1);
    double expo = 2.0 * p.mu.K / (p.mu.d * (p.mu.d + 1.0));
    double top_amp = tower.variant == TowerVariant::MlE ? p.alpha2 : p.beta2;
    for (const TowerLevel& lvl : tower.levels) {
        for (const auto& t : lvl.tuples) {
            for (size_t idx = 0; idx < t.size(); ++idx) {
                int level_1b = static_cast<int>(idx) + 1;
                bool idx_top = level_1b == total_levels;
                double idx_floor = p.c * std::pow(idx_top ? top_amp : gamma1, n);
                if (t[idx] < idx_floor * (1.0 - 1e-12)) {
                    rep.floors_ok = false;
                    rep.violations.push_back("floor violated at level " + std::to_string(level_1b));
                }
                for (size_t j = 0; j < idx; ++j) {
                    double amp = idx_top ? top_amp : (level_1b % 2 == 1 ? p.beta1 : p.alpha1);
                    double need;
                    if (idx_top && t[j] < p.c * std::pow(top_amp, n)) need = 0.5 * t[idx];
                    else need = p.c * amp * std::pow(t[j], -expo);
                    if (!(std::abs(t[idx] - t[j]) >= need * (1.0 - 1e-12))) {
                        rep.separations_ok = false;
                        rep.violations.push_back("separation violated at level " + std::to_string(level_1b));
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace arclab
