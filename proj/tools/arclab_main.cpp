// arclab: desk-scale numerical verification of the computable machinery
// behind averaging operators with affine arclength measure on polynomial
// curves: torsion minors, interval decomposition, Jacobian identities, band
// combinatorics, and discretized operator functionals.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "arclab/averaging.hpp"
#include "arclab/bands.hpp"
#include "arclab/corpus.hpp"
#include "arclab/dw.hpp"
#include "arclab/kernels.hpp"
#include "arclab/ladder.hpp"
#include "arclab/parallel.hpp"
#include "arclab/power_det.hpp"
#include "arclab/report.hpp"
#include "arclab/rng.hpp"
#include "arclab/tower.hpp"

using namespace arclab;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOpts {
    uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    std::string kernel;
    std::string out;
};

uint64_t require_seed(const GlobalOpts& g) {
    if (!g.seed_set) throw ConfigError("--seed is mandatory for sampling runs");
    return g.seed;
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << text;
}

std::string fmt(double v) { return KvNode::format_double(v); }

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size()) throw ConfigError("malformed number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

/// "lo1,lo2,...:hi1,hi2,..." -> box set
GridSet parse_box(const std::string& text, int dim) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("box format is lo1,..:hi1,..");
    auto lo = parse_csv_doubles(text.substr(0, colon));
    auto hi = parse_csv_doubles(text.substr(colon + 1));
    if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
        throw ConfigError("box dimension mismatch");
    return GridSet::box(std::move(lo), std::move(hi));
}

// thread count and kernel choice stay out of the echo: results are
// bit-identical across both, and the body must be too
void echo_common(VerificationReport& rep, const GlobalOpts& g, const std::string& curve_name = "") {
    if (!curve_name.empty()) rep.config().put_scalar("curve", curve_name);
    if (g.seed_set) rep.config().put_int("seed", static_cast<long long>(g.seed));
}

int finish(VerificationReport& rep, const GlobalOpts& g,
           std::chrono::steady_clock::time_point started) {
    auto elapsed = std::chrono::steady_clock::now() - started;
    rep.set_walltime_ms(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
    write_or_print(g.out, rep.serialize());
    for (const auto& c : rep.checks()) {
        if (c.status == "fail") std::cerr << "FAIL: " << c.name << " (" << c.claim << ")\n";
    }
    return rep.passed() ? 0 : 1;
}

std::string interval_string(const Interval& iv) { return fmt(iv.lo) + ".." + fmt(iv.hi); }

// ---------------------------------------------------------------- decompose

int run_decompose(const GlobalOpts& g, const std::string& curve_name, double tol, int grid,
                  int geometric_samples) {
    auto started = std::chrono::steady_clock::now();
    if (!(tol > 0)) throw ConfigError("--tol must be positive");
    if (grid < 2) throw ConfigError("--grid must be at least 2");
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    VerificationReport rep("decompose");
    echo_common(rep, g, curve_name);
    rep.config().put_double("tol", tol);
    rep.config().put_int("grid", grid);

    DwOptions opts;
    opts.root_tol = tol;
    opts.grid = grid;
    auto res = dw_decompose(curve, opts);

    KvNode leaves = KvNode::list();
    bool all_ok = true;
    for (const auto& leaf : res.leaves) {
        KvNode node = KvNode::map();
        node.put_scalar("interval", interval_string(leaf.interval));
        node.put_double("b", leaf.b);
        node.put_bool("b-defined", leaf.b_defined);
        node.put_int("K", leaf.K);
        node.put_double("A", leaf.A);
        node.put_double("c-lo", leaf.c_lo);
        node.put_double("c-hi", leaf.c_hi);
        if (leaf.flagged) node.put_scalar("flag", leaf.flag);
        KvNode lineage = KvNode::list();
        for (const auto& e : leaf.lineage) {
            KvNode le = KvNode::map();
            le.put_int("step", e.step);
            const char* tag = e.tag == LineageEntry::Tag::Step0 ? "step0"
                              : e.tag == LineageEntry::Tag::Gap ? "gap"
                              : e.tag == LineageEntry::Tag::Dyadic ? "dyadic"
                                                                   : "final-split";
            le.put_scalar("case", tag);
            le.put_double("b", e.b);
            lineage.append(std::move(le));
        }
        node.put("lineage", std::move(lineage));
        if (geometric_samples > 0) {
            double ratio = verify_geometric_inequality(leaf, curve, geometric_samples, require_seed(g));
            node.put_double("geometric-min-ratio", ratio);
            if (!(ratio > 0)) all_ok = false;
        }
        if (leaf.c_hi / leaf.c_lo > 1e4 || leaf.flagged) all_ok = false;
        leaves.append(std::move(node));
    }
    rep.config().put_int("leaf-count", static_cast<long long>(res.leaves.size()));
    rep.config().put_int("piece-bound", res.piece_bound);
    if (res.transformed) rep.config().put_bool("component-mix-applied", true);

    CheckRecord rec{"decompose", "torsion-comparability", all_ok ? "pass" : "fail", {}};
    rec.data.emplace_back("leaves", std::to_string(res.leaves.size()));
    rep.add_check(std::move(rec));
    // the leaf table itself, stable order for golden-file diffs
    rep.config().put("leaves", std::move(leaves));
    // per-leaf comparability profiles as a sweep, (s, ratio) rows
    std::vector<std::vector<double>> rows;
    for (const auto& leaf : res.leaves)
        for (auto [s, ratio] : comparability_profile(leaf, curve, grid)) rows.push_back({s, ratio});
    rep.add_sweep("comparability", {"s", "ratio"}, rows);
    return finish(rep, g, started);
}

// ----------------------------------------------------------------- verify *

int run_verify_identity(const GlobalOpts& g, const std::string& curve_name, double lo, double hi,
                        int samples, double tol_rel, double quad_tol) {
    auto started = std::chrono::steady_clock::now();
    if (!(tol_rel > 0) || !(quad_tol > 0)) throw ConfigError("tolerances must be positive");
    if (samples < 1) throw ConfigError("--samples must be at least 1");
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    VerificationReport rep("verify-identity");
    echo_common(rep, g, curve_name);
    rep.config().put_scalar("box", fmt(lo) + ".." + fmt(hi));
    rep.config().put_int("samples", samples);
    rep.config().put_double("tol-rel", tol_rel);

    auto res = check_identity_JP_equals_Jd(curve, {lo, hi}, samples, quad_tol, require_seed(g));
    CheckRecord rec{"jacobian-identity", "jacobian-ladder-identity",
                    res.max_rel_error <= tol_rel ? "pass" : "fail",
                    {{"max-rel-error", fmt(res.max_rel_error)}, {"tuples", std::to_string(res.tuples)}}};
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

int run_verify_vandermonde(const GlobalOpts& g, int d_max, int sum_max) {
    auto started = std::chrono::steady_clock::now();
    VerificationReport rep("verify-vandermonde");
    echo_common(rep, g);
    rep.config().put_int("d-max", d_max);
    rep.config().put_int("sum-max", sum_max);

    long count = 0;
    bool ok = true;
    for (int d = 2; d <= d_max && ok; ++d) {
        std::vector<int> exps(static_cast<size_t>(d));
        auto enumerate = [&](auto&& self, int pos, int lo, int budget) -> void {
            if (!ok) return;
            if (pos == d) {
                MPoly p = power_determinant_factor(exps);
                if (!p.symmetric() || !p.coefficients_nonnegative() || p.is_zero()) ok = false;
                ++count;
                return;
            }
            for (int e = lo; e <= budget; ++e) {
                exps[static_cast<size_t>(pos)] = e;
                self(self, pos + 1, e + 1, budget - e);
            }
        };
        enumerate(enumerate, 0, 0, sum_max);
    }
    CheckRecord rec{"vandermonde-factorization", "alternating-determinant-factor", ok ? "pass" : "fail",
                    {{"families", std::to_string(count)}}};
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

int run_verify_derivative_bounds(const GlobalOpts& g, const std::string& curve_name, int grid) {
    auto started = std::chrono::steady_clock::now();
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    VerificationReport rep("verify-derivative-bounds");
    echo_common(rep, g, curve_name);
    rep.config().put_int("grid", grid);

    auto res = dw_decompose(curve);
    int deg_l1 = std::max(curve.minor_ladder(1).degree(), 0);
    double worst = 0;
    for (const auto& leaf : res.leaves) {
        auto norm = normalize_piece(leaf, curve);
        worst = std::max(worst, check_L1_derivative_bound(norm.curve, norm.interval, grid));
    }
    bool ok = worst <= deg_l1 + 1e-9;
    CheckRecord rec{"derivative-bound", "minor-log-derivative-bound", ok ? "pass" : "fail",
                    {{"measured", fmt(worst)}, {"bound", std::to_string(deg_l1)}}};
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

int run_verify_geometric(const GlobalOpts& g, const std::string& curve_name, int samples) {
    auto started = std::chrono::steady_clock::now();
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    VerificationReport rep("verify-geometric");
    echo_common(rep, g, curve_name);
    rep.config().put_int("samples", samples);

    auto res = dw_decompose(curve);
    bool ok = true;
    std::vector<std::vector<double>> rows;
    for (size_t li = 0; li < res.leaves.size(); ++li) {
        double ratio = verify_geometric_inequality(res.leaves[li], curve, samples, require_seed(g));
        rows.push_back({static_cast<double>(li), ratio});
        if (!(ratio > 0)) ok = false;
    }
    rep.add_sweep("geometric", {"leaf", "min-ratio"}, rows);
    CheckRecord rec{"geometric-inequality", "jacobian-product-lower-bound", ok ? "pass" : "fail",
                    {{"leaves", std::to_string(res.leaves.size())}}};
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

int run_verify_lbj(const GlobalOpts& g, const std::string& curve_name, int configs, int K, double golden) {
    auto started = std::chrono::steady_clock::now();
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    const int d = curve.dim();
    VerificationReport rep("verify-lbj");
    echo_common(rep, g, curve_name);
    rep.config().put_int("configs", configs);
    rep.config().put_int("K", K);

    uint64_t seed = require_seed(g);
    Interval domain{0.0, 1.0};
    std::vector<double> corner(static_cast<size_t>(d), -6.0), far(static_cast<size_t>(d), 6.0);
    GridSet ball = GridSet::box(corner, far);

    TowerParams params;
    params.mu = MuMeasure{K, d};
    MeasureRef mr = make_measure(params.mu);
    auto fn = functionals(curve, domain, mr, ball, ball, 800, seed);
    params.alpha1 = 0.5 * fn.alpha;
    params.alpha2 = 0.5 * fn.alpha;
    params.beta1 = 0.5 * fn.beta;
    params.beta2 = 0.5 * fn.beta;
    params.seed = seed;
    params.beam = 64;
    auto tower = build_tuple_tower(curve, domain, ball, ball, ball, TowerVariant::MlE, params);
    if (!tower.complete) {
        CheckRecord rec{"lbj", "conditional-jacobian-lower-bound", "fail", {{"shortfall", tower.shortfall}}};
        rep.add_check(std::move(rec));
        return finish(rep, g, started);
    }

    SeparationMetric metric{K, d};
    LowerBoundParams lp;
    lp.alpha1 = params.alpha1;
    lp.beta1 = params.beta1;
    lp.alpha2 = params.alpha2;
    lp.n = params.mu.n();
    const auto& tuples = tower.levels.back().tuples;
    double min_ratio = Interval::inf;
    int evaluated = 0, skipped = 0;
    for (int cfg = 0; cfg < configs; ++cfg) {
        CounterRng rng(seed, 0xb00 + static_cast<uint64_t>(cfg));
        const auto& full = tuples[rng.next_below(tuples.size())];
        std::vector<double> t(full.end() - d, full.end());
        // jitter inside the excision-free gaps to vary the configurations
        for (auto& v : t) v *= 1.0 + 0.02 * (rng.next_double() - 0.5);
        auto bs = build_bands(t, params.alpha1, metric, {.beta1 = params.beta1});
        if (!bs || bs->count(IndexClass::Bound) > 0) {
            ++skipped;
            continue;
        }
        try {
            auto res = lower_bound_JP_product(curve, t, *bs, lp);
            min_ratio = std::min(min_ratio, res.ratio);
            ++evaluated;
        } catch (const std::invalid_argument&) {
            ++skipped;
        }
    }
    bool ok = evaluated > 0 && min_ratio >= golden;
    CheckRecord rec{"lbj", "conditional-jacobian-lower-bound", ok ? "pass" : "fail",
                    {{"min-ratio", fmt(min_ratio)},
                     {"golden", fmt(golden)},
                     {"evaluated", std::to_string(evaluated)},
                     {"skipped", std::to_string(skipped)}}};
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

// ------------------------------------------------------------------- bands

int run_bands(const GlobalOpts& g, const std::string& points_csv, double alpha1, double delta, int K,
              int dim, double c0, double beta1, bool verify) {
    auto started = std::chrono::steady_clock::now();
    VerificationReport rep(verify ? "bands-verify" : "bands-build");
    echo_common(rep, g);
    rep.config().put_scalar("points", points_csv);
    rep.config().put_double("alpha1", alpha1);
    rep.config().put_double("delta", delta);
    rep.config().put_int("K", K);
    rep.config().put_int("dim", dim);

    auto t = parse_csv_doubles(points_csv);
    SeparationMetric metric{K, dim};
    auto bs = build_bands(t, alpha1, metric, {.delta0 = delta, .c0 = c0, .beta1 = beta1});
    if (!bs) {
        rep.add_check({"bands", "band-structure", "fail", {{"reason", "no valid scale in the refinement chain"}}});
        return finish(rep, g, started);
    }
    KvNode bands = KvNode::list();
    for (const auto& band : bs->bands) {
        KvNode b = KvNode::list();
        for (int idx : band) b.append(KvNode::scalar(std::to_string(idx)));
        bands.append(std::move(b));
    }
    rep.config().put("bands", std::move(bands));
    KvNode classes = KvNode::list();
    for (auto c : bs->classification)
        classes.append(KvNode::scalar(c == IndexClass::Free ? "free"
                                      : c == IndexClass::QuasiFree ? "quasi-free"
                                                                   : "bound"));
    rep.config().put("classification", std::move(classes));
    rep.config().put_double("delta-used", bs->delta);
    rep.config().put_double("delta-prime", bs->delta_prime);

    CheckRecord build_rec{"bands-build", "band-structure", "pass",
                          {{"bands", std::to_string(bs->bands.size())},
                           {"free", std::to_string(bs->count(IndexClass::Free))},
                           {"quasi-free", std::to_string(bs->count(IndexClass::QuasiFree))},
                           {"bound", std::to_string(bs->count(IndexClass::Bound))}}};
    rep.add_check(std::move(build_rec));
    if (verify) {
        auto clause = verify_band_conclusions(*bs, t, c0, beta1);
        bool ok = clause.separation_ok && clause.quasi_bound_ok && clause.bound_ok;
        CheckRecord rec{"bands-clauses", "band-separation-clauses", ok ? "pass" : "fail",
                        {{"violations", std::to_string(clause.violations.size())}}};
        rep.add_check(std::move(rec));
    }
    return finish(rep, g, started);
}

// ------------------------------------------------------------------- tower

int run_tower(const GlobalOpts& g, const std::string& curve_name, const std::string& variant_name, int K,
              double ball_radius, double c) {
    auto started = std::chrono::steady_clock::now();
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    const int d = curve.dim();
    VerificationReport rep("tower-build");
    echo_common(rep, g, curve_name);
    rep.config().put_scalar("variant", variant_name);
    rep.config().put_int("K", K);
    rep.config().put_double("ball", ball_radius);

    TowerVariant variant;
    if (variant_name == "mlE") variant = TowerVariant::MlE;
    else if (variant_name == "mlF") variant = TowerVariant::MlF;
    else throw ConfigError("variant must be mlE or mlF");

    uint64_t seed = require_seed(g);
    Interval domain{0.0, 1.0};
    std::vector<double> lo(static_cast<size_t>(d), -ball_radius), hi(static_cast<size_t>(d), ball_radius);
    GridSet ball = GridSet::box(lo, hi);
    TowerParams params;
    params.mu = MuMeasure{K, d};
    MeasureRef mr = make_measure(params.mu);
    auto fn = functionals(curve, domain, mr, ball, ball, 800, seed);
    params.alpha1 = 0.5 * fn.alpha;
    params.alpha2 = 0.5 * fn.alpha;
    params.beta1 = 0.5 * fn.beta;
    params.beta2 = 0.5 * fn.beta;
    params.c = c;
    params.seed = seed;
    auto tower = build_tuple_tower(curve, domain, ball, ball, ball, variant, params);

    std::vector<std::vector<double>> rows;
    for (const auto& lvl : tower.levels)
        rows.push_back({static_cast<double>(lvl.level), lvl.demanded_mass, lvl.min_admissible_mass,
                        lvl.pass ? 1.0 : 0.0});
    rep.add_sweep("tower-levels", {"level", "demanded", "min-admissible", "pass"}, rows);

    auto inv = verify_tower_invariants(tower);
    bool ok = tower.complete && inv.floors_ok && inv.separations_ok;
    CheckRecord rec{"tower", "tuple-tower-mass-accounting", ok ? "pass" : "fail", {}};
    if (!tower.complete) rec.data.emplace_back("shortfall", tower.shortfall);
    rec.data.emplace_back("levels", std::to_string(tower.levels.size()));
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

// ---------------------------------------------------------------- operator

int run_operator_ratio(const GlobalOpts& g, const std::string& curve_name, const std::string& e_box,
                       const std::string& f_box, double p, double q, int K, int samples) {
    auto started = std::chrono::steady_clock::now();
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    const int d = curve.dim();
    VerificationReport rep("operator-ratio");
    echo_common(rep, g, curve_name);
    if (p <= 0) p = endpoint_p(d);
    if (q <= 0) q = endpoint_q(d);
    rep.config().put_double("p", p);
    rep.config().put_double("q", q);
    rep.config().put_int("K", K);
    rep.config().put_int("samples", samples);
    rep.config().put_scalar("e", e_box);
    rep.config().put_scalar("f", f_box);

    GridSet e = parse_box(e_box, d), f = parse_box(f_box, d);
    MeasureRef mr = make_measure(MuMeasure{K, d});
    auto r = rwt_ratio(curve, {0.0, 1.0}, mr, e, f, p, q, samples, require_seed(g));
    CheckRecord rec{"rwt-ratio", "restricted-weak-type-ratio", "pass",
                    {{"ratio", fmt(r.ratio)},
                     {"error", fmt(r.error)},
                     {"t-value", fmt(r.raw.t_value)},
                     {"alpha", fmt(r.raw.alpha)},
                     {"beta", fmt(r.raw.beta)}}};
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

int run_operator_sweep(const GlobalOpts& g, const std::string& curve_name, double dmin, double dmax,
                       double p, double q, int K, double t0, int samples, const std::string& table_path,
                       double flat_bound) {
    auto started = std::chrono::steady_clock::now();
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    const int d = curve.dim();
    VerificationReport rep("operator-sweep-knapp");
    echo_common(rep, g, curve_name);
    if (p <= 0) p = endpoint_p(d);
    if (q <= 0) q = endpoint_q(d);
    if (!(dmin > 0 && dmin <= dmax)) throw ConfigError("need 0 < dmin <= dmax");
    rep.config().put_double("p", p);
    rep.config().put_double("q", q);
    rep.config().put_double("dmin", dmin);
    rep.config().put_double("dmax", dmax);
    rep.config().put_int("K", K);
    rep.config().put_int("samples", samples);

    std::vector<double> deltas;
    for (double delta = dmax; delta >= dmin * (1 - 1e-12); delta *= 0.5) deltas.push_back(delta);
    auto sweep = knapp_sweep(curve, {0.0, 1.0}, MuMeasure{K, d}, deltas, p, q, t0, samples, require_seed(g));

    std::vector<std::vector<double>> rows;
    std::string csv = "# columns: delta,ratio,error\n";
    for (const auto& row : sweep.rows) {
        rows.push_back({row.delta, row.ratio, row.error});
        csv += fmt(row.delta) + "," + fmt(row.ratio) + "," + fmt(row.error) + "\n";
    }
    rep.add_sweep("knapp", {"delta", "ratio", "error"}, rows);
    if (!table_path.empty()) write_or_print(table_path, csv);
    else std::cout << csv;

    bool at_endpoint = sweep.predicted_sign == 0;
    bool ok = at_endpoint ? sweep.max_over_min <= flat_bound
                          : (sweep.monotone && sweep.trend_sign == sweep.predicted_sign);
    CheckRecord rec{"knapp-sweep", at_endpoint ? "endpoint-flatness" : "off-endpoint-trend",
                    ok ? "pass" : "fail",
                    {{"max-over-min", fmt(sweep.max_over_min)},
                     {"monotone", sweep.monotone ? "true" : "false"},
                     {"trend", std::to_string(sweep.trend_sign)},
                     {"predicted", std::to_string(sweep.predicted_sign)}}};
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

int run_operator_mle(const GlobalOpts& g, const std::string& curve_name, const std::string& e1_box,
                     const std::string& e2_box, const std::string& f_box, int K, int samples,
                     double golden) {
    auto started = std::chrono::steady_clock::now();
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    const int d = curve.dim();
    VerificationReport rep("operator-check-mle");
    echo_common(rep, g, curve_name);
    rep.config().put_int("K", K);
    rep.config().put_int("samples", samples);

    auto res = check_mlE_inequality(curve, {0.0, 1.0}, MuMeasure{K, d}, parse_box(e1_box, d),
                                    parse_box(e2_box, d), parse_box(f_box, d), samples, require_seed(g));
    CheckRecord rec{"mle", "two-set-measure-lower-bound", "fail", {}};
    if (!res.hypotheses_ok) {
        rec.status = "fail";
        rec.data.emplace_back("refused", res.failure);
    } else {
        rec.status = res.ratio >= golden ? "pass" : "fail";
        rec.data = {{"ratio", fmt(res.ratio)}, {"alpha1", fmt(res.alpha1)}, {"alpha2", fmt(res.alpha2)},
                    {"beta1", fmt(res.beta1)}, {"golden", fmt(golden)}};
    }
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

int run_operator_mlf(const GlobalOpts& g, const std::string& curve_name, const std::string& e_box,
                     const std::string& f1_box, const std::string& f2_box, double eta,
                     const std::string& quad_csv, double c_exp, int K, int samples, double golden) {
    auto started = std::chrono::steady_clock::now();
    PolyCurve curve = resolve_curve(curve_name, g.seed);
    const int d = curve.dim();
    VerificationReport rep("operator-check-mlf");
    echo_common(rep, g, curve_name);
    rep.config().put_double("eta", eta);
    rep.config().put_scalar("quad", quad_csv);
    rep.config().put_int("K", K);

    auto quad_vals = parse_csv_doubles(quad_csv);
    if (quad_vals.size() != 4) throw ConfigError("--quad needs r1,r2,s1,s2");
    MlFQuadruple quad{quad_vals[0], quad_vals[1], quad_vals[2], quad_vals[3], c_exp};
    auto res = check_mlF_inequality(curve, {0.0, 1.0}, MuMeasure{K, d}, parse_box(e_box, d),
                                    parse_box(f1_box, d), parse_box(f2_box, d), eta, quad, samples,
                                    require_seed(g));
    CheckRecord rec{"mlf", "two-set-measure-lower-bound-dual", "fail", {}};
    if (!res.hypotheses_ok) {
        rec.data.emplace_back("refused", res.failure);
    } else {
        rec.status = res.ratio >= golden ? "pass" : "fail";
        rec.data = {{"ratio", fmt(res.ratio)}, {"beta1", fmt(res.beta1)}, {"beta2", fmt(res.beta2)},
                    {"golden", fmt(golden)}};
    }
    rep.add_check(std::move(rec));
    return finish(rep, g, started);
}

int run_emit_plot(const GlobalOpts& g, const std::string& report_path, const std::string& sweep) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open report: " + report_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    KvNode parsed = KvNode::parse(VerificationReport::body_of(buf.str()));
    write_or_print(g.out, emit_plot_data(parsed, sweep));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale verification of affine-arclength averaging machinery on polynomial curves"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "64-bit seed (mandatory for sampling runs)")->each([&](const std::string&) {
        g.seed_set = true;
    });
    app.add_option("--threads", g.threads, "worker threads for samplers");
    app.add_option("--kernel", g.kernel, "kernel selection: scalar or avx2");
    app.add_option("--out", g.out, "report output path (stdout when omitted)");

    // decompose
    auto* dec = app.add_subcommand("decompose", "interval decomposition with measured comparability");
    std::string curve = "moment2";
    double tol = 1e-12;
    int grid = 129;
    int dec_geom_samples = 0;
    dec->add_option("--curve", curve, "curve file or corpus name")->required();
    dec->add_option("--tol", tol, "root-finding tolerance");
    dec->add_option("--grid", grid, "comparability grid size");
    dec->add_option("--geometric-samples", dec_geom_samples, "per-leaf geometric-inequality samples (0: skip)");

    // verify group
    auto* ver = app.add_subcommand("verify", "identity / inequality verification");
    ver->require_subcommand(1);
    auto* vid = ver->add_subcommand("identity", "nested-integral ladder vs direct Jacobian");
    double box_lo = 0.0, box_hi = 1.0, tol_rel = 1e-6, quad_tol = 1e-9;
    int vid_samples = 50;
    vid->add_option("--curve", curve)->required();
    vid->add_option("--lo", box_lo, "sampling box lower endpoint");
    vid->add_option("--hi", box_hi, "sampling box upper endpoint");
    vid->add_option("--samples", vid_samples);
    vid->add_option("--tol-rel", tol_rel);
    vid->add_option("--quad-tol", quad_tol);

    auto* vva = ver->add_subcommand("vandermonde", "exact factorization of power determinants");
    int d_max = 4, sum_max = 20;
    vva->add_option("--d-max", d_max);
    vva->add_option("--sum-max", sum_max);

    auto* vdb = ver->add_subcommand("derivative-bounds", "minor log-derivative bound on normalized leaves");
    int db_grid = 257;
    vdb->add_option("--curve", curve)->required();
    vdb->add_option("--grid", db_grid);

    auto* vge = ver->add_subcommand("geometric", "Jacobian-product lower bound per decomposition leaf");
    int vge_samples = 100000;
    vge->add_option("--curve", curve)->required();
    vge->add_option("--samples", vge_samples);

    auto* vlb = ver->add_subcommand("lbj", "conditional Jacobian lower bound on tower configurations");
    int lbj_configs = 1000, lbj_K = 0;
    double lbj_golden = 0.0;
    vlb->add_option("--curve", curve)->required();
    vlb->add_option("--configs", lbj_configs);
    vlb->add_option("--K", lbj_K);
    vlb->add_option("--golden", lbj_golden, "recorded golden constant");

    // bands group
    auto* bnd = app.add_subcommand("bands", "band structures");
    bnd->require_subcommand(1);
    std::string points;
    double alpha1 = 0.1, delta0 = 0.25, c0 = 0.125, beta1 = 0.0;
    int band_K = 0, band_dim = 2;
    auto* bb = bnd->add_subcommand("build", "build a band structure");
    bb->add_option("--points", points, "comma-separated points")->required();
    bb->add_option("--alpha1", alpha1);
    bb->add_option("--delta", delta0);
    bb->add_option("--K", band_K);
    bb->add_option("--dim", band_dim);
    bb->add_option("--c0", c0);
    bb->add_option("--beta1", beta1);
    auto* bv = bnd->add_subcommand("verify", "build and check the separation clauses");
    bv->add_option("--points", points)->required();
    bv->add_option("--alpha1", alpha1);
    bv->add_option("--delta", delta0);
    bv->add_option("--K", band_K);
    bv->add_option("--dim", band_dim);
    bv->add_option("--c0", c0);
    bv->add_option("--beta1", beta1);

    // tower group
    auto* twr = app.add_subcommand("tower", "tuple towers");
    twr->require_subcommand(1);
    auto* tb = twr->add_subcommand("build", "greedy tower construction with mass accounting");
    std::string variant = "mlE";
    int tower_K = 0;
    double ball_radius = 6.0, tower_c = 0.125;
    tb->add_option("--curve", curve)->required();
    tb->add_option("--variant", variant, "mlE or mlF");
    tb->add_option("--K", tower_K);
    tb->add_option("--ball", ball_radius);
    tb->add_option("--c", tower_c);

    // operator group
    auto* op = app.add_subcommand("operator", "discretized averaging operator");
    op->require_subcommand(1);
    std::string e_box, f_box, e2_box, f2_box, quad_csv = "1,0,1,1";
    double p_exp = 0, q_exp = 0, dmin = 0.001, dmax = 0.5, t0 = 0.0, eta = 1.0, c_exp = 1.0;
    double mle_golden = 0.0, mlf_golden = 0.0, flat_bound = 8.0;
    int op_K = 0, op_samples = 4000;
    std::string table_path;
    auto* oratio = op->add_subcommand("ratio", "restricted weak-type ratio");
    oratio->add_option("--curve", curve)->required();
    oratio->add_option("--e", e_box, "E box lo1,..:hi1,..")->required();
    oratio->add_option("--f", f_box, "F box lo1,..:hi1,..")->required();
    oratio->add_option("--p", p_exp, "0: endpoint p_d");
    oratio->add_option("--q", q_exp, "0: endpoint q_d");
    oratio->add_option("--K", op_K);
    oratio->add_option("--samples", op_samples);

    auto* osweep = op->add_subcommand("sweep-knapp", "anisotropic-cap sharpness sweep");
    osweep->add_option("--curve", curve)->required();
    osweep->add_option("--dmin", dmin)->required();
    osweep->add_option("--dmax", dmax)->required();
    osweep->add_option("--p", p_exp, "0: endpoint p_d");
    osweep->add_option("--q", q_exp, "0: endpoint q_d");
    osweep->add_option("--K", op_K);
    osweep->add_option("--t0", t0);
    osweep->add_option("--samples", op_samples);
    osweep->add_option("--table", table_path, "CSV table path (stdout when omitted)");
    osweep->add_option("--flat-bound", flat_bound, "endpoint flatness bound");

    auto* omle = op->add_subcommand("check-mle", "two-set lower bound, alpha side");
    omle->add_option("--curve", curve)->required();
    omle->add_option("--e1", e_box)->required();
    omle->add_option("--e2", e2_box)->required();
    omle->add_option("--f", f_box)->required();
    omle->add_option("--K", op_K);
    omle->add_option("--samples", op_samples);
    omle->add_option("--golden", mle_golden);

    auto* omlf = op->add_subcommand("check-mlf", "two-set lower bound, beta side");
    omlf->add_option("--curve", curve)->required();
    omlf->add_option("--e", e_box)->required();
    omlf->add_option("--f1", f_box)->required();
    omlf->add_option("--f2", f2_box)->required();
    omlf->add_option("--eta", eta);
    omlf->add_option("--quad", quad_csv, "r1,r2,s1,s2");
    omlf->add_option("--c-exp", c_exp, "eta exponent");
    omlf->add_option("--K", op_K);
    omlf->add_option("--samples", op_samples);
    omlf->add_option("--golden", mlf_golden);

    // corpus group
    auto* cor = app.add_subcommand("corpus", "built-in curve corpus");
    cor->require_subcommand(1);
    cor->add_subcommand("list", "enumerate the corpus");

    // report group
    auto* repg = app.add_subcommand("report", "report utilities");
    repg->require_subcommand(1);
    auto* remit = repg->add_subcommand("emit-plot", "project a sweep to a CSV table");
    std::string report_path, sweep_name;
    remit->add_option("--report", report_path)->required();
    remit->add_option("--sweep", sweep_name)->required();

    // global options (--seed, --out, ...) are accepted after subcommands too
    auto enable_fallthrough = [](auto&& self, CLI::App* a) -> void {
        for (CLI::App* sub : a->get_subcommands({})) {
            sub->fallthrough(true);
            self(self, sub);
        }
    };
    enable_fallthrough(enable_fallthrough, &app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        set_worker_threads(g.threads);
        if (!g.kernel.empty() && !kernels::select(g.kernel)) throw ConfigError("unknown kernel: " + g.kernel);

        if (*dec) return run_decompose(g, curve, tol, grid, dec_geom_samples);
        if (*vid) return run_verify_identity(g, curve, box_lo, box_hi, vid_samples, tol_rel, quad_tol);
        if (*vva) return run_verify_vandermonde(g, d_max, sum_max);
        if (*vdb) return run_verify_derivative_bounds(g, curve, db_grid);
        if (*vge) return run_verify_geometric(g, curve, vge_samples);
        if (*vlb) return run_verify_lbj(g, curve, lbj_configs, lbj_K, lbj_golden);
        if (*bb) return run_bands(g, points, alpha1, delta0, band_K, band_dim, c0, beta1, false);
        if (*bv) return run_bands(g, points, alpha1, delta0, band_K, band_dim, c0, beta1, true);
        if (*tb) return run_tower(g, curve, variant, tower_K, ball_radius, tower_c);
        if (*oratio) return run_operator_ratio(g, curve, e_box, f_box, p_exp, q_exp, op_K, op_samples);
        if (*osweep)
            return run_operator_sweep(g, curve, dmin, dmax, p_exp, q_exp, op_K, t0, op_samples, table_path,
                                      flat_bound);
        if (*omle) return run_operator_mle(g, curve, e_box, e2_box, f_box, op_K, op_samples, mle_golden);
        if (*omlf)
            return run_operator_mlf(g, curve, e_box, f_box, f2_box, eta, quad_csv, c_exp, op_K, op_samples,
                                    mlf_golden);
        if (*remit) return run_emit_plot(g, report_path, sweep_name);
        if (*cor) {
            std::cout << "corpus version " << kCorpusVersion << "\n";
            for (const auto& entry : corpus_list()) std::cout << entry.name << ": " << entry.description << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
