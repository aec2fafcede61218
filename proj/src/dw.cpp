#include "arclab/dw.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "arclab/kernels.hpp"
#include "arclab/rng.hpp"

namespace arclab {

namespace {

using cplx = std::complex<double>;

double dist_sq(double s, cplx eta) {
    double dx = s - eta.real();
    return dx * dx + eta.imag() * eta.imag();
}

/// sup and inf of |s - eta| over a (possibly unbounded) interval.
std::pair<double, double> abs_range(const Interval& iv, cplx eta) {
    double inf_v, sup_v;
    double br = eta.real();
    double lo_d = std::isfinite(iv.lo) ? std::sqrt(dist_sq(iv.lo, eta)) : Interval::inf;
    double hi_d = std::isfinite(iv.hi) ? std::sqrt(dist_sq(iv.hi, eta)) : Interval::inf;
    if (iv.contains(br)) inf_v = std::abs(eta.imag());
    else inf_v = std::min(lo_d, hi_d);
    sup_v = std::max(lo_d, hi_d);
    return {inf_v, sup_v};
}

/// sup and inf of |s - eta| / |s - b| over an interval not containing b.
/// Endpoints equal to b are closure points of the open piece; the ratio there
/// is the one-sided limit (1 when eta is exactly the real center, infinite
/// otherwise).
std::pair<double, double> ratio_range(const Interval& iv, cplx eta, double b) {
    auto g = [&](double s) -> double {
        double den = std::abs(s - b);
        if (den == 0) return (eta.real() == b && eta.imag() == 0) ? 1.0 : Interval::inf;
        return std::sqrt(dist_sq(s, eta)) / den;
    };
    double lo_v = std::isfinite(iv.lo) ? g(iv.lo) : 1.0;
    double hi_v = std::isfinite(iv.hi) ? g(iv.hi) : 1.0;
    double inf_v = std::min(lo_v, hi_v), sup_v = std::max(lo_v, hi_v);
    double br = eta.real(), y = eta.imag();
    if (br != b) {
        // single interior critical point of g^2
        double s_star = (br * br + y * y - br * b) / (br - b);
        if (iv.contains(s_star)) {
            double v = g(s_star);
            inf_v = std::min(inf_v, v);
            sup_v = std::max(sup_v, v);
        }
    }
    return {inf_v, sup_v};
}

/// Exact nearest-center test: |s - b| <= |s - eta_k| for all k on the whole
/// interval. The difference of squares is linear in s, so endpoint checks
/// suffice.
bool owner_ok(const Interval& iv, double b, const RootSet& etas) {
    for (const auto& r : etas.roots) {
        double bk = r.value.real(), yk = r.value.imag();
        double slope = 2.0 * (b - bk);
        double cnst = bk * bk + yk * yk - b * b;
        auto h = [&](double s) { return slope * s + cnst; };
        double scale = std::max({1.0, b * b, bk * bk + yk * yk});
        if (std::isfinite(iv.lo)) {
            if (h(iv.lo) < -1e-12 * scale) return false;
        } else if (slope > 0) {
            return false;
        }
        if (std::isfinite(iv.hi)) {
            if (h(iv.hi) < -1e-12 * scale) return false;
        } else if (slope < 0) {
            return false;
        }
    }
    return true;
}

struct ComparabilityFit {
    bool ok = false;
    std::vector<D1Piece::RootComparability> per_root;
    double worst_ratio = 1.0;
};

ComparabilityFit try_comparability(const Interval& iv, double b, const RootSet& etas, const D1Options& opts) {
    ComparabilityFit fit;
    fit.per_root.reserve(etas.roots.size());
    for (const auto& r : etas.roots) {
        auto [i0, s0] = abs_range(iv, r.value);
        auto [i1, s1] = ratio_range(iv, r.value, b);
        double q0 = s0 / std::max(i0, 1e-300);
        double q1 = s1 / std::max(i1, 1e-300);
        D1Piece::RootComparability rc;
        double q;
        if (q0 <= q1) {
            rc.delta = 0;
            rc.a = std::sqrt(i0 * s0);
            q = q0;
        } else {
            rc.delta = 1;
            rc.a = std::sqrt(i1 * s1);
            q = q1;
        }
        if (!(q <= opts.max_ratio_sq)) return fit;  // not ok
        fit.worst_ratio = std::max(fit.worst_ratio, std::sqrt(q));
        fit.per_root.push_back(rc);
    }
    fit.ok = true;
    return fit;
}

}  // namespace

std::vector<D1Piece> d1_decompose(Interval j, const RootSet& etas, const D1Options& opts) {
    if (j.empty()) return {};
    if (etas.roots.empty()) {
        D1Piece whole;
        whole.interval = j;
        whole.b_defined = false;
        return {whole};
    }

    // centers: distinct real parts
    std::vector<double> centers;
    for (const auto& r : etas.roots) centers.push_back(r.value.real());
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

    double feature = 1.0;
    for (const auto& r : etas.roots) feature = std::max(feature, std::abs(r.value));
    const double far_radius = 4.0 * feature + 4.0;

    // atoms: j split at every center and at every owner-region boundary
    // |s - b_i| = |s - eta_k| (linear in s), so owner validity is constant
    // per atom and every atom has at least one valid owner (the center of its
    // nearest root).
    std::vector<double> cutpts = centers;
    for (double bi : centers) {
        for (const auto& r : etas.roots) {
            double bk = r.value.real(), yk = r.value.imag();
            if (bi == bk) continue;
            cutpts.push_back((bk * bk + yk * yk - bi * bi) / (2.0 * (bk - bi)));
        }
    }
    std::sort(cutpts.begin(), cutpts.end());
    cutpts.erase(std::unique(cutpts.begin(), cutpts.end()), cutpts.end());
    std::vector<double> cuts{j.lo};
    for (double c : cutpts)
        if (j.contains(c)) cuts.push_back(c);
    cuts.push_back(j.hi);

    std::vector<D1Piece> out;
    // candidate owners tried nearest-midpoint-first
    auto process = [&](auto&& self, Interval iv, int depth) -> void {
        if (iv.empty()) return;
        double mid;
        if (iv.bounded()) mid = iv.midpoint();
        else if (std::isfinite(iv.lo)) mid = iv.lo + 1.0;
        else if (std::isfinite(iv.hi)) mid = iv.hi - 1.0;
        else mid = 0.0;

        std::vector<double> order = centers;
        std::sort(order.begin(), order.end(),
                  [&](double a, double c) { return std::abs(mid - a) < std::abs(mid - c); });
        for (double b : order) {
            if (iv.contains(b)) continue;
            if (!owner_ok(iv, b, etas)) continue;
            auto fit = try_comparability(iv, b, etas, opts);
            if (fit.ok) {
                D1Piece piece;
                piece.interval = iv;
                piece.b = b;
                piece.per_root = std::move(fit.per_root);
                piece.worst_ratio = fit.worst_ratio;
                out.push_back(std::move(piece));
                return;
            }
        }
        if (depth >= opts.max_depth) throw std::runtime_error("d1_decompose: depth cap exceeded");
        double split;
        if (!std::isfinite(iv.lo)) split = std::min(-far_radius, iv.hi - 1.0);
        else if (!std::isfinite(iv.hi)) split = std::max(far_radius, iv.lo + 1.0);
        else split = iv.midpoint();
        self(self, Interval{iv.lo, split}, depth + 1);
        self(self, Interval{split, iv.hi}, depth + 1);
    };

    for (size_t i = 0; i + 1 < cuts.size(); ++i) process(process, Interval{cuts[i], cuts[i + 1]}, 0);

    std::sort(out.begin(), out.end(), [](const D1Piece& a, const D1Piece& b) { return a.interval.lo < b.interval.lo; });
    return out;
}

std::vector<GapDyadicPiece> d2_decompose(Interval j, double b, const RootSet& betas) {
    for (size_t k = 1; k < betas.roots.size(); ++k) {
        double prev = std::abs(b + betas.roots[k - 1].value);
        double cur = std::abs(b + betas.roots[k].value);
        if (cur < prev - 1e-12 * std::max(1.0, prev))
            throw std::invalid_argument("d2_decompose: betas must be sorted by |b + beta_k|");
    }

    // protected radii zones [R/2, 2R] in u = |s - b|, merged where overlapping
    std::vector<double> radii;
    for (const auto& r : betas.roots) {
        double rad = std::abs(r.value);
        if (rad > 0) radii.push_back(rad);
    }
    std::sort(radii.begin(), radii.end());
    std::vector<std::pair<double, double>> zones;
    for (double r : radii) {
        double a = 0.5 * r, bb = 2.0 * r;
        if (!zones.empty() && a <= zones.back().second) zones.back().second = std::max(zones.back().second, bb);
        else zones.emplace_back(a, bb);
    }

    std::vector<GapDyadicPiece> out;

    auto gap_eps = [&](double u_lo, double u_hi) {
        std::vector<int> eps(betas.roots.size());
        for (size_t k = 0; k < betas.roots.size(); ++k) {
            double rad = std::abs(betas.roots[k].value);
            eps[k] = (rad == 0 || u_lo >= 2.0 * rad - 1e-12 * rad) ? 1 : 0;
            (void)u_hi;
        }
        return eps;
    };

    // one side of b: u in (u_lo, u_hi), s = b + sign*u
    auto emit_side = [&](double u_lo, double u_hi, int sign) {
        if (!(u_lo < u_hi)) return;
        auto to_interval = [&](double a, double c) {
            return sign > 0 ? Interval{b + a, b + c} : Interval{b - c, b - a};
        };
        auto push_gap = [&](double a, double c) {
            a = std::max(a, u_lo);
            c = std::min(c, u_hi);
            if (!(a < c)) return;
            GapDyadicPiece g;
            g.interval = to_interval(a, c);
            g.kind = GapDyadicPiece::Kind::Gap;
            g.eps = gap_eps(a, c);
            out.push_back(std::move(g));
        };
        auto push_dyadic = [&](double a, double c) {
            a = std::max(a, u_lo);
            c = std::min(c, u_hi);
            if (!(a < c)) return;
            // factor-2 shells [D, 2D]
            double d0 = a;
            while (d0 < c) {
                double d1 = std::min(2.0 * d0, c);
                GapDyadicPiece p;
                p.interval = to_interval(d0, d1);
                p.kind = GapDyadicPiece::Kind::Dyadic;
                p.level = d0;
                out.push_back(std::move(p));
                d0 = d1;
            }
        };
        double cursor = u_lo;
        for (auto [za, zb] : zones) {
            if (zb <= u_lo || za >= u_hi) continue;
            push_gap(cursor, za);
            push_dyadic(za, zb);
            cursor = std::max(cursor, zb);
        }
        push_gap(cursor, u_hi);
    };

    // right side of b
    double right_lo = std::max(j.lo, b);
    if (j.hi > b) emit_side(right_lo - b, j.hi - b, +1);
    // left side of b
    double left_hi = std::min(j.hi, b);
    if (j.lo < b) emit_side(b - left_hi, b - j.lo, -1);

    std::sort(out.begin(), out.end(),
              [](const GapDyadicPiece& a, const GapDyadicPiece& b2) { return a.interval.lo < b2.interval.lo; });
    return out;
}

std::vector<Interval> initial_single_signed_split(const PolyCurve& curve, double root_tol) {
    std::vector<double> cuts;
    for (int jdx = 1; jdx <= curve.dim(); ++jdx) {
        const RatPoly& l = curve.minor_ladder(jdx);
        if (l.degree() <= 0) continue;
        for (double r : find_roots(l, root_tol).real_roots()) cuts.push_back(r);
    }
    std::sort(cuts.begin(), cuts.end());
    // merge near-coincident cuts
    std::vector<double> merged;
    for (double c : cuts) {
        if (merged.empty() || c - merged.back() > 8 * root_tol * std::max(1.0, std::abs(c))) merged.push_back(c);
    }
    std::vector<Interval> out;
    double prev = -Interval::inf;
    for (double c : merged) {
        out.push_back({prev, c});
        prev = c;
    }
    out.push_back({prev, Interval::inf});
    return out;
}

namespace {

struct FrontierNode {
    Interval interval;
    double b = 0;
    bool b_defined = true;
    std::vector<LineageEntry> lineage;
    bool flagged = false;
    std::string flag;

    std::vector<double> ancestors() const {
        std::vector<double> bs;
        for (const auto& e : lineage)
            if (e.tag != LineageEntry::Tag::FinalSplit) bs.push_back(e.b);
        std::sort(bs.begin(), bs.end());
        bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
        return bs;
    }
};

/// Geometric grid in u = |s - b| over the piece, clipped to the sampling
/// truncation radii. Returns (s, u) pairs.
std::vector<std::pair<double, double>> comparability_grid(const DecompInterval& piece, int grid) {
    const Interval& iv = piece.interval;
    double b = piece.b;
    double u_lo, u_hi;
    int sign;
    if (iv.lo >= b) {
        sign = +1;
        u_lo = iv.lo - b;
        u_hi = (std::isfinite(iv.hi) ? iv.hi - b : kTruncationRadius);
    } else {
        sign = -1;
        u_lo = b - iv.hi;
        u_hi = (std::isfinite(iv.lo) ? b - iv.lo : kTruncationRadius);
    }
    u_hi = std::min(u_hi, kTruncationRadius);
    if (u_hi > 2 * kTruncationFloor) u_lo = std::max(u_lo, kTruncationFloor);
    else if (u_lo <= 0) u_lo = 0.5 * u_hi;  // degenerate sliver right at b
    // inset so samples stay inside the open interval
    u_lo *= 1.0 + 1e-12;
    u_hi *= 1.0 - 1e-12;
    std::vector<std::pair<double, double>> out;
    if (!(u_lo < u_hi)) {
        double u = 0.5 * (u_lo + u_hi);
        out.emplace_back(b + sign * u, u);
        return out;
    }
    double log_lo = std::log2(u_lo), log_hi = std::log2(u_hi);
    for (int i = 0; i < grid; ++i) {
        double t = grid == 1 ? 0.5 : static_cast<double>(i) / (grid - 1);
        double u = std::exp2(log_lo + t * (log_hi - log_lo));
        out.emplace_back(b + sign * u, u);
    }
    return out;
}

/// Fit |L(s)| ~ A u^K on the grid: integer K minimizing the spread of
/// log|L| - K log u, A the geometric midpoint. Work in log2 space to dodge
/// overflow at the truncation radii.
void fit_piece_constants(DecompInterval& piece, const DPoly& torsion_abs, int grid, int k_max) {
    auto pts = comparability_grid(piece, grid);
    std::vector<double> logf(pts.size()), logu(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        double v = std::abs(torsion_abs(pts[i].first));
        logf[i] = std::log2(std::max(v, 1e-300));
        logu[i] = std::log2(pts[i].second);
    }
    int best_k = 0;
    double best_spread = Interval::inf, best_mid = 0;
    for (int k = 0; k <= k_max; ++k) {
        double mn = Interval::inf, mx = -Interval::inf;
        for (size_t i = 0; i < pts.size(); ++i) {
            double r = logf[i] - k * logu[i];
            mn = std::min(mn, r);
            mx = std::max(mx, r);
        }
        if (mx - mn < best_spread) {
            best_spread = mx - mn;
            best_k = k;
            best_mid = 0.5 * (mn + mx);
        }
    }
    piece.K = best_k;
    piece.A = std::exp2(best_mid);
    piece.c_lo = std::exp2(-0.5 * best_spread);
    piece.c_hi = std::exp2(0.5 * best_spread);
}

}  // namespace

DwResult dw_decompose(const PolyCurve& curve, const DwOptions& opts) {
    if (!curve.nondegenerate()) throw std::domain_error("dw_decompose: torsion identically zero");
    const int d = curve.dim();

    DwResult result;

    // Clear identically-zero intermediate minors with a seeded unimodular
    // component mix; the torsion only changes by the (unit) determinant.
    PolyCurve working = curve;
    for (int attempt = 0; attempt < 8; ++attempt) {
        bool all_nonzero = true;
        for (int jdx = 1; jdx <= d; ++jdx)
            if (working.minor_ladder(jdx).is_zero()) all_nonzero = false;
        if (all_nonzero) break;
        if (attempt == 7) throw std::domain_error("dw_decompose: could not clear identically-zero minors");
        CounterRng rng(0x5eedu + static_cast<uint64_t>(attempt), 77);
        std::vector<Rat> m(static_cast<size_t>(d) * d, Rat(0));
        for (int i = 0; i < d; ++i) m[static_cast<size_t>(i) * d + i] = Rat(1);
        for (int i = 0; i < d; ++i)
            for (int jdx = 0; jdx < i; ++jdx)
                m[static_cast<size_t>(i) * d + jdx] = Rat(static_cast<long>(rng.next_below(5)) - 2);
        working = curve.apply_matrix(m);
        result.transformed = true;
        result.mix_matrix = m;
    }

    result.initial_pieces = initial_single_signed_split(working, opts.root_tol);

    // roots of each minor, shared across steps
    std::vector<RootSet> minor_roots(static_cast<size_t>(d) + 1);
    for (int jdx = 1; jdx <= d; ++jdx) {
        const RatPoly& l = working.minor_ladder(jdx);
        if (l.degree() >= 1) minor_roots[static_cast<size_t>(jdx)] = find_roots(l, opts.root_tol);
        else minor_roots[static_cast<size_t>(jdx)].tolerance = opts.root_tol;
    }

    // Step 0: D1 against the torsion zeros.
    std::vector<FrontierNode> frontier;
    for (const Interval& piece0 : result.initial_pieces) {
        const RootSet& ld = minor_roots[static_cast<size_t>(d)];
        if (ld.roots.empty()) {
            FrontierNode node;
            node.interval = piece0;
            node.b = 0.0;
            node.b_defined = false;  // nominal center, recorded in the lineage
            node.lineage.push_back({0, LineageEntry::Tag::Step0, 0.0});
            frontier.push_back(std::move(node));
            continue;
        }
        for (const D1Piece& p : d1_decompose(piece0, ld)) {
            FrontierNode node;
            node.interval = p.interval;
            node.b = p.b;
            node.b_defined = p.b_defined;
            node.lineage.push_back({0, LineageEntry::Tag::Step0, p.b});
            if (p.worst_ratio > 2.0) {
                node.flagged = true;
                node.flag = "d1-comparability-ratio";
            }
            frontier.push_back(std::move(node));
        }
    }

    // Steps 1..d-1: D2 against the shifted minor zeros; dyadic pieces re-run
    // D1 against the minor zeros and all ancestor centers.
    for (int n = 0; n <= d - 2; ++n) {
        const RootSet& lroots = minor_roots[static_cast<size_t>(n) + 1];
        std::vector<FrontierNode> next;
        for (FrontierNode& node : frontier) {
            RootSet betas;
            betas.tolerance = lroots.tolerance;
            for (const auto& r : lroots.roots) betas.roots.push_back({r.value - node.b, r.multiplicity});
            std::sort(betas.roots.begin(), betas.roots.end(), [&](const RootRecord& a, const RootRecord& bb) {
                return std::abs(node.b + a.value) < std::abs(node.b + bb.value);
            });
            for (const GapDyadicPiece& piece : d2_decompose(node.interval, node.b, betas)) {
                if (piece.kind == GapDyadicPiece::Kind::Gap) {
                    FrontierNode child = node;
                    child.interval = piece.interval;
                    child.lineage.push_back({n + 1, LineageEntry::Tag::Gap, node.b});
                    next.push_back(std::move(child));
                } else {
                    RootSet etas = lroots;
                    for (double ab : node.ancestors()) etas.roots.push_back({cplx(ab, 0.0), 1});
                    for (const D1Piece& p : d1_decompose(piece.interval, etas)) {
                        FrontierNode child = node;
                        child.interval = p.interval;
                        child.b = p.b;
                        child.b_defined = true;
                        child.lineage.push_back({n + 1, LineageEntry::Tag::Dyadic, p.b});
                        if (p.worst_ratio > 2.0) {
                            child.flagged = true;
                            child.flag = "d1-comparability-ratio";
                        }
                        next.push_back(std::move(child));
                    }
                }
            }
        }
        frontier = std::move(next);
    }

    // Final step: no leaf may contain an ancestor center.
    std::vector<FrontierNode> finals;
    for (FrontierNode& node : frontier) {
        std::vector<double> cuts;
        for (double ab : node.ancestors())
            if (node.interval.contains(ab)) cuts.push_back(ab);
        if (cuts.empty()) {
            finals.push_back(std::move(node));
            continue;
        }
        std::sort(cuts.begin(), cuts.end());
        double prev = node.interval.lo;
        for (size_t i = 0; i <= cuts.size(); ++i) {
            double stop = i < cuts.size() ? cuts[i] : node.interval.hi;
            FrontierNode child = node;
            child.interval = {prev, stop};
            child.lineage.push_back({d, LineageEntry::Tag::FinalSplit, node.b});
            finals.push_back(std::move(child));
            prev = stop;
        }
    }

    // Leaf records with measured comparability constants.
    DPoly tors = to_double(working.torsion());
    int k_cap = std::max(working.torsion().degree(), 0);
    for (FrontierNode& node : finals) {
        DecompInterval leaf;
        leaf.interval = node.interval;
        leaf.b = node.b;
        leaf.b_defined = node.b_defined;
        leaf.lineage = std::move(node.lineage);
        leaf.flagged = node.flagged;
        leaf.flag = node.flag;
        fit_piece_constants(leaf, tors, opts.grid, k_cap);
        if (leaf.K > curve.degree() && !leaf.flagged) {
            leaf.flagged = true;
            leaf.flag = "exponent-exceeds-curve-degree";
        }
        result.leaves.push_back(std::move(leaf));
    }
    std::sort(result.leaves.begin(), result.leaves.end(),
              [](const DecompInterval& a, const DecompInterval& b) { return a.interval.lo < b.interval.lo; });

    // a-priori count bound from (N, d): each of the d decomposition rounds can
    // multiply the frontier by at most the per-call D1/D2 piece cap.
    long n_deg = std::max(curve.degree(), 1);
    long per_call = (n_deg + 2) * (2L * D1Options{}.max_depth + 4);
    long bound = static_cast<long>(result.initial_pieces.size());
    for (int i = 0; i < d; ++i) {
        if (bound > (1L << 40) / per_call) { bound = (1L << 40); break; }
        bound *= per_call;
    }
    result.piece_bound = bound;
    return result;
}

std::vector<std::pair<double, double>> comparability_profile(const DecompInterval& piece,
                                                             const PolyCurve& curve, int grid) {
    if (grid < 2) throw std::invalid_argument("comparability profile: grid >= 2 required");
    DPoly tors = to_double(curve.torsion());
    auto pts = comparability_grid(piece, grid);
    std::vector<std::pair<double, double>> out;
    out.reserve(pts.size());
    // log2 space: u^K overflows double range near the truncation radius
    for (auto [s, u] : pts) {
        double r = std::log2(std::max(std::abs(tors(s)), 1e-300)) - piece.K * std::log2(u) - std::log2(piece.A);
        out.emplace_back(s, std::exp2(r));
    }
    return out;
}

std::pair<double, double> verify_torsion_comparability(const DecompInterval& piece, const PolyCurve& curve,
                                                       int grid) {
    double lo = Interval::inf, hi = 0;
    for (auto [s, ratio] : comparability_profile(piece, curve, grid)) {
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    return {lo, hi};
}

namespace {

Interval truncated_sampling_box(const DecompInterval& piece) {
    Interval iv = piece.interval;
    double b = piece.b;
    iv.lo = std::max(iv.lo, b - kTruncationRadius);
    iv.hi = std::min(iv.hi, b + kTruncationRadius);
    return iv;
}

}  // namespace

double verify_geometric_inequality(const DecompInterval& piece, const PolyCurve& curve, int samples,
                                   uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("verify_geometric_inequality: samples >= 1 required");
    const int d = curve.dim();
    Interval box = truncated_sampling_box(piece);
    DPoly tors = to_double(curve.torsion());
    const auto& tc = tors.coeffs();

    std::vector<double> pts(static_cast<size_t>(samples) * d);
    for (int i = 0; i < samples; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i));
        for (;;) {
            for (int k = 0; k < d; ++k) pts[static_cast<size_t>(i) * d + k] = rng.uniform(box.lo, box.hi);
            bool distinct = true;
            for (int k = 0; k < d && distinct; ++k)
                for (int l = k + 1; l < d; ++l) {
                    double a = pts[static_cast<size_t>(i) * d + k], bb = pts[static_cast<size_t>(i) * d + l];
                    if (std::abs(a - bb) <= 1e-13 * std::max({1.0, std::abs(a), std::abs(bb)})) {
                        distinct = false;
                        break;
                    }
                }
            if (distinct) break;
        }
    }

    std::vector<double> lvals(pts.size());
    kernels::poly_eval_batch(tc.data(), tc.size(), pts.data(), lvals.data(), pts.size());

    double min_ratio = Interval::inf;
    std::vector<double> t(static_cast<size_t>(d));
    for (int i = 0; i < samples; ++i) {
        for (int k = 0; k < d; ++k) t[static_cast<size_t>(k)] = pts[static_cast<size_t>(i) * d + k];
        double jac = std::abs(curve.jacobian(t));
        double den = 1.0;
        for (int k = 0; k < d; ++k) den *= std::pow(std::abs(lvals[static_cast<size_t>(i) * d + k]), 1.0 / d);
        for (int k = 0; k < d; ++k)
            for (int l = k + 1; l < d; ++l) den *= std::abs(t[static_cast<size_t>(l)] - t[static_cast<size_t>(k)]);
        if (den > 0) min_ratio = std::min(min_ratio, jac / den);
    }
    return min_ratio;
}

CollisionProbeResult preimage_collision_probe(const DecompInterval& piece, const PolyCurve& curve,
                                              const std::vector<int>& eps, int samples, double quantum,
                                              uint64_t seed) {
    const int d = curve.dim();
    if (static_cast<int>(eps.size()) != d) throw std::invalid_argument("preimage_collision_probe: eps size");
    Interval box = truncated_sampling_box(piece);

    // box key -> canonical (sorted) tuples seen there
    std::map<std::vector<long long>, std::vector<std::vector<double>>> cells;
    const double merge_radius = std::sqrt(quantum);

    CollisionProbeResult result;
    std::vector<double> t(static_cast<size_t>(d));
    for (int i = 0; i < samples; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i));
        for (int k = 0; k < d; ++k) t[static_cast<size_t>(k)] = rng.uniform(box.lo, box.hi);
        std::sort(t.begin(), t.end());
        std::vector<long long> key(static_cast<size_t>(d));
        for (int k = 0; k < d; ++k) {
            double xk = 0;
            for (int jdx = 0; jdx < d; ++jdx)
                xk += eps[static_cast<size_t>(jdx)] * curve.dcomponent_deriv(k, 0)(t[static_cast<size_t>(jdx)]);
            key[static_cast<size_t>(k)] = static_cast<long long>(std::floor(xk / quantum));
        }
        auto& bucket = cells[key];
        bool duplicate = false;
        for (const auto& other : bucket) {
            double dist = 0;
            for (int k = 0; k < d; ++k) dist = std::max(dist, std::abs(other[static_cast<size_t>(k)] - t[static_cast<size_t>(k)]));
            if (dist <= merge_radius) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) bucket.push_back(t);
        if (static_cast<int>(bucket.size()) > result.max_multiplicity) {
            result.max_multiplicity = static_cast<int>(bucket.size());
            result.witnesses = bucket;
        }
    }
    long dfact = 1;
    for (int k = 2; k <= d; ++k) dfact *= k;
    result.warn = result.max_multiplicity > dfact;
    return result;
}

NormalizedPiece normalize_piece(const DecompInterval& piece, const PolyCurve& curve) {
    const int d = curve.dim();
    Interval iv = piece.interval;
    bool truncated = false;
    if (!std::isfinite(iv.lo)) { iv.lo = piece.b - kTruncationRadius; truncated = true; }
    if (!std::isfinite(iv.hi)) { iv.hi = piece.b + kTruncationRadius; truncated = true; }

    bool left_of_b = iv.hi <= piece.b;
    Rat b_exact = rat_from_double(piece.b);
    double u_lo = left_of_b ? piece.b - iv.hi : iv.lo - piece.b;
    double u_hi = left_of_b ? piece.b - iv.lo : iv.hi - piece.b;
    u_lo = std::max(u_lo, 0.0);
    Rat sigma = rat_from_double(u_hi - u_lo);
    if (sigma <= 0) throw std::invalid_argument("normalize_piece: empty interval");

    // s = b +- u, u = sigma * w: the composed map is s(w) = b +- sigma*w.
    Rat scale = left_of_b ? Rat(-sigma) : sigma;
    PolyCurve out = curve.reparametrize_affine(scale, b_exact);

    double dd = static_cast<double>(d);
    double exponent_sum = dd * (dd + 1.0) / 2.0 + piece.K;
    double log_lambda = -(std::log2(piece.A) + exponent_sum * std::log2(to_double(sigma))) / dd;
    double lambda = std::exp2(log_lambda);

    NormalizedPiece result{std::move(out), Interval{u_lo / to_double(sigma), u_lo / to_double(sigma) + 1.0},
                           piece.K, lambda, truncated};
    return result;
}

}  // namespace arclab
