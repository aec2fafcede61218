#include "arclab/ladder.hpp"

#include <algorithm>
#include <cmath>

#include "arclab/quadrature.hpp"
#include "arclab/rng.hpp"

namespace arclab {

JLadder::JLadder(const PolyCurve& curve, Interval piece, double base_rel_tol)
    : d_(curve.dim()), piece_(piece), base_rel_tol_(base_rel_tol) {
    minors_.resize(static_cast<size_t>(d_) + 1);
    minors_[0] = DPoly(std::vector<double>{1.0});
    for (int j = 1; j <= d_; ++j) minors_[static_cast<size_t>(j)] = to_double(curve.minor_ladder(j));
}

double JLadder::prefactor(int k, double u) const {
    auto lv = [&](int j) { return j <= 0 ? 1.0 : minors_[static_cast<size_t>(j)](u); };
    double den = lv(d_ - k);
    return lv(d_ - k - 1) * lv(d_ - k + 1) / (den * den);
}

double JLadder::eval(int k, std::span<const double> t) const {
    if (k < 1 || k > d_) throw std::out_of_range("JLadder::eval: level out of range");
    if (static_cast<int>(t.size()) != k) throw std::invalid_argument("JLadder::eval: tuple size mismatch");
    if (k == 1) return prefactor(1, t[0]);
    double pref = 1.0;
    for (double u : t) pref *= prefactor(k, u);
    return pref * nested_integral(k, t, 0);
}

/// the (k-1)-fold iterated integral of J_{k-1} over s_i in (t_i, t_{i+1})
double JLadder::nested_integral(int k, std::span<const double> t, int depth) const {
    std::vector<double> s(static_cast<size_t>(k) - 1);
    // recursion over integration dimension
    auto body = [&](auto&& self, int di, int dep) -> double {
        double rel = base_rel_tol_ / std::pow(4.0, dep);
        auto inner = [&](double x) -> double {
            s[static_cast<size_t>(di)] = x;
            if (di + 2 == k) {
                // innermost: evaluate J_{k-1}(s)
                if (k - 1 == 1) return prefactor(1, s[0]);
                double pref = 1.0;
                for (int j = 0; j + 1 < k; ++j) pref *= prefactor(k - 1, s[static_cast<size_t>(j)]);
                return pref * nested_integral(k - 1, std::span<const double>(s.data(), static_cast<size_t>(k) - 1),
                                              dep + 1);
            }
            return self(self, di + 1, dep + 1);
        };
        auto res = integrate_adaptive(inner, t[static_cast<size_t>(di)], t[static_cast<size_t>(di) + 1], rel);
        if (!res.converged)
            throw QuadratureFailure(k, Interval{t[static_cast<size_t>(di)], t[static_cast<size_t>(di) + 1]});
        return res.value;
    };
    return body(body, 0, depth);
}

IdentityCheckResult check_identity_JP_equals_Jd(const PolyCurve& curve, Interval box, int samples,
                                                double quad_rel_tol, uint64_t seed) {
    const int d = curve.dim();
    if (!box.bounded() || box.empty()) throw std::invalid_argument("check_identity: bounded sampling box required");
    // minors must be single-signed on the box: coarse sign sweep
    for (int j = 1; j <= d; ++j) {
        DPoly l = to_double(curve.minor_ladder(j));
        double ref = 0;
        for (int i = 0; i <= 32; ++i) {
            double s = box.lo + (box.hi - box.lo) * (i + 0.5) / 33.0;
            double v = l(s);
            if (v == 0 || (ref != 0 && v * ref < 0))
                throw std::invalid_argument("check_identity: minors must be single-signed on the box");
            if (ref == 0) ref = v;
        }
    }

    JLadder ladder(curve, box, quad_rel_tol);
    IdentityCheckResult out;
    out.tuples = samples;
    std::vector<double> t(static_cast<size_t>(d));
    const double min_gap = 0.02 * box.length();
    for (int i = 0; i < samples; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i));
        for (;;) {
            for (auto& x : t) x = rng.uniform(box.lo, box.hi);
            std::sort(t.begin(), t.end());
            bool ok = true;
            for (int j = 0; j + 1 < d; ++j)
                if (t[static_cast<size_t>(j) + 1] - t[static_cast<size_t>(j)] < min_gap) ok = false;
            if (ok) break;
        }
        double direct = curve.jacobian(t);
        double ladder_value = ladder.eval(d, t);
        double rel = std::abs(ladder_value - direct) / std::max(std::abs(direct), 1e-300);
        out.max_rel_error = std::max(out.max_rel_error, rel);
    }
    return out;
}

double check_L1_derivative_bound(const PolyCurve& curve, Interval normalized_interval, int grid) {
    if (normalized_interval.lo < 0) throw std::invalid_argument("check_L1_derivative_bound: interval must be in (0,inf)");
    DPoly l1 = to_double(curve.minor_ladder(1));
    DPoly dl1 = to_double(curve.minor_ladder(1).derivative());
    if (dl1.is_zero()) return 0.0;
    double lo = std::max(normalized_interval.lo, 1e-12 * normalized_interval.hi);
    double hi = normalized_interval.hi;
    double max_ratio = 0;
    for (int i = 0; i < grid; ++i) {
        double frac = (i + 0.5) / grid;
        double s = lo * std::pow(hi / lo, frac);
        double den = std::abs(l1(s));
        if (den == 0) continue;
        max_ratio = std::max(max_ratio, std::abs(dl1(s)) * s / den);
    }
    return max_ratio;
}

double check_partial_derivative_bound(const PolyCurve& curve, Interval box, const std::vector<int>& subset,
                                      int samples, uint64_t seed) {
    const int d = curve.dim();
    if (box.lo <= 0) throw std::invalid_argument("check_partial_derivative_bound: box must be in (0,inf)");
    for (int j : subset)
        if (j < 0 || j >= d) throw std::out_of_range("check_partial_derivative_bound: index");
    DPoly l1 = to_double(curve.minor_ladder(1));

    auto h_fn = [&](const std::vector<double>& tau) {
        double denom = 1.0;
        for (double u : tau) denom *= l1(u);
        return curve.jacobian(tau) / denom;
    };

    const int m = static_cast<int>(subset.size());
    const double fd_scale = std::cbrt(std::numeric_limits<double>::epsilon());
    double max_ratio = 0;
    std::vector<double> tau(static_cast<size_t>(d)), probe(static_cast<size_t>(d)), step(static_cast<size_t>(m));
    for (int i = 0; i < samples; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i));
        for (;;) {
            for (auto& x : tau) x = rng.uniform(box.lo, box.hi);
            for (int j = 0; j < m; ++j) step[static_cast<size_t>(j)] = fd_scale * std::abs(tau[static_cast<size_t>(subset[static_cast<size_t>(j)])]);
            bool ok = true;
            for (int a = 0; a < d && ok; ++a)
                for (int b = a + 1; b < d; ++b) {
                    double sep = std::abs(tau[static_cast<size_t>(a)] - tau[static_cast<size_t>(b)]);
                    double hmax = 0;
                    for (double h : step) hmax = std::max(hmax, h);
                    if (sep < 8 * hmax) {  // finite differences would straddle the diagonal
                        ok = false;
                        break;
                    }
                }
            if (ok) break;
        }

        // mixed central difference over the subset
        double acc = 0;
        for (int mask = 0; mask < (1 << m); ++mask) {
            probe = tau;
            int sign = 1;
            for (int j = 0; j < m; ++j) {
                bool plus = mask & (1 << j);
                probe[static_cast<size_t>(subset[static_cast<size_t>(j)])] += (plus ? 1.0 : -1.0) * step[static_cast<size_t>(j)];
                if (!plus) sign = -sign;
            }
            acc += sign * h_fn(probe);
        }
        double denom_steps = 1.0;
        for (double h : step) denom_steps *= 2.0 * h;
        double dh = std::abs(acc / denom_steps);

        // ladder-form bound: sum over delta in {0,1}^m and maps i(j) != j
        double h_val = std::abs(h_fn(tau));
        double bound = 0;
        std::vector<int> targets(static_cast<size_t>(m));
        auto enumerate_maps = [&](auto&& self, int pos, double partial) -> void {
            if (pos == m) {
                bound += partial;
                return;
            }
            int j = subset[static_cast<size_t>(pos)];
            for (int other = 0; other < d; ++other) {
                if (other == j) continue;
                double gap = std::abs(tau[static_cast<size_t>(j)] - tau[static_cast<size_t>(other)]);
                // delta_j = 0 term (separation) and delta_j = 1 term (scale)
                self(self, pos + 1, partial / gap);
                self(self, pos + 1, partial / tau[static_cast<size_t>(j)]);
            }
        };
        enumerate_maps(enumerate_maps, 0, h_val);
        if (bound > 0) max_ratio = std::max(max_ratio, dh / bound);
    }
    return max_ratio;
}

}  // namespace arclab
