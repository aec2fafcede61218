#include "arclab/bands.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace arclab {

int staircase_exponent(int d) {
    int r = 0;
    for (int j = d % 2 == 0 ? 1 : 2; j <= d - 1; j += 2) r += j;
    return r;
}

ExponentCheck check_band_count_bound(int d, int k, int m_quasi_free) {
    ExponentCheck out;
    if (k < d || k >= 2 * d) {
        out.reason = "k must satisfy d <= k < 2d";
        return out;
    }
    int free_count = d - m_quasi_free;
    if (free_count < k / 2 + 1) {
        out.reason = "fewer free indices than the even indices plus the first";
        return out;
    }
    if (m_quasi_free + k / 2 > d - 1) {
        out.reason = "M + floor(k/2) exceeds d-1";
        return out;
    }
    out.ok = true;
    return out;
}

ExponentCheck validate_mlf_quadruple(int d, double r1, double r2, double s1, double s2) {
    ExponentCheck out;
    double half = d * (d - 1.0) / 2.0;
    if (std::abs(r1 + r2 - half) > 1e-12) {
        out.reason = "r1 + r2 != d(d-1)/2";
        return out;
    }
    if (std::abs(s1 + s2 - d) > 1e-12) {
        out.reason = "s1 + s2 != d";
        return out;
    }
    double qd = (d + 1.0) / 2.0 * d / (d - 1.0);
    double qd_prime_inv = 1.0 - 1.0 / qd;
    double slack = s2 * qd_prime_inv - r2 / qd - 1.0;
    if (!(slack > 0)) {
        out.reason = "s2/q_d' - r2/q_d - 1 must be positive";
        return out;
    }
    out.ok = true;
    return out;
}

ExponentRecord exponent_bookkeeping(int d, int k, int m_quasi_free) {
    ExponentRecord rec;
    rec.d = d;
    rec.r_d = staircase_exponent(d);
    rec.r_d_at_least_d_minus_1 = rec.r_d >= d - 1;
    rec.k = k;
    rec.m_quasi_free = m_quasi_free;
    rec.band_count_ok = check_band_count_bound(d, k, m_quasi_free).ok;
    return rec;
}

namespace {

/// single partition pass at scale delta: split sorted points where the
/// adjacent metric gap exceeds delta * alpha1
BandStructure partition_at_scale(std::span<const double> t, double alpha1, const SeparationMetric& metric,
                                 double delta, double delta_prime) {
    const int k = static_cast<int>(t.size());
    std::vector<int> order(static_cast<size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return t[static_cast<size_t>(a)] < t[static_cast<size_t>(b)]; });

    BandStructure bs;
    bs.delta = delta;
    bs.delta_prime = delta_prime;
    bs.alpha1 = alpha1;
    bs.metric = metric;
    bs.band_of.assign(static_cast<size_t>(k), -1);
    bs.classification.assign(static_cast<size_t>(k), IndexClass::Free);
    bs.bind.assign(static_cast<size_t>(k), -1);

    std::vector<int> current{order[0]};
    auto flush = [&] {
        bs.bands.push_back(current);
        current.clear();
    };
    for (int i = 1; i < k; ++i) {
        double a = t[static_cast<size_t>(order[static_cast<size_t>(i) - 1])];
        double b = t[static_cast<size_t>(order[static_cast<size_t>(i)])];
        if (metric(a, b) > delta * alpha1) flush();
        current.push_back(order[static_cast<size_t>(i)]);
    }
    flush();

    for (size_t band_id = 0; band_id < bs.bands.size(); ++band_id) {
        auto& band = bs.bands[band_id];
        std::sort(band.begin(), band.end());  // classification is by original index
        int free_index = band.front();
        for (int idx : band) bs.band_of[static_cast<size_t>(idx)] = static_cast<int>(band_id);
        bs.classification[static_cast<size_t>(free_index)] = IndexClass::Free;
        if (band.size() == 2) {
            bs.classification[static_cast<size_t>(band[1])] = IndexClass::QuasiFree;
            bs.bind[static_cast<size_t>(band[1])] = free_index;
        } else {
            for (size_t pos = 1; pos < band.size(); ++pos) {
                bs.classification[static_cast<size_t>(band[pos])] = IndexClass::Bound;
                bs.bind[static_cast<size_t>(band[pos])] = free_index;
            }
        }
    }
    return bs;
}

bool structure_valid(const BandStructure& bs, std::span<const double> t, double c0, double beta1) {
    for (const auto& band : bs.bands) {
        if (band.size() == 2) {
            if (beta1 > 0) {
                double m = bs.metric(t[static_cast<size_t>(band[0])], t[static_cast<size_t>(band[1])]);
                if (m < c0 * beta1) return false;
            }
        } else if (band.size() >= 3) {
            int free_index = band.front();
            for (size_t pos = 1; pos < band.size(); ++pos) {
                double m = bs.metric(t[static_cast<size_t>(band[pos])], t[static_cast<size_t>(free_index)]);
                if (!(m < bs.delta_prime * bs.alpha1)) return false;
            }
        }
    }
    return true;
}

}  // namespace

std::optional<BandStructure> build_bands(std::span<const double> t, double alpha1, const SeparationMetric& metric,
                                         const BandOptions& opts) {
    const int k = static_cast<int>(t.size());
    if (k == 0) return std::nullopt;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (t[static_cast<size_t>(i)] == t[static_cast<size_t>(j)]) return std::nullopt;  // measure-zero configuration

    int rounds = opts.max_rounds > 0 ? opts.max_rounds : 2 * metric.d;
    double delta = opts.delta0;
    for (int r = 0; r < rounds; ++r) {
        double delta_prime = opts.epsilon * delta;
        BandStructure bs = partition_at_scale(t, alpha1, metric, delta, delta_prime);
        if (structure_valid(bs, t, opts.c0, opts.beta1)) return bs;
        delta = delta_prime;
    }
    return std::nullopt;
}

ClauseReport verify_band_conclusions(const BandStructure& bs, std::span<const double> t, double c0,
                                     double beta1) {
    ClauseReport rep;
    const int k = static_cast<int>(t.size());
    const double slack = 0.125;  // module "~" constant for the cross-band clause
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            double m = bs.metric(t[static_cast<size_t>(i)], t[static_cast<size_t>(j)]);
            bool same_band = bs.band_of[static_cast<size_t>(i)] == bs.band_of[static_cast<size_t>(j)];
            if (!same_band) {
                if (!(m > slack * bs.delta * bs.alpha1)) {
                    rep.separation_ok = false;
                    rep.violations.emplace_back(i, j);
                }
            } else if (bs.classification[static_cast<size_t>(i)] == IndexClass::QuasiFree &&
                       bs.bind[static_cast<size_t>(i)] == j) {
                if (!(m < bs.delta * bs.alpha1) || !(m > c0 * beta1)) {
                    rep.quasi_bound_ok = false;
                    rep.violations.emplace_back(i, j);
                }
            } else if (bs.classification[static_cast<size_t>(i)] == IndexClass::Bound &&
                       bs.bind[static_cast<size_t>(i)] == j) {
                if (!(m < bs.delta_prime * bs.alpha1)) {
                    rep.bound_ok = false;
                    rep.violations.emplace_back(i, j);
                }
            }
        }
    }
    return rep;
}

double within_band_comparability(const BandStructure& bs, std::span<const double> t, double floor_value) {
    for (double v : t)
        if (v < floor_value)
            throw std::invalid_argument("within_band_comparability: point below the alpha1^n floor");
    double worst = 0;
    for (const auto& band : bs.bands) {
        for (size_t a = 0; a < band.size(); ++a) {
            for (size_t b = a + 1; b < band.size(); ++b) {
                double ti = t[static_cast<size_t>(band[a])], tj = t[static_cast<size_t>(band[b])];
                worst = std::max(worst, std::abs(ti - tj) / std::min(ti, tj));
            }
        }
    }
    return worst;
}

std::optional<TwoStageBands> build_two_stage_bands(std::span<const double> t, double alpha1, double gamma2,
                                                   const SeparationMetric& metric,
                                                   const TwoStageOptions& opts) {
    double delta = opts.delta;
    double delta_prime = opts.delta_prime > 0 ? opts.delta_prime : 0.5 * opts.epsilon * delta;
    double rho = opts.rho > 0 ? opts.rho : 0.5 * delta_prime;
    double rho_prime = opts.rho_prime > 0 ? opts.rho_prime : 0.5 * opts.epsilon * rho;
    if (!(rho_prime < opts.epsilon * rho) || !(rho < delta_prime) || !(delta_prime < opts.epsilon * delta))
        throw std::invalid_argument("build_two_stage_bands: parameter chain rho' < eps rho, rho < delta', delta' < eps delta violated");

    const int k = static_cast<int>(t.size());
    if (k == 0) return std::nullopt;
    TwoStageBands out;
    out.rho = rho;
    out.rho_prime = rho_prime;
    out.gamma2 = gamma2;
    out.first = partition_at_scale(t, alpha1, metric, delta, delta_prime);

    int top = k - 1;
    int band_id = out.first.band_of[static_cast<size_t>(top)];
    out.second_indices = out.first.bands[static_cast<size_t>(band_id)];
    std::vector<double> sub;
    sub.reserve(out.second_indices.size());
    for (int idx : out.second_indices) sub.push_back(t[static_cast<size_t>(idx)]);
    out.second = partition_at_scale(sub, gamma2, metric, rho, rho_prime);
    return out;
}

TwoStageClauseReport verify_two_stage_conclusions(const TwoStageBands& ts, std::span<const double> t,
                                                  double c0, double beta1, double beta2) {
    TwoStageClauseReport rep;
    rep.first = verify_band_conclusions(ts.first, t, c0, beta1);
    std::vector<double> sub;
    sub.reserve(ts.second_indices.size());
    for (int idx : ts.second_indices) sub.push_back(t[static_cast<size_t>(idx)]);
    rep.second = verify_band_conclusions(ts.second, sub, c0, beta1);
    // the top original index, when quasi-bound in the second stage, must sit
    // above the beta2 threshold
    int top_original = static_cast<int>(t.size()) - 1;
    for (size_t pos = 0; pos < ts.second_indices.size(); ++pos) {
        if (ts.second_indices[pos] != top_original) continue;
        if (ts.second.classification[pos] != IndexClass::QuasiFree) continue;
        int mate = ts.second.bind[pos];
        double m = ts.second.metric(sub[pos], sub[static_cast<size_t>(mate)]);
        if (!(m > c0 * beta2)) rep.top_quasi_bound_ok = false;
    }
    return rep;
}

ElimDiffReport check_elim_diff(std::span<const double> t, const ElimDiffParams& p) {
    ElimDiffReport rep;
    const int k = static_cast<int>(t.size());
    const double slack = 1.0 - 1e-9;  // constructions sit exactly on the excision radius
    double top_threshold = p.c * std::pow(p.alpha2, (1.0 + p.n) / 2.0) * std::pow(p.alpha1, (1.0 - p.n) / 2.0);
    for (int kk = 1; kk < k; ++kk) {  // 0-based position kk, 1-based index kk+1
        int index_1b = kk + 1;
        for (int j = 0; j < kk; ++j) {
            double m = p.metric(t[static_cast<size_t>(kk)], t[static_cast<size_t>(j)]);
            if (index_1b == k) {
                if (!(m >= slack * top_threshold)) {
                    rep.top_ok = false;
                    rep.violations.emplace_back(kk, j);
                }
            } else if (index_1b % 2 == 1) {
                if (!(m >= slack * p.c * p.beta1)) {
                    rep.odd_ok = false;
                    rep.violations.emplace_back(kk, j);
                }
            } else {
                if (!(m >= slack * p.c * p.alpha1)) {
                    rep.even_ok = false;
                    rep.violations.emplace_back(kk, j);
                }
            }
        }
    }
    return rep;
}

LowerBoundResult lower_bound_JP_product(const PolyCurve& curve, std::span<const double> t,
                                        const BandStructure& bs, const LowerBoundParams& p) {
    auto clauses = verify_band_conclusions(bs, t, p.c0, p.beta1);
    if (!clauses.separation_ok || !clauses.quasi_bound_ok || !clauses.bound_ok)
        throw std::invalid_argument("lower_bound_JP_product: band clauses violated, bound not applicable");
    const int d = curve.dim();
    if (static_cast<int>(t.size()) != d) throw std::invalid_argument("lower_bound_JP_product: need d points");

    LowerBoundResult out;
    out.lhs = std::abs(curve.jacobian(t));
    int m_quasi = bs.count(IndexClass::QuasiFree);
    double weight = 1.0;
    double expo = 2.0 * bs.metric.K / (d * (d + 1.0));
    for (double v : t) weight *= std::pow(v, expo);
    out.rhs = std::pow(p.alpha1, d * (d - 1.0) / 2.0) * std::pow(p.beta1 / p.alpha1, m_quasi) *
              std::pow(p.alpha2 / p.alpha1, (1.0 + p.n) * (d - 1.0) / 2.0) * weight;
    out.ratio = out.lhs / out.rhs;
    // theta per free/quasi-free index: own sign plus the signs of the indices
    // bound to it (1-based parity); recorded and asserted nonzero
    for (size_t idx = 0; idx < bs.classification.size(); ++idx) {
        if (bs.classification[idx] == IndexClass::Bound) continue;
        int theta = (idx + 1) % 2 == 1 ? +1 : -1;
        for (size_t other = 0; other < bs.bind.size(); ++other)
            if (bs.classification[other] == IndexClass::Bound && bs.bind[other] == static_cast<int>(idx))
                theta += (other + 1) % 2 == 1 ? +1 : -1;
        out.thetas.push_back(theta);
        if (theta == 0) throw std::logic_error("lower_bound_JP_product: vanishing sign weight");
    }
    return out;
}

}  // namespace arclab
