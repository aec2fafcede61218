#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace arclab {

struct QuadResult {
    double value = 0;
    double error = 0;
    long evaluations = 0;
    bool converged = true;
};

namespace quad_detail {
// Gauss-Kronrod 7-15 nodes and weights (positive half; node 7 is the center).
inline constexpr double xgk[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897, 0.8648644233597690727897128,
    0.7415311855993944398638648, 0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
inline constexpr double wgk[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007, 0.1047900103222501838398763,
    0.1406532597155259187451896, 0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
inline constexpr double wg[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678, 0.3818300505051189449503698,
    0.4179591836734693877551020};
}  // namespace quad_detail

/// One Gauss-Kronrod 7-15 panel on [a, b]; err is the usual scaled |G7 - K15|.
template <typename F>
double gk15_panel(F&& f, double a, double b, double& err) {
    using namespace quad_detail;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fc = f(mid);
    double k15 = wgk[7] * fc;
    double g7 = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double dx = half * xgk[i];
        double fsum = f(mid - dx) + f(mid + dx);
        k15 += wgk[i] * fsum;
        if (i % 2 == 1) g7 += wg[i / 2] * fsum;
    }
    k15 *= half;
    g7 *= half;
    // scale-invariant form of the usual (200 |K15-G7|)^{3/2} heuristic
    double diff = std::abs(k15 - g7);
    double scale = std::abs(k15) + 1e-300;
    double r = 200.0 * diff / scale;
    err = std::max(scale * std::min(1.0, r * std::sqrt(r)), 1e-300);
    return k15;
}

/// Globally adaptive integration: splits the worst panel until the summed
/// error estimate is below rel_tol * |integral| (plus a tiny absolute floor)
/// or the panel budget runs out.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, double rel_tol, int max_panels = 64) {
    QuadResult result;
    if (a == b) return result;
    struct Seg {
        double a, b, value, error;
        bool operator<(const Seg& o) const { return error < o.error; }
    };
    std::priority_queue<Seg> queue;
    double err0;
    double v0 = gk15_panel(f, a, b, err0);
    result.evaluations = 15;
    queue.push({a, b, v0, err0});
    double total_v = v0, total_e = err0;
    int panels = 1;
    while (total_e > rel_tol * std::abs(total_v) + 1e-280 && panels < max_panels) {
        Seg worst = queue.top();
        queue.pop();
        total_v -= worst.value;
        total_e -= worst.error;
        double mid = 0.5 * (worst.a + worst.b);
        double e1, e2;
        double v1 = gk15_panel(f, worst.a, mid, e1);
        double v2 = gk15_panel(f, mid, worst.b, e2);
        result.evaluations += 30;
        queue.push({worst.a, mid, v1, e1});
        queue.push({mid, worst.b, v2, e2});
        total_v += v1 + v2;
        total_e += e1 + e2;
        ++panels;
    }
    result.value = total_v;
    result.error = total_e;
    result.converged = total_e <= rel_tol * std::abs(total_v) + 1e-280;
    return result;
}

}  // namespace arclab
