#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arclab/curve.hpp"
#include "arclab/gridset.hpp"
#include "arclab/interval.hpp"

namespace arclab {

/// The normalized decomposition measure d(mu) = s^{2K/d(d+1)} ds with the
/// linearizing exponent n = d(d+1)/(2K + d(d+1)): mu([0, r^n]) = n r.
struct MuMeasure {
    int K = 0;
    int d = 2;
    double n() const {
        double dd = d;
        return dd * (dd + 1.0) / (2.0 * K + dd * (dd + 1.0));
    }
};

/// Exact closed-form mu([a,b]) = n (b^{1/n} - a^{1/n}); requires 0 <= a <= b.
double mu_interval(const MuMeasure& m, double a, double b);

/// Interval-mass oracle used by the discretized operator; closed form for
/// MuMeasure, quadrature-backed for affine arclength density.
struct MeasureRef {
    std::function<double(double, double)> mass;
};
MeasureRef make_measure(const MuMeasure& m);
MeasureRef make_affine_arclength_measure(const PolyCurve& curve);

/// {s in I : x - sign*P(s) in E}, resolved exactly per box (sorted, disjoint).
std::vector<Interval> membership_intervals(const PolyCurve& curve, Interval i, const GridSet& e,
                                           std::span<const double> x, int sign);

/// T chi_E(x) = mu{s in I \ [0, trunc] : x - P(s) in E}. trunc = 0 gives the
/// untruncated operator; the truncated variant removes [0, c*gamma^n].
double apply_T(const PolyCurve& curve, Interval i, const MeasureRef& m, const GridSet& e,
               std::span<const double> x, double trunc = 0.0);

struct PairValue {
    double value = 0;
    double error = 0;  // stratified MC estimate
};

/// <T chi_E, chi_F> by stratified Monte Carlo over F's boxes (adjoint = false)
/// or <chi_E, T* chi_F> sampling E (adjoint = true).
PairValue pair_value(const PolyCurve& curve, Interval i, const MeasureRef& m, const GridSet& e,
                     const GridSet& f, int x_samples, uint64_t seed, bool adjoint = false,
                     double trunc = 0.0);

struct OperatorFunctionals {
    double t_value = 0;
    double alpha = 0;  // T(E,F) / |F|
    double beta = 0;   // T(E,F) / |E|
    double error = 0;
    int x_samples = 0;
};
OperatorFunctionals functionals(const PolyCurve& curve, Interval i, const MeasureRef& m, const GridSet& e,
                                const GridSet& f, int x_samples, uint64_t seed);

/// Anisotropic Knapp pair: E_delta hulls {P(s) - P(t0) : s in [t0, t0+delta]}
/// fattened by the per-axis derivative scales delta^j; F_delta is E_{2 delta}
/// translated by P(t0). Requires [t0, t0 + 2 delta] inside I.
std::pair<GridSet, GridSet> knapp_family(const PolyCurve& curve, Interval i, double delta, double t0);

/// Endpoint exponents p_d = (d+1)/2, q_d = p_d * d/(d-1), computed from d.
double endpoint_p(int d);
double endpoint_q(int d);

/// T(E,F) / (|E|^{1/p} |F|^{1/q'}).
struct RwtRatio {
    double ratio = 0;
    double error = 0;
    OperatorFunctionals raw;
};
RwtRatio rwt_ratio(const PolyCurve& curve, Interval i, const MeasureRef& m, const GridSet& e,
                   const GridSet& f, double p, double q, int x_samples, uint64_t seed);

struct SweepRow {
    double delta = 0;
    double ratio = 0;
    double error = 0;
};
struct KnappSweep {
    std::vector<SweepRow> rows;
    double max_over_min = 0;    // flatness across the sweep
    bool monotone = false;      // strict trend in log delta
    int trend_sign = 0;         // +1 increasing as delta decreases, -1 decreasing, 0 none
    int predicted_sign = 0;     // sign predicted by the scaling law
};
KnappSweep knapp_sweep(const PolyCurve& curve, Interval i, const MuMeasure& m,
                       const std::vector<double>& deltas, double p, double q, double t0, int x_samples,
                       uint64_t seed);

/// Two-set inequality checks. Hypothesis constants are the measured
/// (sampled-min) values; refusal paths carry the violated hypothesis name.
struct TwoSetCheck {
    bool hypotheses_ok = false;
    std::string failure;
    double alpha1 = 0, alpha2 = 0, beta1 = 0, beta2 = 0;
    double lhs = 0, rhs = 0, ratio = 0;
};
TwoSetCheck check_mlE_inequality(const PolyCurve& curve, Interval i, const MuMeasure& m, const GridSet& e1,
                                 const GridSet& e2, const GridSet& f, int x_samples, uint64_t seed);

struct MlFQuadruple {
    double r1 = 0, r2 = 0, s1 = 0, s2 = 0;
    double c_exponent = 1.0;  // the eta power
};
TwoSetCheck check_mlF_inequality(const PolyCurve& curve, Interval i, const MuMeasure& m, const GridSet& e,
                                 const GridSet& f1, const GridSet& f2, double eta, const MlFQuadruple& quad,
                                 int x_samples, uint64_t seed);

}  // namespace arclab
