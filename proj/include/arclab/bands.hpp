#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arclab/curve.hpp"
#include "arclab/exponents.hpp"

namespace arclab {

/// The weighted separation m(t_i, t_j) = |t_i - t_j| (t_i t_j)^{K/d(d+1)},
/// so the recurring threshold |t_i-t_j| > X (t_i t_j)^{-K/d(d+1)} reads
/// m(t_i, t_j) > X.
struct SeparationMetric {
    int K = 0;
    int d = 2;
    double exponent() const { return K / (d * (d + 1.0)); }
    double operator()(double ti, double tj) const {
        return std::abs(ti - tj) * std::pow(ti * tj, exponent());
    }
};

enum class IndexClass { Free, QuasiFree, Bound };

struct BandStructure {
    std::vector<std::vector<int>> bands;   // partition of {0..k-1}, original indices
    std::vector<int> band_of;              // index -> band id
    std::vector<IndexClass> classification;
    std::vector<int> bind;                 // non-free index -> its band's free index; -1 for free
    double delta = 0;
    double delta_prime = 0;
    double alpha1 = 0;
    SeparationMetric metric;

    int count(IndexClass c) const {
        int n = 0;
        for (auto cl : classification)
            if (cl == c) ++n;
        return n;
    }
    int lambda_count() const { return count(IndexClass::Free) + count(IndexClass::QuasiFree); }
};

struct BandOptions {
    double delta0 = 0.25;      // starting split scale
    double epsilon = 1.0 / 64;  // scale shrink per refinement round; realizes "<<"
    int max_rounds = 0;         // 0: use 2d rounds
    double c0 = 0.125;          // quasi-bound lower constant, applied to beta1
    double beta1 = 0;           // 0 disables the quasi-bound lower validity check
};

/// Splits sorted points where adjacent separation exceeds delta*alpha1 in the
/// metric; refines delta by epsilon per round (at most 2d rounds) until bands
/// of three or more points are delta'-tight. Returns nullopt when no scale in
/// the chain produces a valid structure, or when points coincide.
std::optional<BandStructure> build_bands(std::span<const double> t, double alpha1, const SeparationMetric& metric,
                                         const BandOptions& opts = {});

struct ClauseReport {
    bool separation_ok = true;      // cross-band pairs above the delta threshold
    bool quasi_bound_ok = true;     // quasi-bound pairs inside [c0 beta1, delta alpha1]
    bool bound_ok = true;           // bound pairs below the delta' threshold
    std::vector<std::pair<int, int>> violations;
};

/// Pointwise check of the three separation clauses with the module's 1/8
/// comparability constant on the cross-band side.
ClauseReport verify_band_conclusions(const BandStructure& bs, std::span<const double> t, double c0,
                                     double beta1);

/// Max over same-band pairs of |t_i-t_j| / min(t_i,t_j); PASS iff < 1/2.
/// Throws std::invalid_argument when the floor precondition t_i >= floor is
/// violated.
double within_band_comparability(const BandStructure& bs, std::span<const double> t, double floor_value);

struct TwoStageBands {
    BandStructure first;
    BandStructure second;       // on the band containing the top index
    std::vector<int> second_indices;  // original indices of that band
    double rho = 0, rho_prime = 0;
    double gamma2 = 0;
};

struct TwoStageOptions {
    double delta = 0.25;
    double delta_prime = 0;   // default epsilon * delta
    double rho = 0;           // default delta_prime / 2
    double rho_prime = 0;     // default epsilon * rho
    double epsilon = 1.0 / 64;
    double c0 = 0.125;
    double beta1 = 0, beta2 = 0;
};

/// First stage at scale delta*alpha1 over all 2d-1 points; second stage
/// re-partitions the band containing the last index at scale rho*gamma2.
/// The parameter chain rho' < eps*rho, rho < delta', delta' < eps*delta is
/// enforced.
std::optional<TwoStageBands> build_two_stage_bands(std::span<const double> t, double alpha1, double gamma2,
                                                   const SeparationMetric& metric,
                                                   const TwoStageOptions& opts = {});

struct TwoStageClauseReport {
    ClauseReport first;
    ClauseReport second;
    bool top_quasi_bound_ok = true;  // the last index's quasi-bound lower bound carries beta2, not beta1
};

/// The six displayed clauses: three on the first stage (thresholds delta,
/// delta' at scale alpha1, quasi-bound lower bound c0*beta1) and three on the
/// second stage (rho, rho' at scale gamma2; when the top index is quasi-bound
/// its lower bound is c0*beta2).
TwoStageClauseReport verify_two_stage_conclusions(const TwoStageBands& ts, std::span<const double> t,
                                                  double c0, double beta1, double beta2);

struct ElimDiffParams {
    double alpha1 = 0, beta1 = 0, alpha2 = 0;
    double n = 1.0;
    SeparationMetric metric;
    double c = 0.125;  // module constant realizing the lower bounds
};
struct ElimDiffReport {
    bool odd_ok = true, even_ok = true, top_ok = true;
    std::vector<std::pair<int, int>> violations;
};
/// The three pairwise-separation bullets on a full tower tuple (1-based
/// parity; the last index is the top one).
ElimDiffReport check_elim_diff(std::span<const double> t, const ElimDiffParams& p);

struct LowerBoundParams {
    double alpha1 = 0, beta1 = 0, alpha2 = 0;
    double n = 1.0;
    double c0 = 0.125;
};
struct LowerBoundResult {
    double lhs = 0;   // |J_P(t)|
    double rhs = 0;   // alpha1^{d(d-1)/2} (beta1/alpha1)^M (alpha2/alpha1)^{(1+n)(d-1)/2} prod t^{2K/d(d+1)}
    double ratio = 0;
    // per free index: the alternating-sign weight (+-1) + sum over its bound
    // indices; never zero because bound indices come in pairs of matching
    // parity constraints
    std::vector<int> thetas;
};
/// Conditional Jacobian lower bound: refuses (throws std::invalid_argument)
/// when the band clauses fail on t.
LowerBoundResult lower_bound_JP_product(const PolyCurve& curve, std::span<const double> t,
                                        const BandStructure& bs, const LowerBoundParams& p);

}  // namespace arclab
