#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "arclab/curve.hpp"
#include "arclab/interval.hpp"

namespace arclab {

struct QuadratureFailure : std::runtime_error {
    int level;
    Interval where;
    QuadratureFailure(int lvl, Interval iv)
        : std::runtime_error("ladder quadrature failed to converge at level " + std::to_string(lvl)),
          level(lvl),
          where(iv) {}
};

/// Recursive rational-function ladder J_1..J_d built from the minor
/// determinants:
///   J_1(t)            = L_{d-2}(t) L_d(t) / L_{d-1}(t)^2
///   J_k(t_1,...,t_k)  = prod_j [L_{d-k-1} L_{d-k+1} / L_{d-k}^2](t_j)
///                       * int_{t_1}^{t_2} ... int_{t_{k-1}}^{t_k} J_{k-1}
/// evaluated by nested adaptive quadrature with per-level relative tolerance
/// base_rel_tol / 4^depth. Valid on pieces where the minors are single-signed.
class JLadder {
  public:
    JLadder(const PolyCurve& curve, Interval piece, double base_rel_tol = 1e-9);

    int dim() const { return d_; }
    const Interval& piece() const { return piece_; }

    /// J_k at a k-tuple strictly inside the piece.
    double eval(int k, std::span<const double> t) const;

  private:
    double prefactor(int k, double u) const;
    double nested_integral(int k, std::span<const double> t, int depth) const;

    int d_;
    Interval piece_;
    double base_rel_tol_;
    std::vector<DPoly> minors_;  // minors_[j] = L_j as doubles; L_0 = L_{-1} = 1 handled by index
};

/// Max over seeded ordered tuples of |J_d(t) - J_P(t)| / |J_P(t)|. The
/// sampling box must lie inside one piece of the initial single-signed split
/// (checked on a coarse grid).
struct IdentityCheckResult {
    double max_rel_error = 0;
    int tuples = 0;
};
IdentityCheckResult check_identity_JP_equals_Jd(const PolyCurve& curve, Interval box, int samples,
                                                double quad_rel_tol, uint64_t seed);

/// Max over a geometric grid of |L_1'(s)| * s / |L_1(s)| on a normalized piece
/// (b = 0, interval inside (0, inf)). The PASS threshold for corpus leaves is
/// deg(L_1): the sum of the root multiplicities.
double check_L1_derivative_bound(const PolyCurve& curve, Interval normalized_interval, int grid);

/// Compares a mixed partial of H = J_P / prod_j L_1(t_j) (central finite
/// differences over the index subset) against the ladder-form bound
///   sum_{delta, i} |H| / prod_j t_j^{delta_j} |t_j - t_{i(j)}|^{1-delta_j}.
/// Returns the max over samples of |dH| / bound.
double check_partial_derivative_bound(const PolyCurve& curve, Interval box, const std::vector<int>& subset,
                                      int samples, uint64_t seed);

}  // namespace arclab
