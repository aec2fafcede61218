#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "arclab/poly.hpp"

namespace arclab {

/// Determinant over a field (Rat or double) by fraction elimination with
/// partial pivoting; m is row-major n x n and is consumed.
template <typename T>
T det_field(std::vector<T> m, int n) {
    T det(1);
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        if constexpr (std::is_same_v<T, double>) {
            double best = 0;
            for (int i = k; i < n; ++i) {
                double v = std::abs(m[static_cast<size_t>(i) * n + k]);
                if (v > best) { best = v; piv = i; }
            }
            if (piv < 0 || best == 0) return T(0);
        } else {
            for (int i = k; i < n; ++i)
                if (m[static_cast<size_t>(i) * n + k] != T(0)) { piv = i; break; }
            if (piv < 0) return T(0);
        }
        if (piv != k) {
            for (int j = k; j < n; ++j) std::swap(m[static_cast<size_t>(piv) * n + j], m[static_cast<size_t>(k) * n + j]);
            det = -det;
        }
        T p = m[static_cast<size_t>(k) * n + k];
        det = det * p;
        for (int i = k + 1; i < n; ++i) {
            T f = m[static_cast<size_t>(i) * n + k] / p;
            for (int j = k + 1; j < n; ++j)
                m[static_cast<size_t>(i) * n + j] = m[static_cast<size_t>(i) * n + j] - f * m[static_cast<size_t>(k) * n + j];
        }
    }
    return det;
}

/// Fraction-free Bareiss determinant for matrices of exact polynomials.
/// Intermediate divisions are exact in the polynomial ring, which keeps
/// coefficient growth polynomial instead of exponential.
RatPoly bareiss_poly_det(std::vector<RatPoly> m, int n);

/// Which derivative matrix a d x d sample came from.
enum class DerivShape {
    SuccessiveAtPoint,   // columns P'(s), P''(s), ..., P^(d)(s) at one s
    FirstAtPoints,       // columns P'(t_1), ..., P'(t_d)
};

/// d x d matrix of curve-derivative samples.
struct DerivMatrix {
    int dim = 0;
    DerivShape shape = DerivShape::SuccessiveAtPoint;
    std::vector<double> entries;  // row-major
    double det() const { return det_field(entries, dim); }
};

/// Polynomial curve R -> R^d with exact rational coefficients.
class PolyCurve {
  public:
    PolyCurve(std::vector<RatPoly> components);

    int dim() const { return static_cast<int>(comps_.size()); }
    int degree() const { return degree_; }
    bool nondegenerate() const { return nondegenerate_; }
    const RatPoly& component(int i) const { return comps_[static_cast<size_t>(i)]; }
    const std::vector<RatPoly>& components() const { return comps_; }

    /// L_j: determinant of the top-left j x j block of the derivative matrix
    /// (rows: components 1..j, columns: derivative orders 1..j). j = 0 and
    /// j = -1 give the constant 1. Cached.
    const RatPoly& minor_ladder(int j) const;

    /// L_d, the full torsion determinant.
    const RatPoly& torsion() const { return minor_ladder(dim()); }

    std::vector<double> eval(double s) const;
    std::vector<Rat> eval_exact(const Rat& s) const;

    /// det(P'(t_1), ..., P'(t_d)) in double precision.
    double jacobian(std::span<const double> t) const;
    Rat jacobian_exact(std::span<const Rat> t) const;

    DerivMatrix derivative_matrix_at(double s) const;
    DerivMatrix jacobian_matrix(std::span<const double> t) const;

    /// |L_P(s)|^(2 / d(d+1)).
    double arclength_density(double s) const;

    /// Curve with components M * P (row-major d x d rational M).
    PolyCurve apply_matrix(const std::vector<Rat>& m) const;
    /// P(a*s + b), exact.
    PolyCurve reparametrize_affine(const Rat& a, const Rat& b) const;

    /// Double-precision component derivatives P_i^(order), cached for samplers.
    const DPoly& dcomponent_deriv(int i, int order) const;

  private:
    std::vector<RatPoly> comps_;
    int degree_ = 0;
    bool nondegenerate_ = false;
    mutable std::vector<RatPoly> minors_;           // [j-1] = L_j
    mutable std::vector<bool> minors_done_;
    mutable std::vector<std::vector<DPoly>> dderivs_;  // [i][order]
};

inline RatPoly torsion(const PolyCurve& c) { return c.torsion(); }
inline RatPoly minor_ladder(const PolyCurve& c, int j) { return c.minor_ladder(j); }

}  // namespace arclab
