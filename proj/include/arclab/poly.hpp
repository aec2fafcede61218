#pragma once

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arclab/rational.hpp"

namespace arclab {

/// Dense univariate polynomial over T (Rat for exact work, double for
/// sampling). coeffs()[k] multiplies s^k. The zero polynomial is the empty
/// coefficient list and reports degree() == -1.
template <typename T>
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

    static Polynomial constant(const T& c) { return Polynomial(std::vector<T>{c}); }
    static Polynomial identity() { return monomial(1, T(1)); }
    static Polynomial monomial(int k, const T& c) {
        std::vector<T> v(static_cast<size_t>(k) + 1, T(0));
        v.back() = c;
        return Polynomial(std::move(v));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<T>& coeffs() const { return coeffs_; }
    T coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(coeffs_.size())) return T(0);
        return coeffs_[static_cast<size_t>(k)];
    }
    T leading() const { return coeffs_.empty() ? T(0) : coeffs_.back(); }

    T operator()(const T& x) const {
        T acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return Polynomial();
        std::vector<T> out(coeffs_.size() - 1);
        for (size_t k = 1; k < coeffs_.size(); ++k) out[k - 1] = coeffs_[k] * T(static_cast<int>(k));
        return Polynomial(std::move(out));
    }

    /// Antiderivative with zero constant term. Requires T to be a field.
    Polynomial antiderivative() const {
        if (is_zero()) return Polynomial();
        std::vector<T> out(coeffs_.size() + 1, T(0));
        for (size_t k = 0; k < coeffs_.size(); ++k) out[k + 1] = coeffs_[k] / T(static_cast<int>(k) + 1);
        return Polynomial(std::move(out));
    }

    Polynomial operator-() const {
        auto out = coeffs_;
        for (auto& c : out) c = -c;
        return Polynomial(std::move(out));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<T> out(std::max(a.coeffs_.size(), b.coeffs_.size()), T(0));
        for (size_t k = 0; k < a.coeffs_.size(); ++k) out[k] = a.coeffs_[k];
        for (size_t k = 0; k < b.coeffs_.size(); ++k) out[k] = out[k] + b.coeffs_[k];
        return Polynomial(std::move(out));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<T> out(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
        for (size_t i = 0; i < a.coeffs_.size(); ++i)
            for (size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] = out[i + j] + a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(out));
    }
    friend Polynomial operator*(const T& c, const Polynomial& p) {
        auto out = p.coeffs_;
        for (auto& x : out) x = c * x;
        return Polynomial(std::move(out));
    }

    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

    /// p(a*s + b), exact for field T.
    Polynomial compose_affine(const T& a, const T& b) const {
        Polynomial acc;
        Polynomial lin(std::vector<T>{b, a});
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + constant(*it);
        return acc;
    }

  private:
    void normalize() {
        while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
    }
    std::vector<T> coeffs_;
};

using RatPoly = Polynomial<Rat>;
using DPoly = Polynomial<double>;

inline DPoly to_double(const RatPoly& p) {
    std::vector<double> c(p.coeffs().size());
    for (size_t k = 0; k < c.size(); ++k) c[k] = to_double(p.coeffs()[k]);
    return DPoly(std::move(c));
}

/// Quotient and remainder over a field; den must be nonzero.
std::pair<RatPoly, RatPoly> divmod(const RatPoly& num, const RatPoly& den);

/// Exact division: nullopt unless the remainder vanishes.
std::optional<RatPoly> divide_exact(const RatPoly& num, const RatPoly& den);

/// Monic gcd over the rationals (gcd of anything with 0 is the other input,
/// made monic).
RatPoly poly_gcd(RatPoly a, RatPoly b);

/// Yun squarefree decomposition: p = lead * prod factors[i].p ^ factors[i].multiplicity,
/// with the factors monic, squarefree, and pairwise coprime.
struct SquarefreeFactor {
    RatPoly factor;
    int multiplicity = 0;
};
std::vector<SquarefreeFactor> squarefree_decompose(const RatPoly& p);

std::string to_string(const RatPoly& p, const std::string& var = "s");

}  // namespace arclab
