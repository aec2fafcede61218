#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "arclab/rational.hpp"

namespace arclab {

/// Sparse multivariate polynomial over the rationals with integer (possibly
/// negative, i.e. Laurent) exponents. Term order is the map's lexicographic
/// order, so iteration is deterministic.
class MPoly {
  public:
    explicit MPoly(int nvars) : nvars_(nvars) {}
    static MPoly monomial(int nvars, std::vector<int> exps, Rat c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    size_t nterms() const { return terms_.size(); }
    const std::map<std::vector<int>, Rat>& terms() const { return terms_; }

    void add_term(std::vector<int> exps, const Rat& c);

    MPoly operator+(const MPoly& o) const;
    MPoly operator-(const MPoly& o) const;
    MPoly operator*(const MPoly& o) const;
    bool operator==(const MPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    /// t_var -> t_other
    MPoly substitute_var(int var, int other) const;
    /// Antiderivative in one variable; throws std::domain_error when an
    /// exponent -1 is integrated (a log term would appear).
    MPoly antiderivative(int var) const;
    /// Exact division by (t_j - t_i); nullopt when a remainder survives.
    std::optional<MPoly> divide_by_linear_diff(int j, int i) const;

    bool symmetric() const;
    bool coefficients_nonnegative() const;

    Rat eval_exact(std::span<const Rat> t) const;
    double eval(std::span<const double> t) const;

  private:
    int nvars_;
    std::map<std::vector<int>, Rat> terms_;
};

/// C * det([t_j^{alpha_i}]) in canonical form: exponents strictly increasing.
struct PowerDeterminant {
    std::vector<int> exponents;
    Rat coefficient{1};
};

/// det([t_j^{alpha_i}]_{i,j}) by direct determinant (double precision).
double power_determinant_value(const std::vector<int>& exponents, std::span<const double> t);

/// Expands the alternating sum sum_rho sgn(rho) prod_j t_j^{alpha_rho(j)}.
MPoly expand_alternating(const std::vector<int>& exponents, const Rat& c = Rat(1));

/// Quotient of the power determinant by the Vandermonde product
/// prod_{i<j}(t_j - t_i). Throws std::logic_error if any division leaves a
/// remainder. The result is asserted symmetric with non-negative coefficients
/// by the callers that need it.
MPoly power_determinant_factor(const std::vector<int>& exponents);

struct SrFailure : std::domain_error {
    int level;
    SrFailure(int lvl)
        : std::domain_error("s_r_recursion: exponent -1 integrated at level " + std::to_string(lvl)),
          level(lvl) {}
};

/// Iterates the alternating power-sum recursion: S_1 = t^{base_exponent};
/// for r = 2..d-1, S_r = prod_s t_s^{sigma[r-2]} * int...int S_{r-1}; the
/// final integration (no sigma factor) yields T_d as a PowerDeterminant.
/// sigma must have d-2 entries. Throws SrFailure when an exponent -1 is hit.
PowerDeterminant s_r_recursion(int d, int base_exponent, const std::vector<int>& sigma);

double eval_power_determinant(const PowerDeterminant& pd, std::span<const double> t);

}  // namespace arclab
