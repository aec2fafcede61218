#include "arclab/power_det.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "arclab/curve.hpp"

namespace arclab {

MPoly MPoly::monomial(int nvars, std::vector<int> exps, Rat c) {
    MPoly p(nvars);
    p.add_term(std::move(exps), c);
    return p;
}

void MPoly::add_term(std::vector<int> exps, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(exps), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MPoly MPoly::operator+(const MPoly& o) const {
    MPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
}

MPoly MPoly::operator-(const MPoly& o) const {
    MPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, Rat(-c));
    return out;
}

MPoly MPoly::operator*(const MPoly& o) const {
    MPoly out(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            std::vector<int> e(static_cast<size_t>(nvars_));
            for (int v = 0; v < nvars_; ++v) e[static_cast<size_t>(v)] = ea[static_cast<size_t>(v)] + eb[static_cast<size_t>(v)];
            out.add_term(std::move(e), Rat(ca * cb));
        }
    }
    return out;
}

MPoly MPoly::substitute_var(int var, int other) const {
    MPoly out(nvars_);
    for (const auto& [e, c] : terms_) {
        std::vector<int> ne = e;
        ne[static_cast<size_t>(other)] += ne[static_cast<size_t>(var)];
        ne[static_cast<size_t>(var)] = 0;
        out.add_term(std::move(ne), c);
    }
    return out;
}

MPoly MPoly::antiderivative(int var) const {
    MPoly out(nvars_);
    for (const auto& [e, c] : terms_) {
        int k = e[static_cast<size_t>(var)];
        if (k == -1) throw std::domain_error("MPoly::antiderivative: exponent -1 (log term)");
        std::vector<int> ne = e;
        ne[static_cast<size_t>(var)] = k + 1;
        out.add_term(std::move(ne), Rat(c / Rat(k + 1)));
    }
    return out;
}

std::optional<MPoly> MPoly::divide_by_linear_diff(int j, int i) const {
    // univariate synthetic division in t_j by (t_j - t_i):
    //   q_k = sum_{m >= k+1} c_m t_i^{m-1-k},  remainder = p|_{t_j -> t_i}
    int max_deg = 0;
    for (const auto& [e, c] : terms_) max_deg = std::max(max_deg, e[static_cast<size_t>(j)]);
    // group by degree in t_j
    std::vector<MPoly> by_deg(static_cast<size_t>(max_deg) + 1, MPoly(nvars_));
    for (const auto& [e, c] : terms_) {
        int k = e[static_cast<size_t>(j)];
        if (k < 0) return std::nullopt;  // Laurent part: not a polynomial division
        std::vector<int> ne = e;
        ne[static_cast<size_t>(j)] = 0;
        by_deg[static_cast<size_t>(k)].add_term(std::move(ne), c);
    }
    MPoly quotient(nvars_);
    MPoly carry(nvars_);  // running sum_{m>k} c_m t_i^{m-1-k}
    std::vector<int> ti_exp(static_cast<size_t>(nvars_), 0);
    ti_exp[static_cast<size_t>(i)] = 1;
    MPoly ti = MPoly::monomial(nvars_, ti_exp, Rat(1));
    for (int k = max_deg - 1; k >= 0; --k) {
        carry = carry * ti + by_deg[static_cast<size_t>(k) + 1];
        // carry is the coefficient of t_j^k in the quotient
        std::vector<int> tj_exp(static_cast<size_t>(nvars_), 0);
        tj_exp[static_cast<size_t>(j)] = k;
        quotient = quotient + carry * MPoly::monomial(nvars_, tj_exp, Rat(1));
    }
    MPoly remainder = carry * ti + by_deg[0];
    if (!remainder.is_zero()) return std::nullopt;
    return quotient;
}

bool MPoly::symmetric() const {
    for (int v = 0; v + 1 < nvars_; ++v) {
        MPoly swapped(nvars_);
        for (const auto& [e, c] : terms_) {
            std::vector<int> ne = e;
            std::swap(ne[static_cast<size_t>(v)], ne[static_cast<size_t>(v) + 1]);
            swapped.add_term(std::move(ne), c);
        }
        if (!(swapped == *this)) return false;
    }
    return true;
}

bool MPoly::coefficients_nonnegative() const {
    for (const auto& [e, c] : terms_)
        if (c < 0) return false;
    return true;
}

Rat MPoly::eval_exact(std::span<const Rat> t) const {
    Rat acc(0);
    for (const auto& [e, c] : terms_) {
        Rat term = c;
        for (int v = 0; v < nvars_; ++v) {
            int k = e[static_cast<size_t>(v)];
            if (k == 0) continue;
            Rat base = t[static_cast<size_t>(v)];
            if (k < 0) {
                base = Rat(1) / base;
                k = -k;
            }
            for (int rep = 0; rep < k; ++rep) term *= base;
        }
        acc += term;
    }
    return acc;
}

double MPoly::eval(std::span<const double> t) const {
    double acc = 0;
    for (const auto& [e, c] : terms_) {
        double term = to_double(c);
        for (int v = 0; v < nvars_; ++v) term *= std::pow(t[static_cast<size_t>(v)], e[static_cast<size_t>(v)]);
        acc += term;
    }
    return acc;
}

double power_determinant_value(const std::vector<int>& exponents, std::span<const double> t) {
    int d = static_cast<int>(exponents.size());
    std::vector<double> m(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            m[static_cast<size_t>(i) * d + j] = std::pow(t[static_cast<size_t>(j)], exponents[static_cast<size_t>(i)]);
    return det_field(std::move(m), d);
}

MPoly expand_alternating(const std::vector<int>& exponents, const Rat& c) {
    int d = static_cast<int>(exponents.size());
    std::vector<int> perm(static_cast<size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    MPoly out(d);
    do {
        // parity of perm
        int inversions = 0;
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b)
                if (perm[static_cast<size_t>(a)] > perm[static_cast<size_t>(b)]) ++inversions;
        std::vector<int> e(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j) e[static_cast<size_t>(j)] = exponents[static_cast<size_t>(perm[static_cast<size_t>(j)])];
        out.add_term(std::move(e), inversions % 2 == 0 ? c : Rat(-c));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

MPoly power_determinant_factor(const std::vector<int>& exponents) {
    int d = static_cast<int>(exponents.size());
    for (int i = 0; i + 1 < d; ++i)
        if (exponents[static_cast<size_t>(i)] >= exponents[static_cast<size_t>(i) + 1])
            throw std::invalid_argument("power_determinant_factor: exponents must be strictly increasing");
    if (!exponents.empty() && exponents.front() < 0)
        throw std::invalid_argument("power_determinant_factor: exponents must be non-negative");
    MPoly p = expand_alternating(exponents);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            auto q = p.divide_by_linear_diff(j, i);
            if (!q) throw std::logic_error("power_determinant_factor: Vandermonde division left a remainder");
            p = std::move(*q);
        }
    }
    return p;
}

PowerDeterminant s_r_recursion(int d, int base_exponent, const std::vector<int>& sigma) {
    if (d < 2) throw std::invalid_argument("s_r_recursion: d >= 2 required");
    if (static_cast<int>(sigma.size()) != d - 2)
        throw std::invalid_argument("s_r_recursion: sigma must have d-2 entries");
    PowerDeterminant state;
    state.exponents = {base_exponent};
    state.coefficient = Rat(1);
    for (int r = 2; r <= d; ++r) {
        // Integrate: with ascending exponents e_1 < ... < e_{r-1}, the result
        // is (-1)^{r-1} / prod(e+1) times the alternating form on the list
        // (e_1+1, ..., e_{r-1}+1, 0). Sorting that list costs a parity of
        // (-1)^{#positive entries}, since the fresh 0 crosses exactly those.
        std::vector<int> next;
        next.reserve(state.exponents.size() + 1);
        int above_zero = 0;
        for (int e : state.exponents) {
            if (e == -1) throw SrFailure(r);
            state.coefficient /= Rat(e + 1);
            next.push_back(e + 1);
            if (e + 1 > 0) ++above_zero;
        }
        next.push_back(0);
        std::sort(next.begin(), next.end());
        if (((r - 1) + above_zero) % 2 != 0) state.coefficient = -state.coefficient;
        state.exponents = std::move(next);
        // multiply by prod_s t_s^{sigma_r} except at the final stage
        if (r <= d - 1) {
            int shift = sigma[static_cast<size_t>(r) - 2];
            for (int& e : state.exponents) e += shift;
        }
    }
    return state;
}

double eval_power_determinant(const PowerDeterminant& pd, std::span<const double> t) {
    return to_double(pd.coefficient) * power_determinant_value(pd.exponents, t);
}

}  // namespace arclab
