#include "arclab/poly.hpp"

#include <sstream>

namespace arclab {

std::pair<RatPoly, RatPoly> divmod(const RatPoly& num, const RatPoly& den) {
    if (den.is_zero()) throw std::invalid_argument("divmod: zero divisor");
    RatPoly rem = num;
    std::vector<Rat> q;
    int dd = den.degree();
    if (rem.degree() >= dd) q.assign(static_cast<size_t>(rem.degree() - dd) + 1, Rat(0));
    while (!rem.is_zero() && rem.degree() >= dd) {
        int shift = rem.degree() - dd;
        Rat c = rem.leading() / den.leading();
        q[static_cast<size_t>(shift)] = c;
        rem = rem - RatPoly::monomial(shift, c) * den;
    }
    return {RatPoly(std::move(q)), rem};
}

std::optional<RatPoly> divide_exact(const RatPoly& num, const RatPoly& den) {
    auto [q, r] = divmod(num, den);
    if (!r.is_zero()) return std::nullopt;
    return q;
}

static RatPoly make_monic(const RatPoly& p) {
    if (p.is_zero()) return p;
    return (Rat(1) / p.leading()) * p;
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        auto [q, r] = divmod(a, b);
        a = b;
        b = r;
    }
    return make_monic(a);
}

std::vector<SquarefreeFactor> squarefree_decompose(const RatPoly& p) {
    std::vector<SquarefreeFactor> out;
    if (p.degree() <= 0) return out;
    // Yun's algorithm.
    RatPoly a = make_monic(p);
    RatPoly da = a.derivative();
    RatPoly g = poly_gcd(a, da);
    RatPoly w = *divide_exact(a, g);
    RatPoly y = *divide_exact(da, g);
    int mult = 1;
    while (w.degree() > 0) {
        RatPoly z = y - w.derivative();
        RatPoly f = poly_gcd(w, z);
        if (f.degree() > 0) out.push_back({f, mult});
        w = *divide_exact(w, f);
        y = *divide_exact(z, f);
        ++mult;
    }
    return out;
}

std::string to_string(const RatPoly& p, const std::string& var) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
        Rat c = p.coeff(k);
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Rat ac = abs(c);
        bool unit = (ac == 1);
        if (k == 0 || !unit) os << to_string(ac);
        if (k > 0) {
            if (!unit) os << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
        first = false;
    }
    return os.str();
}

}  // namespace arclab
