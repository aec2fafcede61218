#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "arclab/poly.hpp"

namespace arclab {

struct RootRecord {
    std::complex<double> value;
    int multiplicity = 1;
};

/// All complex roots of a polynomial with multiplicities. Multiplicities come
/// from exact squarefree decomposition; locations from companion-matrix
/// eigenvalues refined by Newton on the squarefree factor. Conjugate pairs are
/// stored exactly conjugate; roots with |Im| <= tol are snapped to the real
/// axis. Roots within 8*tol of each other are merged with summed multiplicity.
struct RootSet {
    std::vector<RootRecord> roots;
    double tolerance = 0;

    int total_multiplicity() const {
        int m = 0;
        for (const auto& r : roots) m += r.multiplicity;
        return m;
    }
    std::vector<double> real_roots() const {
        std::vector<double> out;
        for (const auto& r : roots)
            if (r.value.imag() == 0) out.push_back(r.value.real());
        return out;
    }
};

struct RootFindError : std::runtime_error {
    double residual;
    RootFindError(const std::string& what, double res) : std::runtime_error(what), residual(res) {}
};

/// Throws RootFindError with the worst residual if Newton fails to certify a
/// root within tol.
RootSet find_roots(const RatPoly& p, double tol = 1e-12);

/// Fast double-precision real roots inside [lo, hi], Newton-polished, sorted,
/// deduplicated. No multiplicity information; meant for sign-change
/// breakpoints in samplers. A constant polynomial yields no roots.
std::vector<double> real_roots_in(const Polynomial<double>& p, double lo, double hi);

}  // namespace arclab
