#include "arclab/roots.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace arclab {

namespace {

using cplx = std::complex<double>;

cplx horner(const std::vector<double>& c, cplx x) {
    cplx acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

/// Eigenvalues of the companion matrix of a monic double polynomial.
std::vector<cplx> companion_eigenvalues(const std::vector<double>& monic) {
    int n = static_cast<int>(monic.size()) - 1;  // degree
    if (n == 1) return {cplx(-monic[0], 0)};
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -monic[static_cast<size_t>(i)];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    std::vector<cplx> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

}  // namespace

RootSet find_roots(const RatPoly& p, double tol) {
    if (p.is_zero()) throw std::invalid_argument("find_roots: zero polynomial");
    RootSet out;
    out.tolerance = tol;
    if (p.degree() == 0) return out;

    auto factors = squarefree_decompose(p);
    for (const auto& sf : factors) {
        const RatPoly& f = sf.factor;
        std::vector<double> c(f.coeffs().size());
        for (size_t k = 0; k < c.size(); ++k) c[k] = to_double(f.coeffs()[k]);
        // monic by construction (Yun output), but normalize defensively
        double lead = c.back();
        std::vector<double> monic(c.size());
        for (size_t k = 0; k < c.size(); ++k) monic[k] = c[k] / lead;

        std::vector<double> dc(c.size() > 1 ? c.size() - 1 : 0);
        for (size_t k = 1; k < c.size(); ++k) dc[k - 1] = c[k] * static_cast<double>(k);

        for (cplx z : companion_eigenvalues(monic)) {
            // Newton refinement on the squarefree factor: simple roots only.
            for (int it = 0; it < 60; ++it) {
                cplx fv = horner(c, z);
                cplx dv = horner(dc, z);
                if (std::abs(dv) == 0) break;
                cplx step = fv / dv;
                z -= step;
                if (std::abs(step) < 1e-3 * tol * std::max(1.0, std::abs(z))) break;
            }
            cplx fv = horner(c, z);
            cplx dv = horner(dc, z);
            double certified = std::abs(dv) > 0 ? std::abs(fv / dv) : std::abs(fv);
            if (certified > 0.5 * tol * std::max(1.0, std::abs(z)))
                throw RootFindError("find_roots: Newton failed to certify a root within tolerance", certified);
            if (std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z))) z = cplx(z.real() + 0.0, 0);
            out.roots.push_back({z, sf.multiplicity});
        }
    }

    // Force exact conjugate pairs: average each root with the conjugate of its
    // nearest mirror partner.
    for (auto& r : out.roots) {
        if (r.value.imag() <= 0) continue;
        RootRecord* best = nullptr;
        double best_dist = std::numeric_limits<double>::infinity();
        for (auto& o : out.roots) {
            if (o.value.imag() >= 0) continue;
            double dist = std::abs(o.value - std::conj(r.value));
            if (dist < best_dist) { best_dist = dist; best = &o; }
        }
        if (best && best_dist <= 8 * tol * std::max(1.0, std::abs(r.value))) {
            cplx avg = 0.5 * (r.value + std::conj(best->value));
            r.value = avg;
            best->value = std::conj(avg);
        }
    }

    // Cluster merge: roots closer than 8*tol coalesce, multiplicities summed.
    std::sort(out.roots.begin(), out.roots.end(), [](const RootRecord& a, const RootRecord& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    std::vector<RootRecord> merged;
    for (const auto& r : out.roots) {
        bool absorbed = false;
        for (auto& m : merged) {
            if (std::abs(m.value - r.value) <= 8 * tol * std::max(1.0, std::abs(m.value))) {
                // multiplicity-weighted centroid
                double wm = m.multiplicity, wr = r.multiplicity;
                m.value = (m.value * wm + r.value * wr) / (wm + wr);
                m.multiplicity += r.multiplicity;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) merged.push_back(r);
    }
    for (auto& m : merged)
        if (std::abs(m.value.imag()) <= tol * std::max(1.0, std::abs(m.value))) m.value = cplx(m.value.real() + 0.0, 0);
    out.roots = std::move(merged);
    return out;
}

std::vector<double> real_roots_in(const Polynomial<double>& p, double lo, double hi) {
    std::vector<double> out;
    const auto& c = p.coeffs();
    int deg = p.degree();
    if (deg < 1) return out;
    std::vector<double> monic(c.begin(), c.end());
    for (auto& v : monic) v /= c.back();
    std::vector<double> dc(static_cast<size_t>(deg));
    for (int k = 1; k <= deg; ++k) dc[static_cast<size_t>(k) - 1] = c[static_cast<size_t>(k)] * k;
    Polynomial<double> dp(dc);

    for (cplx z : companion_eigenvalues(monic)) {
        if (std::abs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z))) continue;
        double x = z.real();
        for (int it = 0; it < 12; ++it) {
            double dv = dp(x);
            if (dv == 0) break;
            double step = p(x) / dv;
            x -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        if (x >= lo && x <= hi) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)); }),
              out.end());
    return out;
}

}  // namespace arclab
