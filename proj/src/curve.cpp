#include "arclab/curve.hpp"

#include <stdexcept>

namespace arclab {

RatPoly bareiss_poly_det(std::vector<RatPoly> m, int n) {
    auto at = [&](int i, int j) -> RatPoly& { return m[static_cast<size_t>(i) * n + j]; };
    int sign = 1;
    RatPoly prev = RatPoly::constant(Rat(1));
    for (int k = 0; k + 1 < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (!at(i, k).is_zero()) { piv = i; break; }
        if (piv < 0) return RatPoly();  // zero column: singular
        if (piv != k) {
            for (int j = k; j < n; ++j) std::swap(at(piv, j), at(k, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                RatPoly num = at(i, j) * at(k, k) - at(i, k) * at(k, j);
                auto q = divide_exact(num, prev);
                if (!q) throw std::logic_error("bareiss_poly_det: inexact division");
                at(i, j) = std::move(*q);
            }
            at(i, k) = RatPoly();
        }
        prev = at(k, k);
    }
    RatPoly det = at(n - 1, n - 1);
    return sign < 0 ? -det : det;
}

PolyCurve::PolyCurve(std::vector<RatPoly> components) : comps_(std::move(components)) {
    if (comps_.size() < 2) throw std::invalid_argument("PolyCurve: need dim >= 2");
    for (const auto& c : comps_) degree_ = std::max(degree_, c.degree());
    minors_.resize(comps_.size());
    minors_done_.assign(comps_.size(), false);
    dderivs_.resize(comps_.size());
    nondegenerate_ = !torsion().is_zero();
}

const RatPoly& PolyCurve::minor_ladder(int j) const {
    static const RatPoly one = RatPoly::constant(Rat(1));
    if (j == 0 || j == -1) return one;
    if (j < -1 || j > dim()) throw std::out_of_range("minor_ladder: index out of range");
    size_t idx = static_cast<size_t>(j - 1);
    if (!minors_done_[idx]) {
        std::vector<RatPoly> m;
        m.reserve(static_cast<size_t>(j) * j);
        for (int i = 0; i < j; ++i) {
            RatPoly row = comps_[static_cast<size_t>(i)];
            for (int order = 1; order <= j; ++order) {
                row = row.derivative();
                m.push_back(row);
            }
        }
        minors_[idx] = bareiss_poly_det(std::move(m), j);
        minors_done_[idx] = true;
    }
    return minors_[idx];
}

std::vector<double> PolyCurve::eval(double s) const {
    std::vector<double> out(comps_.size());
    for (size_t i = 0; i < comps_.size(); ++i) out[i] = dcomponent_deriv(static_cast<int>(i), 0)(s);
    return out;
}

std::vector<Rat> PolyCurve::eval_exact(const Rat& s) const {
    std::vector<Rat> out(comps_.size());
    for (size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i](s);
    return out;
}

const DPoly& PolyCurve::dcomponent_deriv(int i, int order) const {
    auto& slot = dderivs_[static_cast<size_t>(i)];
    if (slot.empty()) {
        RatPoly p = comps_[static_cast<size_t>(i)];
        slot.push_back(to_double(p));
        for (int k = 1; k <= degree_ + 1; ++k) {
            p = p.derivative();
            slot.push_back(to_double(p));
        }
    }
    if (order >= static_cast<int>(slot.size())) {
        static const DPoly zero;
        return zero;
    }
    return slot[static_cast<size_t>(order)];
}

double PolyCurve::jacobian(std::span<const double> t) const {
    int d = dim();
    std::vector<double> m(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) m[static_cast<size_t>(i) * d + k] = dcomponent_deriv(i, 1)(t[static_cast<size_t>(k)]);
    return det_field(std::move(m), d);
}

Rat PolyCurve::jacobian_exact(std::span<const Rat> t) const {
    int d = dim();
    std::vector<RatPoly> dcomp(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) dcomp[static_cast<size_t>(i)] = comps_[static_cast<size_t>(i)].derivative();
    std::vector<Rat> m(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) m[static_cast<size_t>(i) * d + k] = dcomp[static_cast<size_t>(i)](t[static_cast<size_t>(k)]);
    return det_field(std::move(m), d);
}

DerivMatrix PolyCurve::derivative_matrix_at(double s) const {
    int d = dim();
    DerivMatrix out{d, DerivShape::SuccessiveAtPoint, std::vector<double>(static_cast<size_t>(d) * d)};
    for (int i = 0; i < d; ++i)
        for (int order = 1; order <= d; ++order)
            out.entries[static_cast<size_t>(i) * d + (order - 1)] = dcomponent_deriv(i, order)(s);
    return out;
}

DerivMatrix PolyCurve::jacobian_matrix(std::span<const double> t) const {
    int d = dim();
    DerivMatrix out{d, DerivShape::FirstAtPoints, std::vector<double>(static_cast<size_t>(d) * d)};
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) out.entries[static_cast<size_t>(i) * d + k] = dcomponent_deriv(i, 1)(t[static_cast<size_t>(k)]);
    return out;
}

double PolyCurve::arclength_density(double s) const {
    int d = dim();
    double l = to_double(torsion())(s);
    return std::pow(std::abs(l), 2.0 / (d * (d + 1.0)));
}

PolyCurve PolyCurve::apply_matrix(const std::vector<Rat>& m) const {
    int d = dim();
    if (static_cast<int>(m.size()) != d * d) throw std::invalid_argument("apply_matrix: size mismatch");
    std::vector<RatPoly> out(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        RatPoly acc;
        for (int j = 0; j < d; ++j) acc = acc + m[static_cast<size_t>(i) * d + j] * comps_[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = acc;
    }
    return PolyCurve(std::move(out));
}

PolyCurve PolyCurve::reparametrize_affine(const Rat& a, const Rat& b) const {
    std::vector<RatPoly> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) out.push_back(c.compose_affine(a, b));
    return PolyCurve(std::move(out));
}

}  // namespace arclab
