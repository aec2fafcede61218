#include "arclab/gridset.hpp"

#include <stdexcept>

namespace arclab {

GridSet GridSet::box(std::vector<double> lo, std::vector<double> hi) {
    GridSet g(static_cast<int>(lo.size()));
    g.add_box(std::move(lo), std::move(hi));
    return g;
}

void GridSet::add_box(std::vector<double> lo, std::vector<double> hi) {
    if (static_cast<int>(lo.size()) != dim_ || static_cast<int>(hi.size()) != dim_)
        throw std::invalid_argument("GridSet::add_box: dimension mismatch");
    for (int i = 0; i < dim_; ++i)
        if (!(lo[static_cast<size_t>(i)] < hi[static_cast<size_t>(i)]))
            throw std::invalid_argument("GridSet::add_box: empty box");
    Box candidate{std::move(lo), std::move(hi)};
    for (const Box& b : boxes_) {
        bool overlap = true;
        for (int i = 0; i < dim_; ++i) {
            size_t si = static_cast<size_t>(i);
            if (candidate.hi[si] <= b.lo[si] || candidate.lo[si] >= b.hi[si]) {
                overlap = false;
                break;
            }
        }
        if (overlap) throw std::invalid_argument("GridSet::add_box: boxes must be pairwise disjoint");
    }
    boxes_.push_back(std::move(candidate));
}

double GridSet::measure() const {
    double m = 0;
    for (const Box& b : boxes_) m += b.volume();
    return m;
}

bool GridSet::contains(std::span<const double> x) const {
    for (const Box& b : boxes_)
        if (b.contains(x)) return true;
    return false;
}

GridSet GridSet::translated(std::span<const double> shift) const {
    GridSet out(dim_);
    for (const Box& b : boxes_) {
        Box nb = b;
        for (int i = 0; i < dim_; ++i) {
            nb.lo[static_cast<size_t>(i)] += shift[static_cast<size_t>(i)];
            nb.hi[static_cast<size_t>(i)] += shift[static_cast<size_t>(i)];
        }
        out.boxes_.push_back(std::move(nb));
    }
    return out;
}

GridSet GridSet::scaled_axes(std::span<const double> factors) const {
    GridSet out(dim_);
    for (const Box& b : boxes_) {
        Box nb = b;
        for (int i = 0; i < dim_; ++i) {
            size_t si = static_cast<size_t>(i);
            double f = factors[si];
            if (f == 0) throw std::invalid_argument("GridSet::scaled_axes: zero factor");
            nb.lo[si] = b.lo[si] * f;
            nb.hi[si] = b.hi[si] * f;
            if (nb.lo[si] > nb.hi[si]) std::swap(nb.lo[si], nb.hi[si]);
        }
        out.boxes_.push_back(std::move(nb));
    }
    return out;
}

}  // namespace arclab
