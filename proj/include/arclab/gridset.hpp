#pragma once

#include <span>
#include <vector>

namespace arclab {

/// Axis-aligned box, corner + sides.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
    double volume() const {
        double v = 1;
        for (size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }
    bool contains(std::span<const double> x) const {
        for (size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }
};

/// Finite union of pairwise-disjoint axis-aligned boxes with exact Lebesgue
/// measure. Overlapping insertions are rejected.
class GridSet {
  public:
    explicit GridSet(int dim) : dim_(dim) {}
    static GridSet box(std::vector<double> lo, std::vector<double> hi);

    void add_box(std::vector<double> lo, std::vector<double> hi);

    int dim() const { return dim_; }
    size_t size() const { return boxes_.size(); }
    bool empty() const { return boxes_.empty(); }
    double measure() const;
    bool contains(std::span<const double> x) const;
    const std::vector<Box>& boxes() const { return boxes_; }

    GridSet translated(std::span<const double> shift) const;
    /// Image under the diagonal map x_i -> factors[i] * x_i (factors nonzero).
    GridSet scaled_axes(std::span<const double> factors) const;

  private:
    int dim_;
    std::vector<Box> boxes_;
};

}  // namespace arclab
