#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arclab/averaging.hpp"
#include "arclab/bands.hpp"

namespace arclab {

enum class TowerVariant { MlE, MlF };

struct TowerParams {
    MuMeasure mu;
    double c = 0.125;  // the construction constant
    double alpha1 = 0, beta1 = 0, alpha2 = 0, beta2 = 0;
    int beam = 48;    // retained tuples per level
    int branch = 3;   // continuation points per surviving tuple
    uint64_t seed = 0;
};

struct TowerLevel {
    int level = 0;  // 1-based
    double demanded_mass = 0;
    double min_admissible_mass = 0;  // over retained tuples
    bool pass = false;
    std::vector<std::vector<double>> tuples;
};

struct TupleTower {
    TowerVariant variant = TowerVariant::MlE;
    std::vector<double> x0;
    std::vector<TowerLevel> levels;
    bool complete = false;
    std::string shortfall;  // failing level description when incomplete
    TowerParams params;
};

/// Greedy discrete analogue of the tuple-tower selection: at each level the
/// admissible parameter set {s : x(t) +- P(s) in target} is resolved exactly
/// on the box sets, the floor and near-point excisions are applied, and the
/// surviving mu-mass is compared against the demanded level. MlE towers have
/// 2d levels over (E1, E2, F); MlF towers have 2d-1 levels over (E, F1, F2).
TupleTower build_tuple_tower(const PolyCurve& curve, Interval i, const GridSet& set_a, const GridSet& set_b,
                             const GridSet& set_f, TowerVariant variant, const TowerParams& params);

/// The floor/pairwise-separation bullet checked exactly on stored tuples.
struct TowerInvariantReport {
    bool floors_ok = true;
    bool separations_ok = true;
    std::vector<std::string> violations;
};
TowerInvariantReport verify_tower_invariants(const TupleTower& tower);

}  // namespace arclab
