#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arclab/curve.hpp"
#include "arclab/interval.hpp"
#include "arclab/roots.hpp"

namespace arclab {

/// Sampling truncation for unbounded intervals: |s - b| <= 2^40.
inline constexpr double kTruncationRadius = 1099511627776.0;  // 2^40
inline constexpr double kTruncationFloor = 1.0 / kTruncationRadius;

/// One output piece of procedure D1. per_root[k] describes the comparability
/// |s - eta_k| ~ A * |s - b|^delta on the piece (delta in {0,1}); worst_ratio
/// is the largest measured deviation from A (target <= 2).
struct D1Piece {
    Interval interval;
    double b = 0;
    bool b_defined = true;
    struct RootComparability {
        int delta = 0;
        double a = 1.0;
    };
    std::vector<RootComparability> per_root;
    double worst_ratio = 1.0;
};

struct D1Options {
    double max_ratio_sq = 4.0;  // accept sup/inf <= 4 (ratio in [1/2,2] about the geometric mean)
    int max_depth = 120;
};

/// Nearest-center power-comparability decomposition of J with respect to the
/// given complex numbers. Pieces are pairwise disjoint open intervals covering
/// J up to finitely many points, reported flattened and sorted. An empty root
/// set returns J unchanged with b flagged undefined.
std::vector<D1Piece> d1_decompose(Interval j, const RootSet& etas, const D1Options& opts = {});

/// One output piece of procedure D2: a gap (far from every root radius in
/// |s-b| scale) or a dyadic shell |s-b| in [level, 2*level].
struct GapDyadicPiece {
    enum class Kind { Gap, Dyadic };
    Interval interval;
    Kind kind = Kind::Gap;
    std::vector<int> eps;  // gap: per-root exponent, |s-b-beta_k| ~ |beta_k|^(1-eps)|s-b|^eps
    double level = 0;      // dyadic: D_j
};

/// Gap/dyadic decomposition of J around center b with respect to betas
/// (roots expressed relative to b). Requires betas sorted by |b + beta_k|
/// ascending.
std::vector<GapDyadicPiece> d2_decompose(Interval j, double b, const RootSet& betas);

struct LineageEntry {
    int step = 0;
    enum class Tag { Step0, Gap, Dyadic, FinalSplit } tag = Tag::Step0;
    double b = 0;
};

/// Output interval of the full decomposition pipeline, carrying the measured
/// comparability |L_P(s)| ~ A |s - b|^K with constants (c_lo, c_hi).
struct DecompInterval {
    Interval interval;
    double b = 0;
    bool b_defined = true;
    int K = 0;
    double A = 1.0;
    double c_lo = 1.0;
    double c_hi = 1.0;
    std::vector<LineageEntry> lineage;
    bool flagged = false;
    std::string flag;
};

struct DwResult {
    std::vector<DecompInterval> leaves;
    std::vector<Interval> initial_pieces;  // minors single-signed on each
    long piece_bound = 0;                  // a-priori bound from (N, d)
    bool transformed = false;              // component mix applied to clear an identically-zero minor
    std::vector<Rat> mix_matrix;           // row-major, when transformed
};

struct DwOptions {
    double root_tol = 1e-12;
    int grid = 129;
};

/// The full pipeline: initial single-signed split, D1 against the torsion
/// zeros, then alternating D2/D1 steps against the minor ladder, a final split
/// at ancestor centers, and a measured (K, A, c_lo, c_hi) fit per leaf.
/// Throws std::domain_error for degenerate curves (torsion identically zero).
DwResult dw_decompose(const PolyCurve& curve, const DwOptions& opts = {});

/// Interval split making L_1..L_d single-signed on every piece.
std::vector<Interval> initial_single_signed_split(const PolyCurve& curve, double root_tol = 1e-12);

/// Min and max of |L_P(s)| / (A |s-b|^K) over a geometric grid in |s-b|.
std::pair<double, double> verify_torsion_comparability(const DecompInterval& piece, const PolyCurve& curve,
                                                       int grid);

/// The full (s, ratio) profile behind verify_torsion_comparability, for plot
/// emission.
std::vector<std::pair<double, double>> comparability_profile(const DecompInterval& piece,
                                                             const PolyCurve& curve, int grid);

/// Min over seeded sample tuples of
/// |J_P(t)| / (prod_k |L_P(t_k)|^{1/d} * prod_{l<k} |t_k - t_l|).
double verify_geometric_inequality(const DecompInterval& piece, const PolyCurve& curve, int samples,
                                   uint64_t seed);

/// Monte Carlo probe of the preimage count of Phi^eps(t) = sum eps_j P(t_j):
/// quantizes images into boxes of side `quantum` and reports the largest
/// number of distinct (up to coordinate permutation) tuple classes per box.
struct CollisionProbeResult {
    int max_multiplicity = 0;
    bool warn = false;  // exceeded d!
    std::vector<std::vector<double>> witnesses;
};
CollisionProbeResult preimage_collision_probe(const DecompInterval& piece, const PolyCurve& curve,
                                              const std::vector<int>& eps, int samples, double quantum,
                                              uint64_t seed);

/// Piece renormalization: b -> 0, interval into (0, infinity) with length 1,
/// amplitude lambda chosen so that lambda^d |L(s)| ~ s^K with constant ~1.
struct NormalizedPiece {
    PolyCurve curve;
    Interval interval;  // length 1, inside (0, inf)
    int K = 0;
    double amplitude = 1.0;  // multiply the curve by this to realize A = 1
    bool truncated = false;
};
NormalizedPiece normalize_piece(const DecompInterval& piece, const PolyCurve& curve);

}  // namespace arclab
