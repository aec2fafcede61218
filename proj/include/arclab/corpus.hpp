#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arclab/curve.hpp"

namespace arclab {

/// Built-in curve corpus. Deterministic; `rand6` depends on the seed.
inline constexpr const char* kCorpusVersion = "1";

PolyCurve moment_curve(int d);

struct CorpusEntry {
    std::string name;
    std::string description;
};

std::vector<CorpusEntry> corpus_list();

/// Resolves a corpus name ("moment2".."moment5", "cusp", "cubic3", "mixed4",
/// "rand6"); throws std::invalid_argument for unknown names.
PolyCurve corpus_curve(const std::string& name, uint64_t seed = 0);

/// Curve config record: {"dim": d, "coeffs": [d coefficient lists]} with
/// rationals as "p/q" strings (plain integers also accepted). Throws
/// std::invalid_argument on malformed input (including zero denominators).
PolyCurve load_curve_json(const std::string& text);

/// Resolution order: explicit file path, then $ARCLAB_CORPUS_DIR/<name>.json,
/// then the built-in corpus.
PolyCurve resolve_curve(const std::string& name_or_path, uint64_t seed = 0);

}  // namespace arclab
