#include "arclab/corpus.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "arclab/rng.hpp"

namespace arclab {

PolyCurve moment_curve(int d) {
    std::vector<RatPoly> comps;
    comps.reserve(static_cast<size_t>(d));
    for (int j = 1; j <= d; ++j) comps.push_back(RatPoly::monomial(j, Rat(1)));
    return PolyCurve(std::move(comps));
}

std::vector<CorpusEntry> corpus_list() {
    return {
        {"moment2", "(t, t^2)"},
        {"moment3", "(t, t^2, t^3)"},
        {"moment4", "(t, t^2, t^3, t^4)"},
        {"moment5", "(t, t^2, t^3, t^4, t^5)"},
        {"cusp", "(t^2, t^3)"},
        {"cubic3", "(t, t^3 - 3t)"},
        {"mixed4", "(t, t^2, t^4)"},
        {"rand6", "(t, q(t)) with q a seeded random degree-6 polynomial"},
    };
}

PolyCurve corpus_curve(const std::string& name, uint64_t seed) {
    if (name == "moment2") return moment_curve(2);
    if (name == "moment3") return moment_curve(3);
    if (name == "moment4") return moment_curve(4);
    if (name == "moment5") return moment_curve(5);
    if (name == "cusp")
        return PolyCurve({RatPoly::monomial(2, Rat(1)), RatPoly::monomial(3, Rat(1))});
    if (name == "cubic3")
        return PolyCurve({RatPoly::identity(),
                          RatPoly(std::vector<Rat>{Rat(0), Rat(-3), Rat(0), Rat(1)})});
    if (name == "mixed4")
        return PolyCurve({RatPoly::identity(), RatPoly::monomial(2, Rat(1)), RatPoly::monomial(4, Rat(1))});
    if (name == "rand6") {
        CounterRng rng(seed, /*stream=*/0xc0ffee);
        std::vector<Rat> coeffs(7);
        for (int k = 0; k <= 6; ++k) {
            // integer coefficients in [-8, 8], nonzero leading coefficient
            long v = static_cast<long>(rng.next_below(17)) - 8;
            if (k == 6 && v == 0) v = 3;
            coeffs[static_cast<size_t>(k)] = Rat(v);
        }
        return PolyCurve({RatPoly::identity(), RatPoly(std::move(coeffs))});
    }
    throw std::invalid_argument("unknown corpus curve: " + name);
}

PolyCurve load_curve_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("curve config: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("coeffs"))
        throw std::invalid_argument("curve config: need {dim, coeffs}");
    int dim = doc["dim"].get<int>();
    const auto& lists = doc["coeffs"];
    if (!lists.is_array() || static_cast<int>(lists.size()) != dim)
        throw std::invalid_argument("curve config: coeffs must have exactly dim lists");
    std::vector<RatPoly> comps;
    for (const auto& list : lists) {
        if (!list.is_array()) throw std::invalid_argument("curve config: coefficient list expected");
        std::vector<Rat> coeffs;
        for (const auto& item : list) {
            std::string token;
            if (item.is_string()) token = item.get<std::string>();
            else if (item.is_number_integer()) token = std::to_string(item.get<long long>());
            else throw std::invalid_argument("curve config: coefficients are \"p/q\" strings or integers");
            auto r = parse_rat(token);
            if (!r) throw std::invalid_argument("curve config: malformed coefficient '" + token + "'");
            coeffs.push_back(std::move(*r));
        }
        comps.push_back(RatPoly(std::move(coeffs)));
    }
    return PolyCurve(std::move(comps));
}

PolyCurve resolve_curve(const std::string& name_or_path, uint64_t seed) {
    auto read_file = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    if (std::filesystem::exists(name_or_path)) return load_curve_json(read_file(name_or_path));
    if (const char* dir = std::getenv("ARCLAB_CORPUS_DIR")) {
        std::filesystem::path candidate = std::filesystem::path(dir) / (name_or_path + ".json");
        if (std::filesystem::exists(candidate)) return load_curve_json(read_file(candidate));
    }
    return corpus_curve(name_or_path, seed);
}

}  // namespace arclab
