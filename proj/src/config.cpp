#include "qboltz/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qboltz {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

const json& field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) malformed(std::string("missing field '") + key + "'");
    return *it;
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) malformed(where + " must be a string");
    return v.get<std::string>();
}

Rational as_rational(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    return parse_rational(as_string(v, where));
}

int as_positive_int(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long>() < 1) malformed(where + " must be a positive integer");
    return v.get<int>();
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
    if (!v.is_array()) malformed(where + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : v) out.push_back(as_string(item, where));
    return out;
}

ExactComplex as_complex(const json& v, const std::string& where) {
    if (v.is_array()) {
        if (v.size() != 2) malformed(where + " must be [re, im]");
        return {as_rational(v[0], where), as_rational(v[1], where)};
    }
    return as_rational(v, where);
}

}  // namespace

const LabelSpace& RunConfig::require_labels() const {
    if (!labels) malformed("config declares no times/momenta/dispersion");
    return *labels;
}

Spectrum parse_spectrum(const json& doc) {
    if (!doc.is_object()) malformed("config must be a JSON object");
    const json& levels = field(doc, "levels");
    if (!levels.is_array()) malformed("'levels' must be an array");
    std::vector<Level> out;
    for (const auto& level : levels) {
        if (!level.is_object()) malformed("each level must be an object");
        out.push_back({as_string(field(level, "label"), "level label"),
                       as_rational(field(level, "energy"), "level energy")});
    }
    return Spectrum(std::move(out));
}

RunConfig parse_config(const json& doc) {
    RunConfig cfg;
    cfg.spectrum = parse_spectrum(doc);

    const bool has_grid = doc.contains("time_grid");
    std::size_t points = 0;
    Rational dt{1};
    if (has_grid) {
        const json& grid = doc["time_grid"];
        if (!grid.is_object()) malformed("'time_grid' must be an object");
        points = static_cast<std::size_t>(as_positive_int(field(grid, "points"), "time_grid.points"));
        if (grid.contains("dt")) dt = as_rational(grid["dt"], "time_grid.dt");
        if (sgn(dt) <= 0) malformed("time_grid.dt must be positive");
    }

    if (doc.contains("momenta") || doc.contains("dispersion") || doc.contains("times")) {
        std::vector<std::string> times;
        if (doc.contains("times")) {
            times = string_list(doc["times"], "'times'");
        } else {
            for (std::size_t i = 0; i < points; ++i) times.push_back("t" + std::to_string(i));
        }
        auto momenta = string_list(field(doc, "momenta"), "'momenta'");
        const json& disp = field(doc, "dispersion");
        if (!disp.is_object()) malformed("'dispersion' must be an object");
        std::map<std::string, Rational> dispersion;
        for (const auto& [k, v] : disp.items()) dispersion.emplace(k, as_rational(v, "dispersion value"));
        cfg.labels.emplace(std::move(times), std::move(momenta), dispersion);
    }

    if (doc.contains("frequencies")) {
        const json& f = doc["frequencies"];
        if (!f.is_array()) malformed("'frequencies' must be an array");
        for (const auto& v : f) cfg.frequencies.push_back(as_rational(v, "frequency"));
    }

    if (has_grid || doc.contains("couplings")) {
        const LabelSpace& labels = cfg.require_labels();
        if (!has_grid) malformed("'couplings' given without 'time_grid'");
        if (points > labels.times().size()) malformed("time_grid has more points than declared times");
        InteractionSpec spec;
        spec.points = points;
        spec.dt = dt;
        if (doc.contains("couplings")) {
            const json& couplings = doc["couplings"];
            if (!couplings.is_object()) malformed("'couplings' must be an object");
            for (const auto& [key, value] : couplings.items()) {
                auto comma = key.find(',');
                if (comma == std::string::npos) malformed("coupling key '" + key + "' must be \"omega,k\"");
                Rational omega = parse_rational(key.substr(0, comma));
                std::uint32_t k = labels.momentum_index(key.substr(comma + 1));
                spec.couplings[{omega, k}] = as_complex(value, "coupling '" + key + "'");
            }
        }
        cfg.interaction = std::move(spec);
    }

    if (doc.contains("oracle")) {
        const json& o = doc["oracle"];
        if (!o.is_object()) malformed("'oracle' must be an object");
        if (o.contains("nmax")) cfg.cutoff = as_positive_int(o["nmax"], "oracle.nmax");
        if (o.contains("max_dimension"))
            cfg.max_dimension = static_cast<std::size_t>(as_positive_int(o["max_dimension"], "oracle.max_dimension"));
    }
    if (doc.contains("bounds")) {
        const json& b = doc["bounds"];
        if (!b.is_object()) malformed("'bounds' must be an object");
        if (b.contains("max_word_len")) cfg.max_word_len = as_positive_int(b["max_word_len"], "bounds.max_word_len");
        if (b.contains("max_order")) cfg.max_order = as_positive_int(b["max_order"], "bounds.max_order");
        if (b.contains("dyson_order")) cfg.dyson_order = as_positive_int(b["dyson_order"], "bounds.dyson_order");
    }
    if (doc.contains("tolerance")) {
        const json& t = doc["tolerance"];
        if (t.is_number()) {
            cfg.tolerance = t.get<double>();
        } else {
            try {
                cfg.tolerance = std::stod(as_string(t, "tolerance"));
            } catch (const std::logic_error&) {
                malformed("tolerance is not a number");
            }
        }
        if (!(*cfg.tolerance > 0)) malformed("tolerance must be positive");
    }
    if (doc.contains("psi")) {
        const json& p = doc["psi"];
        if (!p.is_array() || p.size() != cfg.spectrum.dimension())
            malformed("'psi' must list one amplitude per level");
        std::vector<ExactComplex> psi;
        for (const auto& v : p) psi.push_back(as_complex(v, "psi amplitude"));
        cfg.psi = std::move(psi);
    }
    if (doc.contains("words")) cfg.words = string_list(doc["words"], "'words'");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) malformed("cannot read config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        malformed("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

void check_interaction(const InteractionSpec& spec, const GenericSystem& system) {
    for (const auto& [key, g] : spec.couplings) {
        if (!system.has_frequency(key.first))
            throw Error(ErrorCode::UnknownFrequency, "coupling for omega = " + key.first.get_str() +
                                                         ", which is not a Bohr frequency");
    }
}

EntangledWord parse_word(const std::string& text, const LabelSpace& labels) {
    EntangledWord word;
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_space();
    if (text.compare(pos, std::string::npos, "1") == 0) return word;
    while (skip_space(), pos < text.size()) {
        if (text[pos] != 'c') malformed("word '" + text + "': expected c or c* at offset " + std::to_string(pos));
        ++pos;
        Letter letter;
        if (pos < text.size() && text[pos] == '*') {
            letter.creator = true;
            ++pos;
        }
        if (pos >= text.size() || text[pos] != '(') malformed("word '" + text + "': expected '('");
        auto close = text.find(')', pos);
        if (close == std::string::npos) malformed("word '" + text + "': unterminated label");
        std::vector<std::string> parts;
        std::stringstream inner(text.substr(pos + 1, close - pos - 1));
        for (std::string part; std::getline(inner, part, ',');) {
            auto b = part.find_first_not_of(" \t");
            auto e = part.find_last_not_of(" \t");
            parts.push_back(b == std::string::npos ? "" : part.substr(b, e - b + 1));
        }
        if (parts.size() != 3) malformed("word '" + text + "': a label is (omega,t,k)");
        letter.label = labels.label(parse_rational(parts[0]), parts[1], parts[2]);
        word.push_back(letter);
        pos = close + 1;
    }
    return word;
}

}  // namespace qboltz
