// config.hpp — the JSON run configuration shared by the CLI and the tests.
//
//   {
//     "levels":     [{"label": "g", "energy": "0"}, ...],
//     "times":      ["t0", "t1"],
//     "momenta":    ["k1", "k2"],
//     "dispersion": {"k1": "1", "k2": "2"},
//     "frequencies": ["1", "2"],                       optional, defaults to all of F
//     "couplings":  {"1,k1": ["1", "0"], ...},          optional, missing entries are zero
//     "time_grid":  {"points": 3, "dt": "1/10"},        optional
//     "oracle":     {"nmax": 3, "max_dimension": 20000},
//     "bounds":     {"max_word_len": 4, "max_order": 3, "dyson_order": 3},
//     "tolerance":  "1e-10",
//     "psi":        [["0","0"], ["1","0"]],             optional system state for moments/dyson
//     "words":      ["c(1,t0,k1) c*(1,t0,k1)"]          optional moment words
//   }
//
// Any schema violation is a MalformedInput error.

#pragma once

#include "qboltz/algebra.hpp"
#include "qboltz/dyson.hpp"
#include "qboltz/system_model.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qboltz {

struct RunConfig {
    Spectrum spectrum;
    std::optional<LabelSpace> labels;
    std::vector<Rational> frequencies;  // empty: all of F
    std::optional<InteractionSpec> interaction;
    int cutoff = 3;
    std::size_t max_dimension = 20000;
    int max_word_len = 4;
    int max_order = 3;
    int dyson_order = 3;
    std::optional<double> tolerance;  // each command has its own default
    std::optional<std::vector<ExactComplex>> psi;
    std::vector<std::string> words;

    /// Throws MalformedInput when the config declares no times/momenta/dispersion.
    const LabelSpace& require_labels() const;
};

Spectrum parse_spectrum(const nlohmann::json& doc);
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Couplings are keyed by Bohr frequency, so they can only be checked against a system.
void check_interaction(const InteractionSpec& spec, const GenericSystem& system);

/// "c(ω,t,k) c*(ω,t,k) …", the format produced by describe(); "" or "1" is the empty word.
EntangledWord parse_word(const std::string& text, const LabelSpace& labels);

}  // namespace qboltz
