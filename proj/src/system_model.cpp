#include "qboltz/system_model.hpp"

#include <algorithm>
#include <set>

namespace qboltz {

Spectrum::Spectrum(std::vector<Level> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw Error(ErrorCode::MalformedInput, "spectrum has no levels");
    std::set<std::string> seen;
    for (const Level& level : levels_)
        if (!seen.insert(level.label).second)
            throw Error(ErrorCode::MalformedInput, "duplicate level label '" + level.label + "'");
    std::sort(levels_.begin(), levels_.end(), [](const Level& a, const Level& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.label < b.label;
    });
}

Spectrum Spectrum::from_energies(const std::vector<Rational>& energies) {
    std::vector<Level> levels;
    levels.reserve(energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i) levels.push_back({"e" + std::to_string(i), energies[i]});
    return Spectrum(std::move(levels));
}

std::size_t Spectrum::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < levels_.size(); ++i)
        if (levels_[i].label == label) return i;
    throw Error(ErrorCode::UnknownLabel, "no level labelled '" + label + "'");
}

std::vector<FrequencyGroup> enumerate_bohr_frequencies(const Spectrum& spectrum) {
    std::map<Rational, std::vector<LevelPair>> groups;
    const auto& levels = spectrum.levels();
    for (std::size_t i = 0; i < levels.size(); ++i)
        for (std::size_t j = 0; j < levels.size(); ++j)
            if (levels[j].energy > levels[i].energy)
                groups[levels[j].energy - levels[i].energy].push_back({i, j});
    std::vector<FrequencyGroup> out;
    out.reserve(groups.size());
    for (auto& [value, pairs] : groups) out.push_back({value, std::move(pairs)});
    return out;
}

std::string_view rejection_reason_name(RejectionReason reason) {
    switch (reason) {
        case RejectionReason::DegenerateSpectrum: return "DEGENERATE_SPECTRUM";
        case RejectionReason::DuplicateBohrFrequency: return "DUPLICATE_BOHR_FREQUENCY";
    }
    return "UNKNOWN";
}

std::vector<Rational> GenericSystem::frequencies() const {
    std::vector<Rational> out;
    out.reserve(transitions_.size());
    for (const auto& entry : transitions_) out.push_back(entry.first);
    return out;
}

const std::vector<LevelPair>& GenericSystem::transitions(const Rational& omega) const {
    auto it = transitions_.find(omega);
    if (it == transitions_.end())
        throw Error(ErrorCode::UnknownFrequency, "omega = " + omega.get_str() + " is not a Bohr frequency");
    return it->second;
}

BohrFrequency GenericSystem::bohr_frequency(const Rational& omega) const {
    const auto& pairs = transitions(omega);
    if (pairs.size() != 1)
        throw Error(ErrorCode::NotGeneric, "omega = " + omega.get_str() + " is realized by several level pairs");
    const LevelPair p = pairs.front();
    return {omega, spectrum_.levels()[p.lower].label, spectrum_.levels()[p.upper].label, p};
}

ValidationResult validate_generic(const Spectrum& spectrum) {
    RejectionReport report;
    const auto& levels = spectrum.levels();
    std::map<Rational, std::vector<std::string>> by_energy;
    for (const auto& level : levels) by_energy[level.energy].push_back(level.label);
    for (auto& [energy, labels] : by_energy)
        if (labels.size() > 1) report.degenerate_energies.push_back({energy, std::move(labels)});
    auto groups = enumerate_bohr_frequencies(spectrum);
    for (const auto& group : groups) {
        if (group.pairs.size() <= 1) continue;
        RejectionReport::DuplicateFrequency dup{group.value, {}};
        for (const LevelPair& p : group.pairs) dup.pairs.emplace_back(levels[p.lower].label, levels[p.upper].label);
        report.duplicate_frequencies.push_back(std::move(dup));
    }
    if (!report.degenerate_energies.empty()) report.reasons.push_back(RejectionReason::DegenerateSpectrum);
    if (!report.duplicate_frequencies.empty()) report.reasons.push_back(RejectionReason::DuplicateBohrFrequency);
    if (!report.reasons.empty()) return report;

    GenericSystem system;
    system.spectrum_ = spectrum;
    for (auto& group : groups) system.transitions_.emplace(std::move(group.value), std::move(group.pairs));
    return system;
}

GenericSystem force_system(const Spectrum& spectrum) {
    auto result = validate_generic(spectrum);
    if (auto* system = std::get_if<GenericSystem>(&result)) return *system;
    GenericSystem system;
    system.spectrum_ = spectrum;
    system.generic_ = false;
    for (auto& group : enumerate_bohr_frequencies(spectrum))
        system.transitions_.emplace(std::move(group.value), std::move(group.pairs));
    return system;
}

}  // namespace qboltz
