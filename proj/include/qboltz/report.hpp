#pragma once

#include <json.hpp>

#include <cstddef>
#include <string>

namespace qboltz {

/// Outcome of one check suite. Serialized as
/// {check, parameters, counts, violations: [...], max_deviation}.
struct Report {
    std::string check;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json counts = nlohmann::json::object();
    nlohmann::json violations = nlohmann::json::array();
    double max_deviation = 0.0;
    /// Violations beyond this many are counted but not stored.
    std::size_t violation_limit = 16;

    bool passed() const { return total_violations == 0; }
    void add_violation(nlohmann::json witness) {
        ++total_violations;
        if (violations.size() < violation_limit) violations.push_back(std::move(witness));
    }
    std::size_t violation_count() const { return total_violations; }

    nlohmann::json to_json() const;

private:
    std::size_t total_violations = 0;
};

}  // namespace qboltz
