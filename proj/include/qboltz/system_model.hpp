// system_model.hpp — discrete spectra, the genericity test, Bohr frequencies, σ±_ω.
//
// A spectrum is generic when it is non-degenerate and every positive energy
// difference is realized by exactly one ordered level pair. Genericity is
// decided by exact rational comparison.

#pragma once

#include "qboltz/error.hpp"
#include "qboltz/exact.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qboltz {

struct Level {
    std::string label;
    Rational energy;
};

/// Levels sorted by (energy, label). Basis index i of every system matrix is levels()[i].
class Spectrum {
public:
    Spectrum() = default;
    /// Throws MalformedInput on an empty list or duplicate labels.
    explicit Spectrum(std::vector<Level> levels);

    /// Convenience: labels "e0", "e1", ... in input order.
    static Spectrum from_energies(const std::vector<Rational>& energies);

    const std::vector<Level>& levels() const { return levels_; }
    std::size_t dimension() const { return levels_.size(); }
    std::size_t index_of(const std::string& label) const;
    const Rational& energy(std::size_t index) const { return levels_.at(index).energy; }

private:
    std::vector<Level> levels_;
};

/// Ordered pair of basis indices with energy(upper) > energy(lower).
struct LevelPair {
    std::size_t lower = 0;
    std::size_t upper = 0;
    friend bool operator==(const LevelPair&, const LevelPair&) = default;
};

struct FrequencyGroup {
    Rational value;
    std::vector<LevelPair> pairs;
};

/// All positive pairwise differences, ascending, each with every pair realizing it.
std::vector<FrequencyGroup> enumerate_bohr_frequencies(const Spectrum& spectrum);

struct BohrFrequency {
    Rational value;
    std::string lower;  // 1_ω
    std::string upper;  // 2_ω
    LevelPair indices;
};

enum class RejectionReason { DegenerateSpectrum, DuplicateBohrFrequency };

std::string_view rejection_reason_name(RejectionReason reason);

struct RejectionReport {
    struct Degeneracy {
        Rational energy;
        std::vector<std::string> labels;
    };
    struct DuplicateFrequency {
        Rational value;
        std::vector<std::pair<std::string, std::string>> pairs;  // (lower, upper)
    };
    std::vector<RejectionReason> reasons;
    std::vector<Degeneracy> degenerate_energies;
    std::vector<DuplicateFrequency> duplicate_frequencies;
};

class GenericSystem {
public:
    const Spectrum& spectrum() const { return spectrum_; }
    std::size_t dimension() const { return spectrum_.dimension(); }

    /// False only for systems built by force_system from a non-generic spectrum.
    bool is_generic() const { return generic_; }

    /// The set F, ascending.
    std::vector<Rational> frequencies() const;
    bool has_frequency(const Rational& omega) const { return transitions_.contains(omega); }

    /// Level pairs behind ω; exactly one for a generic system.
    const std::vector<LevelPair>& transitions(const Rational& omega) const;

    /// Throws UnknownFrequency if ω ∉ F and NotGeneric if ω has several pairs.
    BohrFrequency bohr_frequency(const Rational& omega) const;

private:
    friend std::variant<GenericSystem, RejectionReport> validate_generic(const Spectrum&);
    friend GenericSystem force_system(const Spectrum&);

    Spectrum spectrum_;
    std::map<Rational, std::vector<LevelPair>> transitions_;
    bool generic_ = true;
};

using ValidationResult = std::variant<GenericSystem, RejectionReport>;

ValidationResult validate_generic(const Spectrum& spectrum);

/// Bypasses the genericity gate (counterexample demos). σ±_ω then sums over
/// every pair realizing ω.
GenericSystem force_system(const Spectrum& spectrum);

/// σ⁺_ω = Σ |2_ω⟩⟨1_ω| over the pairs realizing ω.
template <typename Scalar>
Matrix<Scalar> sigma_plus(const GenericSystem& system, const Rational& omega) {
    if (!system.has_frequency(omega))
        throw Error(ErrorCode::UnknownFrequency, "omega = " + omega.get_str() + " is not a Bohr frequency");
    const auto d = static_cast<Eigen::Index>(system.dimension());
    Matrix<Scalar> m = Matrix<Scalar>::Zero(d, d);
    for (const LevelPair& p : system.transitions(omega))
        m(static_cast<Eigen::Index>(p.upper), static_cast<Eigen::Index>(p.lower)) = Scalar(1);
    return m;
}

/// σ⁻_ω = (σ⁺_ω)†; entries are real so a transpose suffices.
template <typename Scalar>
Matrix<Scalar> sigma_minus(const GenericSystem& system, const Rational& omega) {
    return sigma_plus<Scalar>(system, omega).transpose();
}

/// σ⁺_ω σ⁻_ω, the projector onto C|2_ω⟩ for a generic system.
template <typename Scalar>
Matrix<Scalar> upper_projector(const GenericSystem& system, const Rational& omega) {
    const auto d = static_cast<Eigen::Index>(system.dimension());
    Matrix<Scalar> m = Matrix<Scalar>::Zero(d, d);
    // σ⁺σ⁻ = Σ_{p,q} |u_p⟩⟨l_p|l_q⟩⟨u_q| — only pairs sharing a lower level couple.
    const auto& pairs = system.transitions(omega);
    for (const LevelPair& p : pairs)
        for (const LevelPair& q : pairs)
            if (p.lower == q.lower)
                m(static_cast<Eigen::Index>(p.upper), static_cast<Eigen::Index>(q.upper)) += Scalar(1);
    return m;
}

}  // namespace qboltz
