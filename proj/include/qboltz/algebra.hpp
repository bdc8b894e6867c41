// algebra.hpp — exact noncommutative polynomials in system matrices and white-noise factors.
//
// A term is (2π)^p · M ⊗ f_1 f_2 ... f_n where M is a d×d exact matrix acting on the
// system leg and f_i are noise creators b*_L or annihilators b_L on the field leg.
// The two legs commute, so every product fuses its system factors into M and
// concatenates the noise words. Normal ordering uses the bosonic white-noise rule
//
//     b_L b*_L' = b*_L' b_L + 2π [ω = ω'] [t = t'] [k = k'] [ω(k) = ω]
//
// with all deltas realized as Kronecker indicators over finite label sets.

#pragma once

#include "qboltz/exact.hpp"
#include "qboltz/system_model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qboltz {

/// Index of b_ω(t,k). Times and momenta are positions in the declared LabelSpace sets.
struct NoiseLabel {
    Rational omega;
    std::uint32_t time = 0;
    std::uint32_t momentum = 0;

    friend bool operator==(const NoiseLabel& a, const NoiseLabel& b) {
        return a.time == b.time && a.momentum == b.momentum && a.omega == b.omega;
    }
    friend bool operator<(const NoiseLabel& a, const NoiseLabel& b) {
        if (a.omega != b.omega) return a.omega < b.omega;
        if (a.time != b.time) return a.time < b.time;
        return a.momentum < b.momentum;
    }
};

/// Declared time atoms, momentum atoms, and the dispersion ω(k).
class LabelSpace {
public:
    LabelSpace() = default;
    /// Throws UnknownLabel unless `dispersion` is defined for exactly the declared momenta.
    LabelSpace(std::vector<std::string> times, std::vector<std::string> momenta,
               const std::map<std::string, Rational>& dispersion);

    const std::vector<std::string>& times() const { return times_; }
    const std::vector<std::string>& momenta() const { return momenta_; }
    const Rational& dispersion(std::uint32_t momentum) const { return dispersion_.at(momentum); }

    std::uint32_t time_index(const std::string& name) const;
    std::uint32_t momentum_index(const std::string& name) const;

    NoiseLabel label(const Rational& omega, const std::string& time, const std::string& momentum) const;
    bool on_shell(const NoiseLabel& label) const { return dispersion(label.momentum) == label.omega; }
    void check(const NoiseLabel& label) const;

    /// Every label (ω, t, k) for ω in `omegas`, ordered by (ω, t, k).
    std::vector<NoiseLabel> all_labels(const std::vector<Rational>& omegas) const;

    std::string describe(const NoiseLabel& label) const;

private:
    std::vector<std::string> times_;
    std::vector<std::string> momenta_;
    std::vector<Rational> dispersion_;
};

enum class NoiseKind : std::uint8_t { Creator = 0, Annihilator = 1 };

struct NoiseFactor {
    NoiseKind kind = NoiseKind::Creator;
    NoiseLabel label;

    friend bool operator==(const NoiseFactor&, const NoiseFactor&) = default;
    friend bool operator<(const NoiseFactor& a, const NoiseFactor& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.label < b.label;
    }
};

using NoiseWord = std::vector<NoiseFactor>;

/// coeff · (2π)^two_pi_power
struct ScalarExpr {
    ExactComplex coeff{1};
    int two_pi_power = 0;

    bool is_zero() const { return coeff.is_zero(); }
    std::complex<double> evaluate() const;
    friend bool operator==(const ScalarExpr&, const ScalarExpr&) = default;
};

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);

/// The contraction produced by b_L b*_L'. Defaults are the white-noise commutator;
/// the fields exist so mutation tests can corrupt the rule and watch checks fail.
struct ContractionRule {
    int two_pi_power = 1;
    bool match_frequency = true;
    bool match_time = true;
    bool match_momentum = true;
    bool require_on_shell = true;

    bool contracts(const NoiseLabel& annihilated, const NoiseLabel& created, const LabelSpace& labels) const;
};

struct Term {
    ExactMatrix system;
    NoiseWord noise;
    int two_pi_power = 0;
};

/// Finite sum of canonical terms. Terms sharing (noise word, 2π power) are merged by
/// adding their system matrices; terms with a zero matrix are dropped.
class Polynomial {
public:
    using Key = std::pair<NoiseWord, int>;

    explicit Polynomial(std::size_t dimension = 1) : dimension_(dimension) {}

    static Polynomial zero(std::size_t dimension) { return Polynomial(dimension); }
    static Polynomial identity(std::size_t dimension);
    static Polynomial monomial(ExactMatrix system, NoiseWord noise = {}, int two_pi_power = 0);

    std::size_t dimension() const { return dimension_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const ExactMatrix& system, NoiseWord noise, int two_pi_power);
    void add_term(const Term& term) { add_term(term.system, term.noise, term.two_pi_power); }

    std::vector<Term> terms() const;
    const std::map<Key, ExactMatrix>& raw_terms() const { return terms_; }

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const ScalarExpr& scalar);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const ScalarExpr& s) { return a *= s; }
    friend Polynomial operator*(const ScalarExpr& s, Polynomial a) { return a *= s; }

    friend bool operator==(const Polynomial& a, const Polynomial& b);

private:
    void require_dimension(const Polynomial& other) const;

    std::size_t dimension_;
    std::map<Key, ExactMatrix> terms_;
};

/// c_ω(t,k) = σ⁺_ω ⊗ b_ω(t,k)
Polynomial entangled_annihilate(const GenericSystem& system, const LabelSpace& labels, const NoiseLabel& label);
Polynomial entangled_annihilate(const GenericSystem& system, const LabelSpace& labels, const Rational& omega,
                                const std::string& time, const std::string& momentum);
/// c*_ω(t,k) = σ⁻_ω ⊗ b*_ω(t,k)
Polynomial entangled_create(const GenericSystem& system, const LabelSpace& labels, const NoiseLabel& label);
Polynomial entangled_create(const GenericSystem& system, const LabelSpace& labels, const Rational& omega,
                            const std::string& time, const std::string& momentum);

Polynomial multiply(const Polynomial& a, const Polynomial& b);
Polynomial adjoint(const Polynomial& p);

enum class RewriteOrder { Leftmost, Rightmost, Seeded };

struct NormalOrderOptions {
    ContractionRule rule{};
    RewriteOrder order = RewriteOrder::Leftmost;
    std::uint64_t seed = 0;  // used by RewriteOrder::Seeded
};

/// Creators left of annihilators; creators (resp. annihilators) sorted among themselves
/// since they commute.
Polynomial wick_normal_order(const Polynomial& p, const LabelSpace& labels, const NormalOrderOptions& options = {});

bool is_normal_ordered(const Polynomial& p);

/// Σ_p (2π)^p M_p — an exact B(H_S)-valued quantity with 2π kept symbolic.
class OperatorValue {
public:
    explicit OperatorValue(std::size_t dimension = 1) : dimension_(dimension) {}
    static OperatorValue from_matrix(const ExactMatrix& m, int two_pi_power = 0);

    std::size_t dimension() const { return dimension_; }
    void add(const ExactMatrix& m, int two_pi_power);
    bool is_zero() const { return parts_.empty(); }
    const std::map<int, ExactMatrix>& parts() const { return parts_; }

    ComplexMatrix evaluate() const;
    /// ⟨ψ| value |ψ'⟩
    std::complex<double> sandwich(const ComplexVector& bra, const ComplexVector& ket) const;

    std::string to_string() const;

    friend bool operator==(const OperatorValue& a, const OperatorValue& b);
    friend bool operator!=(const OperatorValue& a, const OperatorValue& b) { return !(a == b); }

private:
    std::size_t dimension_;
    std::map<int, ExactMatrix> parts_;
};

/// Normal-orders p and keeps the noise-free terms.
OperatorValue vacuum_expectation(const Polynomial& p, const LabelSpace& labels, const ContractionRule& rule = {});

/// A vector of the Fock module: Σ (2π)^p M ⊗ b*_{L1}…b*_{Ln}|0⟩, creators sorted.
class FockState {
public:
    using Key = std::pair<std::vector<NoiseLabel>, int>;

    explicit FockState(std::size_t dimension = 1) : dimension_(dimension) {}
    static FockState vacuum(std::size_t dimension);

    std::size_t dimension() const { return dimension_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, ExactMatrix>& terms() const { return terms_; }

    void add(const ExactMatrix& m, std::vector<NoiseLabel> creators, int two_pi_power);
    FockState& operator-=(const FockState& other);

    /// Coefficient of |0⟩.
    OperatorValue vacuum_component() const;

    /// Left multiplication by a system matrix.
    FockState left_multiply(const ExactMatrix& m) const;

private:
    std::size_t dimension_;
    std::map<Key, ExactMatrix> terms_;
};

/// Applies M ⊗ f to a state (M multiplies on the left, f is a single noise factor).
FockState act(const ExactMatrix& system, const NoiseFactor& factor, const FockState& state, const LabelSpace& labels,
              const ContractionRule& rule = {});

/// Applies a polynomial term by term, noise factors right to left.
FockState act(const Polynomial& op, const FockState& state, const LabelSpace& labels, const ContractionRule& rule = {});

/// One letter of a word in the entangled generators: c_L (annihilator) or c*_L (creator).
struct Letter {
    bool creator = false;
    NoiseLabel label;
    friend bool operator==(const Letter&, const Letter&) = default;
};

using EntangledWord = std::vector<Letter>;

Polynomial word_polynomial(const GenericSystem& system, const LabelSpace& labels, const EntangledWord& word);

std::string describe(const EntangledWord& word, const LabelSpace& labels);

/// Precomputed σ⁺_ω, σ⁻_ω, σ⁺_ωσ⁻_ω for fast letter-by-letter action.
class SigmaTable {
public:
    SigmaTable(const GenericSystem& system, const std::vector<Rational>& omegas);
    const ExactMatrix& plus(const Rational& omega) const { return plus_.at(omega); }
    const ExactMatrix& minus(const Rational& omega) const { return minus_.at(omega); }
    const ExactMatrix& projector(const Rational& omega) const { return projector_.at(omega); }
    const ExactMatrix& of(const Letter& letter) const {
        return letter.creator ? minus(letter.label.omega) : plus(letter.label.omega);
    }

private:
    std::map<Rational, ExactMatrix> plus_;
    std::map<Rational, ExactMatrix> minus_;
    std::map<Rational, ExactMatrix> projector_;
};

/// Applies one entangled generator to a Fock-module state.
FockState act(const SigmaTable& sigma, const Letter& letter, const FockState& state, const LabelSpace& labels,
              const ContractionRule& rule = {});

}  // namespace qboltz
