#include "qboltz/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qboltz {

// ---------------------------------------------------------------- labels

LabelSpace::LabelSpace(std::vector<std::string> times, std::vector<std::string> momenta,
                       const std::map<std::string, Rational>& dispersion)
    : times_(std::move(times)), momenta_(std::move(momenta)) {
    auto require_distinct = [](const std::vector<std::string>& names, const char* what) {
        std::vector<std::string> sorted = names;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error(ErrorCode::MalformedInput, std::string("duplicate ") + what + " label");
    };
    require_distinct(times_, "time");
    require_distinct(momenta_, "momentum");
    for (const auto& [name, value] : dispersion) {
        if (std::find(momenta_.begin(), momenta_.end(), name) == momenta_.end())
            throw Error(ErrorCode::UnknownLabel, "dispersion given for undeclared momentum '" + name + "'");
    }
    dispersion_.reserve(momenta_.size());
    for (const auto& k : momenta_) {
        auto it = dispersion.find(k);
        if (it == dispersion.end()) throw Error(ErrorCode::UnknownLabel, "no dispersion value for momentum '" + k + "'");
        dispersion_.push_back(it->second);
    }
}

std::uint32_t LabelSpace::time_index(const std::string& name) const {
    auto it = std::find(times_.begin(), times_.end(), name);
    if (it == times_.end()) throw Error(ErrorCode::UnknownLabel, "undeclared time '" + name + "'");
    return static_cast<std::uint32_t>(it - times_.begin());
}

std::uint32_t LabelSpace::momentum_index(const std::string& name) const {
    auto it = std::find(momenta_.begin(), momenta_.end(), name);
    if (it == momenta_.end()) throw Error(ErrorCode::UnknownLabel, "undeclared momentum '" + name + "'");
    return static_cast<std::uint32_t>(it - momenta_.begin());
}

NoiseLabel LabelSpace::label(const Rational& omega, const std::string& time, const std::string& momentum) const {
    return {omega, time_index(time), momentum_index(momentum)};
}

void LabelSpace::check(const NoiseLabel& label) const {
    if (label.time >= times_.size()) throw Error(ErrorCode::UnknownLabel, "time index out of range");
    if (label.momentum >= momenta_.size()) throw Error(ErrorCode::UnknownLabel, "momentum index out of range");
}

std::vector<NoiseLabel> LabelSpace::all_labels(const std::vector<Rational>& omegas) const {
    std::vector<NoiseLabel> out;
    for (const auto& omega : omegas)
        for (std::uint32_t t = 0; t < times_.size(); ++t)
            for (std::uint32_t k = 0; k < momenta_.size(); ++k) out.push_back({omega, t, k});
    std::sort(out.begin(), out.end());
    return out;
}

std::string LabelSpace::describe(const NoiseLabel& label) const {
    return "(" + label.omega.get_str() + "," + times_.at(label.time) + "," + momenta_.at(label.momentum) + ")";
}

// ---------------------------------------------------------------- scalars

std::complex<double> ScalarExpr::evaluate() const { return to_complex(coeff) * std::pow(kTwoPi, two_pi_power); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    return {a.coeff * b.coeff, a.two_pi_power + b.two_pi_power};
}

bool ContractionRule::contracts(const NoiseLabel& annihilated, const NoiseLabel& created,
                                const LabelSpace& labels) const {
    if (match_frequency && annihilated.omega != created.omega) return false;
    if (match_time && annihilated.time != created.time) return false;
    if (match_momentum && annihilated.momentum != created.momentum) return false;
    if (require_on_shell && !labels.on_shell(annihilated)) return false;
    return true;
}

// ---------------------------------------------------------------- polynomials

Polynomial Polynomial::identity(std::size_t dimension) {
    const auto d = static_cast<Eigen::Index>(dimension);
    return monomial(ExactMatrix::Identity(d, d));
}

Polynomial Polynomial::monomial(ExactMatrix system, NoiseWord noise, int two_pi_power) {
    if (system.rows() != system.cols()) throw Error(ErrorCode::DimensionMismatch, "system factor must be square");
    Polynomial p(static_cast<std::size_t>(system.rows()));
    p.add_term(system, std::move(noise), two_pi_power);
    return p;
}

void Polynomial::require_dimension(const Polynomial& other) const {
    if (other.dimension_ != dimension_)
        throw Error(ErrorCode::DimensionMismatch, "polynomials over systems of dimension " +
                                                      std::to_string(dimension_) + " and " +
                                                      std::to_string(other.dimension_));
}

void Polynomial::add_term(const ExactMatrix& system, NoiseWord noise, int two_pi_power) {
    if (static_cast<std::size_t>(system.rows()) != dimension_ || static_cast<std::size_t>(system.cols()) != dimension_)
        throw Error(ErrorCode::DimensionMismatch, "term system factor has the wrong shape");
    if (qboltz::is_zero(system)) return;
    auto [it, inserted] = terms_.try_emplace(Key{std::move(noise), two_pi_power}, system);
    if (inserted) return;
    it->second += system;
    if (qboltz::is_zero(it->second)) terms_.erase(it);
}

std::vector<Term> Polynomial::terms() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [key, m] : terms_) out.push_back({m, key.first, key.second});
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    require_dimension(other);
    for (const auto& [key, m] : other.terms_) add_term(m, key.first, key.second);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    require_dimension(other);
    for (const auto& [key, m] : other.terms_) add_term(ExactMatrix(-m), key.first, key.second);
    return *this;
}

Polynomial& Polynomial::operator*=(const ScalarExpr& scalar) {
    if (scalar.is_zero()) {
        terms_.clear();
        return *this;
    }
    std::map<Key, ExactMatrix> scaled;
    for (auto& [key, m] : terms_) {
        ExactMatrix s = m * scalar.coeff;
        scaled.emplace(Key{key.first, key.second + scalar.two_pi_power}, std::move(s));
    }
    terms_ = std::move(scaled);
    return *this;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.dimension_ != b.dimension_ || a.terms_.size() != b.terms_.size()) return false;
    auto it = b.terms_.begin();
    for (const auto& [key, m] : a.terms_) {
        if (key != it->first || !operator_equal(m, it->second)) return false;
        ++it;
    }
    return true;
}

Polynomial entangled_annihilate(const GenericSystem& system, const LabelSpace& labels, const NoiseLabel& label) {
    labels.check(label);
    return Polynomial::monomial(sigma_plus<ExactComplex>(system, label.omega), {{NoiseKind::Annihilator, label}});
}

Polynomial entangled_annihilate(const GenericSystem& system, const LabelSpace& labels, const Rational& omega,
                                const std::string& time, const std::string& momentum) {
    return entangled_annihilate(system, labels, labels.label(omega, time, momentum));
}

Polynomial entangled_create(const GenericSystem& system, const LabelSpace& labels, const NoiseLabel& label) {
    labels.check(label);
    return Polynomial::monomial(sigma_minus<ExactComplex>(system, label.omega), {{NoiseKind::Creator, label}});
}

Polynomial entangled_create(const GenericSystem& system, const LabelSpace& labels, const Rational& omega,
                            const std::string& time, const std::string& momentum) {
    return entangled_create(system, labels, labels.label(omega, time, momentum));
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
    if (a.dimension() != b.dimension())
        throw Error(ErrorCode::DimensionMismatch, "cannot multiply polynomials over different system dimensions");
    Polynomial out(a.dimension());
    for (const auto& [ka, ma] : a.raw_terms()) {
        for (const auto& [kb, mb] : b.raw_terms()) {
            NoiseWord word = ka.first;
            word.insert(word.end(), kb.first.begin(), kb.first.end());
            out.add_term(exact_product(ma, mb), std::move(word), ka.second + kb.second);
        }
    }
    return out;
}

Polynomial adjoint(const Polynomial& p) {
    Polynomial out(p.dimension());
    for (const auto& [key, m] : p.raw_terms()) {
        NoiseWord word(key.first.rbegin(), key.first.rend());
        for (auto& f : word) f.kind = f.kind == NoiseKind::Creator ? NoiseKind::Annihilator : NoiseKind::Creator;
        out.add_term(adjoint(m), std::move(word), key.second);
    }
    return out;
}

// ---------------------------------------------------------------- normal ordering

namespace {

// Normal-ordered expansion of a bare noise word: (word, extra 2π power) → multiplicity.
using WordExpansion = std::map<std::pair<NoiseWord, int>, mpz_class>;

class WordOrderer {
public:
    WordOrderer(const LabelSpace& labels, const NormalOrderOptions& options)
        : labels_(labels), options_(options), rng_(options.seed) {}

    const WordExpansion& expand(const NoiseWord& word) {
        if (auto it = memo_.find(word); it != memo_.end()) return it->second;
        WordExpansion result;

        std::vector<std::size_t> inversions;
        for (std::size_t i = 0; i + 1 < word.size(); ++i)
            if (word[i].kind == NoiseKind::Annihilator && word[i + 1].kind == NoiseKind::Creator) inversions.push_back(i);

        if (inversions.empty()) {
            NoiseWord sorted = word;
            auto split = std::find_if(sorted.begin(), sorted.end(),
                                      [](const NoiseFactor& f) { return f.kind == NoiseKind::Annihilator; });
            std::sort(sorted.begin(), split);
            std::sort(split, sorted.end());
            result[{std::move(sorted), 0}] = 1;
        } else {
            std::size_t i = pick(inversions);
            NoiseWord swapped = word;
            std::swap(swapped[i], swapped[i + 1]);
            for (const auto& [key, count] : expand(swapped)) result[key] += count;
            if (options_.rule.contracts(word[i].label, word[i + 1].label, labels_)) {
                NoiseWord reduced;
                reduced.reserve(word.size() - 2);
                reduced.insert(reduced.end(), word.begin(), word.begin() + static_cast<std::ptrdiff_t>(i));
                reduced.insert(reduced.end(), word.begin() + static_cast<std::ptrdiff_t>(i) + 2, word.end());
                for (const auto& [key, count] : expand(reduced))
                    result[{key.first, key.second + options_.rule.two_pi_power}] += count;
            }
        }
        return memo_.emplace(word, std::move(result)).first->second;
    }

private:
    std::size_t pick(const std::vector<std::size_t>& inversions) {
        switch (options_.order) {
            case RewriteOrder::Leftmost: return inversions.front();
            case RewriteOrder::Rightmost: return inversions.back();
            case RewriteOrder::Seeded: {
                std::uniform_int_distribution<std::size_t> dist(0, inversions.size() - 1);
                return inversions[dist(rng_)];
            }
        }
        return inversions.front();
    }

    const LabelSpace& labels_;
    const NormalOrderOptions& options_;
    std::mt19937_64 rng_;
    std::map<NoiseWord, WordExpansion> memo_;
};

}  // namespace

Polynomial wick_normal_order(const Polynomial& p, const LabelSpace& labels, const NormalOrderOptions& options) {
    WordOrderer orderer(labels, options);
    Polynomial out(p.dimension());
    for (const auto& [key, m] : p.raw_terms()) {
        for (const auto& [expanded, count] : orderer.expand(key.first)) {
            if (count == 0) continue;
            ExactMatrix scaled = m * ExactComplex(Rational(count));
            out.add_term(scaled, expanded.first, key.second + expanded.second);
        }
    }
    return out;
}

bool is_normal_ordered(const Polynomial& p) {
    for (const auto& [key, m] : p.raw_terms()) {
        const auto& w = key.first;
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i].kind == NoiseKind::Annihilator && w[i + 1].kind == NoiseKind::Creator) return false;
    }
    return true;
}

// ---------------------------------------------------------------- operator values

OperatorValue OperatorValue::from_matrix(const ExactMatrix& m, int two_pi_power) {
    OperatorValue v(static_cast<std::size_t>(m.rows()));
    v.add(m, two_pi_power);
    return v;
}

void OperatorValue::add(const ExactMatrix& m, int two_pi_power) {
    if (static_cast<std::size_t>(m.rows()) != dimension_)
        throw Error(ErrorCode::DimensionMismatch, "operator value dimension mismatch");
    if (qboltz::is_zero(m)) return;
    auto [it, inserted] = parts_.try_emplace(two_pi_power, m);
    if (inserted) return;
    it->second += m;
    if (qboltz::is_zero(it->second)) parts_.erase(it);
}

ComplexMatrix OperatorValue::evaluate() const {
    const auto d = static_cast<Eigen::Index>(dimension_);
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (const auto& [power, m] : parts_) out += to_numeric(m, power);
    return out;
}

std::complex<double> OperatorValue::sandwich(const ComplexVector& bra, const ComplexVector& ket) const {
    return bra.dot(evaluate() * ket);
}

std::string OperatorValue::to_string() const {
    if (parts_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [power, m] : parts_) {
        if (!first) os << " + ";
        first = false;
        if (power != 0) os << "(2pi)^" << power << "*";
        os << "[";
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            os << (i ? ";" : "");
            for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << qboltz::to_string(m(i, j));
        }
        os << "]";
    }
    return os.str();
}

bool operator==(const OperatorValue& a, const OperatorValue& b) {
    if (a.dimension_ != b.dimension_ || a.parts_.size() != b.parts_.size()) return false;
    auto it = b.parts_.begin();
    for (const auto& [power, m] : a.parts_) {
        if (power != it->first || !operator_equal(m, it->second)) return false;
        ++it;
    }
    return true;
}

OperatorValue vacuum_expectation(const Polynomial& p, const LabelSpace& labels, const ContractionRule& rule) {
    NormalOrderOptions options;
    options.rule = rule;
    Polynomial ordered = wick_normal_order(p, labels, options);
    OperatorValue value(p.dimension());
    for (const auto& [key, m] : ordered.raw_terms())
        if (key.first.empty()) value.add(m, key.second);
    return value;
}

// ---------------------------------------------------------------- Fock module states

FockState FockState::vacuum(std::size_t dimension) {
    FockState s(dimension);
    const auto d = static_cast<Eigen::Index>(dimension);
    s.add(ExactMatrix::Identity(d, d), {}, 0);
    return s;
}

void FockState::add(const ExactMatrix& m, std::vector<NoiseLabel> creators, int two_pi_power) {
    if (qboltz::is_zero(m)) return;
    auto [it, inserted] = terms_.try_emplace(Key{std::move(creators), two_pi_power}, m);
    if (inserted) return;
    it->second += m;
    if (qboltz::is_zero(it->second)) terms_.erase(it);
}

FockState& FockState::operator-=(const FockState& other) {
    for (const auto& [key, m] : other.terms_) add(ExactMatrix(-m), key.first, key.second);
    return *this;
}

OperatorValue FockState::vacuum_component() const {
    OperatorValue v(dimension_);
    for (const auto& [key, m] : terms_)
        if (key.first.empty()) v.add(m, key.second);
    return v;
}

FockState FockState::left_multiply(const ExactMatrix& m) const {
    FockState out(dimension_);
    for (const auto& [key, state_m] : terms_) out.add(exact_product(m, state_m), key.first, key.second);
    return out;
}

namespace {

// f acting on a creator-only state, system leg untouched.
FockState apply_noise(const NoiseFactor& factor, const FockState& state, const LabelSpace& labels,
                      const ContractionRule& rule, const ExactMatrix* system) {
    FockState out(state.dimension());
    for (const auto& [key, m] : state.terms()) {
        ExactMatrix fused = system ? exact_product(*system, m) : m;
        if (is_zero(fused)) continue;
        const auto& creators = key.first;
        if (factor.kind == NoiseKind::Creator) {
            std::vector<NoiseLabel> next = creators;
            next.insert(std::upper_bound(next.begin(), next.end(), factor.label), factor.label);
            out.add(fused, std::move(next), key.second);
        } else {
            // b_L (b*)^n|0⟩ contracts with every creator occurrence.
            for (std::size_t j = 0; j < creators.size(); ++j) {
                if (!rule.contracts(factor.label, creators[j], labels)) continue;
                std::vector<NoiseLabel> next = creators;
                next.erase(next.begin() + static_cast<std::ptrdiff_t>(j));
                out.add(fused, std::move(next), key.second + rule.two_pi_power);
            }
        }
    }
    return out;
}

}  // namespace

FockState act(const ExactMatrix& system, const NoiseFactor& factor, const FockState& state, const LabelSpace& labels,
              const ContractionRule& rule) {
    return apply_noise(factor, state, labels, rule, &system);
}

FockState act(const Polynomial& op, const FockState& state, const LabelSpace& labels, const ContractionRule& rule) {
    if (op.dimension() != state.dimension())
        throw Error(ErrorCode::DimensionMismatch, "operator and state over different system dimensions");
    FockState out(state.dimension());
    for (const auto& [key, m] : op.raw_terms()) {
        FockState partial = state;
        for (auto it = key.first.rbegin(); it != key.first.rend() && !partial.is_zero(); ++it)
            partial = apply_noise(*it, partial, labels, rule, nullptr);
        for (const auto& [skey, sm] : partial.terms()) out.add(exact_product(m, sm), skey.first, skey.second + key.second);
    }
    return out;
}

Polynomial word_polynomial(const GenericSystem& system, const LabelSpace& labels, const EntangledWord& word) {
    Polynomial p = Polynomial::identity(system.dimension());
    for (const Letter& letter : word)
        p = multiply(p, letter.creator ? entangled_create(system, labels, letter.label)
                                       : entangled_annihilate(system, labels, letter.label));
    return p;
}

std::string describe(const EntangledWord& word, const LabelSpace& labels) {
    if (word.empty()) return "1";
    std::string out;
    for (const Letter& letter : word) {
        if (!out.empty()) out += ' ';
        out += letter.creator ? "c*" : "c";
        out += labels.describe(letter.label);
    }
    return out;
}

SigmaTable::SigmaTable(const GenericSystem& system, const std::vector<Rational>& omegas) {
    for (const auto& omega : omegas) {
        plus_.emplace(omega, sigma_plus<ExactComplex>(system, omega));
        minus_.emplace(omega, sigma_minus<ExactComplex>(system, omega));
        projector_.emplace(omega, upper_projector<ExactComplex>(system, omega));
    }
}

FockState act(const SigmaTable& sigma, const Letter& letter, const FockState& state, const LabelSpace& labels,
              const ContractionRule& rule) {
    const NoiseFactor factor{letter.creator ? NoiseKind::Creator : NoiseKind::Annihilator, letter.label};
    return apply_noise(factor, state, labels, rule, &sigma.of(letter));
}

}  // namespace qboltz
