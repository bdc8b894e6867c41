// Shared fixtures for the unit and acceptance tests.

#pragma once

#include "qboltz/algebra.hpp"
#include "qboltz/dyson.hpp"
#include "qboltz/fock_module.hpp"
#include "qboltz/oracle.hpp"
#include "qboltz/system_model.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qtest {

using namespace qboltz;

inline Rational q(const char* text) { return parse_rational(text); }

inline Spectrum spectrum_of(std::initializer_list<const char*> energies) {
    std::vector<Rational> values;
    for (const char* e : energies) values.push_back(q(e));
    return Spectrum::from_energies(values);
}

inline GenericSystem generic(std::initializer_list<const char*> energies) {
    auto result = validate_generic(spectrum_of(energies));
    if (!std::holds_alternative<GenericSystem>(result)) throw std::logic_error("fixture spectrum is not generic");
    return std::get<GenericSystem>(result);
}

/// Corpus labels: times t0, t1; momenta k1, k2 with ω(k1) = 1, ω(k2) = 2.
inline LabelSpace corpus_labels() {
    return LabelSpace({"t0", "t1"}, {"k1", "k2"}, {{"k1", Rational(1)}, {"k2", Rational(2)}});
}

/// Generic three-level system {0, 1, 3}: F = {1, 2, 3}.
inline GenericSystem corpus_system() { return generic({"0", "1", "3"}); }

/// The two corpus frequencies with on-shell momenta.
inline std::vector<Rational> corpus_frequencies() { return {Rational(1), Rational(2)}; }

/// Two-level system with one on-shell momentum.
inline GenericSystem two_level() { return generic({"0", "1"}); }
inline LabelSpace single_mode_labels(std::vector<std::string> times = {"t0"}) {
    return LabelSpace(std::move(times), {"k"}, {{"k", Rational(1)}});
}

inline ComplexVector basis_vector(std::size_t dimension, std::size_t index) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dimension));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Binomial coefficient, computed the slow obvious way.
inline std::size_t choose(std::size_t m, std::size_t n) {
    if (n > m) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= n; ++i) r = r * (m - n + i) / i;
    return r;
}

class WordSampler {
public:
    explicit WordSampler(std::uint64_t seed) : rng_(seed) {}

    Rational rational(int range = 4) {
        std::uniform_int_distribution<int> num(-range, range), den(1, range);
        Rational r(num(rng_), den(rng_));
        r.canonicalize();  // mpq_class(n, d) does not reduce, and unreduced values compare unequal
        return r;
    }
    ExactComplex complex(int range = 4) { return {rational(range), rational(range)}; }

    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }

    EntangledWord word(const std::vector<NoiseLabel>& labels, std::size_t length) {
        EntangledWord w;
        for (std::size_t i = 0; i < length; ++i) w.push_back({coin(), labels[index(labels.size())]});
        return w;
    }

    /// Random creator/annihilator arrangement with equal counts, whose labels are drawn
    /// so that contractions are likely.
    EntangledWord balanced_word(const std::vector<NoiseLabel>& labels, std::size_t pairs) {
        std::vector<NoiseLabel> pool;
        for (std::size_t i = 0; i < pairs; ++i) pool.push_back(labels[index(labels.size())]);
        std::vector<bool> kinds(2 * pairs, false);
        for (std::size_t i = 0; i < pairs; ++i) kinds[i] = true;
        std::shuffle(kinds.begin(), kinds.end(), rng_);
        EntangledWord w;
        std::size_t c = 0, a = 0;
        for (bool creator : kinds) w.push_back({creator, pool[(creator ? c++ : a++) % pool.size()]});
        return w;
    }

    std::vector<NoiseLabel> creators(const std::vector<NoiseLabel>& labels, std::size_t length) {
        std::vector<NoiseLabel> out;
        for (std::size_t i = 0; i < length; ++i) out.push_back(labels[index(labels.size())]);
        return out;
    }

    /// Random polynomial in the entangled generators with rational coefficients.
    Polynomial entangled_polynomial(const GenericSystem& system, const LabelSpace& labels,
                                    const std::vector<NoiseLabel>& pool, std::size_t terms, std::size_t max_len) {
        Polynomial p = Polynomial::zero(system.dimension());
        for (std::size_t t = 0; t < terms; ++t) {
            Polynomial w = word_polynomial(system, labels, word(pool, index(max_len + 1)));
            p += w * ScalarExpr{complex(), 0};
        }
        return p;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Every word in {c_L, c*_L} of length ≤ max_length, visited by prepending letters to the
/// right-hand part that already acts on the vacuum. Both the symbolic Fock state and the
/// oracle block (one column per system basis vector) are carried along; once both are zero
/// every extension is zero in both and the subtree is counted without being visited.
struct WordSweep {
    std::uint64_t words = 0;
    std::uint64_t visited = 0;
    std::uint64_t nonzero = 0;
    double max_deviation = 0.0;
    std::vector<std::string> failures;
};

inline WordSweep sweep_words(const GenericSystem& system, const LabelSpace& labels, const OracleRep& rep,
                             const std::vector<Rational>& omegas, int max_length, double tol,
                             const ContractionRule& rule = {},
                             const std::function<void(const EntangledWord&, const OperatorValue&)>& on_nonzero = {}) {
    WordSweep out;
    SigmaTable sigma(system, omegas);
    std::vector<Letter> letters;
    for (const auto& l : labels.all_labels(omegas)) {
        letters.push_back({false, l});
        letters.push_back({true, l});
    }
    const auto d = static_cast<Eigen::Index>(system.dimension());
    ComplexMatrix start = ComplexMatrix::Zero(static_cast<Eigen::Index>(rep.dimension()), d);
    for (Eigen::Index j = 0; j < d; ++j) start.col(j) = rep.vacuum_vector(static_cast<std::size_t>(j));

    auto subtree = [&](int remaining) {
        std::uint64_t total = 0, layer = 1;
        for (int i = 0; i <= remaining; ++i) {
            total += layer;
            layer *= letters.size();
        }
        return total;
    };

    EntangledWord reversed;
    std::function<void(const FockState&, const ComplexMatrix&, int)> visit = [&](const FockState& state,
                                                                                 const ComplexMatrix& block,
                                                                                 int depth) {
        ++out.words;
        ++out.visited;
        OperatorValue symbolic = state.vacuum_component();
        ComplexMatrix oracle(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            oracle.row(i) = block.row(static_cast<Eigen::Index>(rep.vacuum_index(static_cast<std::size_t>(i))));
        const double dev = max_abs(symbolic.evaluate() - oracle);
        out.max_deviation = std::max(out.max_deviation, dev);
        const EntangledWord word(reversed.rbegin(), reversed.rend());
        if (dev > tol && out.failures.size() < 8) out.failures.push_back(describe(word, labels));
        if (!symbolic.is_zero()) {
            ++out.nonzero;
            if (on_nonzero) on_nonzero(word, symbolic);
        }
        if (depth == max_length) return;
        for (const Letter& letter : letters) {
            FockState next = act(sigma, letter, state, labels, rule);
            ComplexMatrix next_block = rep.letter(letter) * block;
            if (next.is_zero() && next_block.cwiseAbs().maxCoeff() == 0.0) {
                out.words += subtree(max_length - depth - 1);
                continue;
            }
            reversed.push_back(letter);
            visit(next, next_block, depth + 1);
            reversed.pop_back();
        }
    };
    visit(FockState::vacuum(system.dimension()), start, 0);
    return out;
}

}  // namespace qtest
