#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace qtest;

namespace {

// Brute force over ordered pairs, independent of enumerate_bohr_frequencies.
std::map<Rational, int> difference_multiplicities(const std::vector<Rational>& energies) {
    std::map<Rational, int> out;
    for (std::size_t i = 0; i < energies.size(); ++i)
        for (std::size_t j = 0; j < energies.size(); ++j)
            if (energies[j] > energies[i]) ++out[Rational(energies[j] - energies[i])];
    return out;
}

std::vector<Rational> rationals(std::initializer_list<int> values) {
    std::vector<Rational> out;
    for (int v : values) out.emplace_back(v);
    return out;
}

}  // namespace

TEST_CASE("Bohr frequencies of small spectra") {
    auto two = enumerate_bohr_frequencies(spectrum_of({"0", "1"}));
    REQUIRE(two.size() == 1);
    CHECK(two[0].value == 1);
    CHECK(two[0].pairs == std::vector<LevelPair>{{0, 1}});

    auto three = enumerate_bohr_frequencies(spectrum_of({"0", "1", "2"}));
    REQUIRE(three.size() == 2);
    CHECK(three[0].value == 1);
    CHECK(three[0].pairs.size() == 2);
    CHECK(three[1].value == 2);
    CHECK(three[1].pairs.size() == 1);

    const auto energies = rationals({0, 1, 3, 7});
    auto four = enumerate_bohr_frequencies(Spectrum::from_energies(energies));
    const auto expected = difference_multiplicities(energies);
    REQUIRE(four.size() == expected.size());
    REQUIRE(four.size() == 6);
    for (const auto& g : four) {
        CHECK(expected.at(g.value) == static_cast<int>(g.pairs.size()));
        CHECK(g.pairs.size() == 1);
    }
}

TEST_CASE("genericity gate") {
    auto two = validate_generic(spectrum_of({"0", "1"}));
    REQUIRE(std::holds_alternative<GenericSystem>(two));
    CHECK(std::get<GenericSystem>(two).frequencies() == rationals({1}));

    auto oscillator = validate_generic(spectrum_of({"0", "1", "2", "3", "4", "5"}));
    REQUIRE(std::holds_alternative<RejectionReport>(oscillator));
    const auto& report = std::get<RejectionReport>(oscillator);
    CHECK(report.reasons == std::vector<RejectionReason>{RejectionReason::DuplicateBohrFrequency});
    REQUIRE_FALSE(report.duplicate_frequencies.empty());
    CHECK(report.duplicate_frequencies[0].value == 1);
    CHECK(report.duplicate_frequencies[0].pairs.size() == 5);

    auto degenerate = validate_generic(spectrum_of({"0", "1", "1"}));
    REQUIRE(std::holds_alternative<RejectionReport>(degenerate));
    const auto& d = std::get<RejectionReport>(degenerate);
    CHECK(d.reasons.front() == RejectionReason::DegenerateSpectrum);
    REQUIRE(d.degenerate_energies.size() == 1);
    CHECK(d.degenerate_energies[0].labels.size() == 2);

    auto single = validate_generic(spectrum_of({"5"}));
    REQUIRE(std::holds_alternative<GenericSystem>(single));
    CHECK(std::get<GenericSystem>(single).frequencies().empty());

    CHECK_THROWS_AS(Spectrum({{"a", Rational(0)}, {"a", Rational(1)}}), Error);
    CHECK_THROWS_AS(Spectrum(std::vector<Level>{}), Error);
}

TEST_CASE("accepted spectra have d(d-1)/2 frequencies matching the brute-force set") {
    WordSampler rng(11);
    int accepted = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + rng.index(4);
        std::vector<Rational> energies;
        for (std::size_t i = 0; i < d; ++i) energies.push_back(rng.rational(6));
        auto spectrum = Spectrum::from_energies(energies);
        auto result = validate_generic(spectrum);
        const auto expected = difference_multiplicities(energies);
        std::set<Rational> distinct(energies.begin(), energies.end());
        bool should_accept = distinct.size() == d;
        for (const auto& [v, m] : expected) should_accept = should_accept && m == 1;
        CHECK(std::holds_alternative<GenericSystem>(result) == should_accept);

        // Permuting the input never changes the verdict.
        std::vector<Rational> reversed(energies.rbegin(), energies.rend());
        CHECK(std::holds_alternative<GenericSystem>(validate_generic(Spectrum::from_energies(reversed))) ==
              should_accept);

        if (auto* system = std::get_if<GenericSystem>(&result)) {
            ++accepted;
            CHECK(system->frequencies().size() == d * (d - 1) / 2);
            for (const auto& [v, m] : expected) CHECK(system->has_frequency(v));
        }
    }
    CHECK(accepted > 10);
}

TEST_CASE("sigma operators") {
    auto two = two_level();
    ExactMatrix sp = sigma_plus<ExactComplex>(two, Rational(1));
    CHECK(sp(1, 0) == ExactComplex(1));
    CHECK(sp(0, 1).is_zero());
    CHECK(is_zero(exact_product(sp, sp)));
    CHECK_THROWS_AS(sigma_plus<ExactComplex>(two, Rational(2)), Error);

    auto sys = corpus_system();
    ExactMatrix sm2 = sigma_minus<ExactComplex>(sys, Rational(2));
    CHECK(sm2(1, 2) == ExactComplex(1));  // energy-3 state → energy-1 state
    for (const auto& omega : sys.frequencies()) {
        ExactMatrix p = sigma_plus<ExactComplex>(sys, omega);
        ExactMatrix m = sigma_minus<ExactComplex>(sys, omega);
        CHECK(operator_equal(m, adjoint(p)));
        ExactMatrix proj = exact_product(p, m);
        CHECK(operator_equal(proj, upper_projector<ExactComplex>(sys, omega)));
        CHECK(operator_equal(exact_product(proj, proj), proj));
        CHECK(operator_equal(adjoint(proj), proj));
        ExactComplex trace(0);
        for (Eigen::Index i = 0; i < proj.rows(); ++i) trace += proj(i, i);
        CHECK(trace == ExactComplex(1));
        // σ⁻_ω kills the lower state 1_ω.
        const auto pair = sys.bohr_frequency(omega).indices;
        CHECK(is_zero(m.col(static_cast<Eigen::Index>(pair.lower))));
    }
}

TEST_CASE("forced non-generic system sums over every realizing pair") {
    auto forced = force_system(spectrum_of({"0", "1", "2"}));
    CHECK_FALSE(forced.is_generic());
    CHECK(forced.transitions(Rational(1)).size() == 2);
    CHECK_THROWS_AS(forced.bohr_frequency(Rational(1)), Error);
    ExactMatrix sp = sigma_plus<ExactComplex>(forced, Rational(1));
    ExactMatrix proj = exact_product(sp, sigma_minus<ExactComplex>(forced, Rational(1)));
    CHECK(operator_equal(proj, upper_projector<ExactComplex>(forced, Rational(1))));
    CHECK_FALSE(is_zero(exact_product(sp, sp)));
}
