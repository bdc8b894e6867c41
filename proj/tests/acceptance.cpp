// Acceptance gate: one line per criterion, each with its tolerance and time budget.

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

using namespace qtest;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// --- 1 ------------------------------------------------------------------------

Outcome genericity_gate() {
    auto oscillator = validate_generic(spectrum_of({"0", "1", "2", "3", "4", "5"}));
    bool cites_one = false;
    if (auto* r = std::get_if<RejectionReport>(&oscillator))
        for (const auto& d : r->duplicate_frequencies)
            if (d.value == 1 && d.pairs.size() == 5) cites_one = true;

    auto four = validate_generic(spectrum_of({"0", "1", "3", "7"}));
    std::size_t count = 0;
    if (auto* s = std::get_if<GenericSystem>(&four)) count = s->frequencies().size();
    return {cites_one && count == 6, std::string("oscillator rejected at omega=1 x5: ") + (cites_one ? "yes" : "no") +
                                          ", {0,1,3,7} frequencies: " + std::to_string(count)};
}

// --- 2 ------------------------------------------------------------------------

Outcome c_squared() {
    auto sys = corpus_system();
    auto labels = corpus_labels();
    Report symbolic = check_c_squared(sys, labels);
    const OracleRep rep = build_oracle(sys, labels, 3);
    Report oracle = oracle_check_c_squared(rep, labels, 1e-12);
    return {symbolic.passed() && oracle.passed(),
            std::to_string(symbolic.counts["identities_checked"].get<std::size_t>()) +
                " symbolic identities zero, max oracle norm " + fmt(oracle.max_deviation)};
}

// --- 3 ------------------------------------------------------------------------

Outcome module_relation() {
    auto sys = corpus_system();
    auto labels = corpus_labels();
    RelationCheckOptions options;
    options.max_order = 3;
    Report symbolic = check_module_relation(sys, labels, options);
    Report residual = search_residual_witnesses(sys, labels, 3);
    const OracleRep rep = build_oracle(sys, labels, 3);
    Report oracle = oracle_check_relation(rep, labels, 3, 1e-10);

    auto forced = force_system(spectrum_of({"0", "1", "2"}));
    Report witness = search_residual_witnesses(forced, labels, 4);
    const OracleRep bad = build_oracle(forced, labels, 3);
    Report bad_oracle = oracle_check_relation(bad, labels, 3, 1e-10);

    const bool ok = symbolic.passed() && residual.passed() && oracle.passed() && !witness.passed() &&
                    !bad_oracle.passed();
    std::ostringstream os;
    os << symbolic.counts["relation_checks"] << " symbolic relation checks exact, oracle residual "
       << fmt(oracle.max_deviation) << "; {0,1,2}: " << witness.violation_count() << " symbolic witnesses, oracle residual "
       << fmt(bad_oracle.max_deviation);
    if (!witness.violations.empty()) os << " (e.g. " << witness.violations[0]["vector"].get<std::string>() << ")";
    return {ok, os.str()};
}

// --- 4 ------------------------------------------------------------------------

struct OracleEquivalence {
    WordSweep sweep;
    std::size_t route_mismatches = 0;
    Report sample;
};

OracleEquivalence oracle_equivalence_run(const ContractionRule& rule, int max_length, std::size_t samples) {
    auto sys = corpus_system();
    auto labels = corpus_labels();
    const auto omegas = corpus_frequencies();
    const OracleRep rep = build_oracle(sys, labels, 3, omegas);

    OracleEquivalence out;
    // Every nonzero word is also pushed through the normal-ordering route.
    auto second_route = [&](const EntangledWord& word, const OperatorValue& value) {
        if (direct_vacuum_expectation(sys, labels, word, rule) != value) ++out.route_mismatches;
    };
    out.sweep = sweep_words(sys, labels, rep, omegas, max_length, 1e-10, rule, second_route);

    WordSampler rng(20240917);
    const auto pool = labels.all_labels(omegas);
    std::vector<EntangledWord> words;
    for (std::size_t i = 0; i < samples; ++i) {
        words.push_back(rng.word(pool, rng.index(static_cast<std::size_t>(max_length) + 1)));
        words.push_back(rng.balanced_word(pool, 1 + rng.index(static_cast<std::size_t>(max_length) / 2)));
    }
    CrossValidationOptions cv;
    cv.omegas = omegas;
    cv.rule = rule;
    out.sample = summarize(cross_validate(sys, labels, words, cv), 1e-10);
    return out;
}

bool failed(const OracleEquivalence& r) {
    return !r.sweep.failures.empty() || r.route_mismatches > 0 || !r.sample.passed();
}

Outcome oracle_equivalence() {
    const auto r = oracle_equivalence_run({}, 6, 600);
    std::ostringstream os;
    os << r.sweep.words << " words of length <= 6 (" << r.sweep.visited << " evaluated, rest provably zero in both), "
       << r.sweep.nonzero << " nonzero, max deviation " << fmt(r.sweep.max_deviation) << "; "
       << r.sample.counts["words"] << "-word fixed-seed sample max deviation " << fmt(r.sample.max_deviation);
    return {!failed(r) && r.sample.counts["words"].get<std::size_t>() >= 500, os.str()};
}

// --- 5 ------------------------------------------------------------------------

Report representations(const ContractionRule& rule, int max_length) {
    RepresentationOptions options;
    options.max_length = max_length;
    options.omegas = corpus_frequencies();
    options.rule = rule;
    return compare_representations(corpus_system(), corpus_labels(), options);
}

Outcome representation_equivalence() {
    Report r = representations({}, 6);
    return {r.passed(), std::to_string(r.counts["words"].get<std::uint64_t>()) + " words, " +
                            std::to_string(r.counts["words_nonzero"].get<std::uint64_t>()) + " nonzero, " +
                            std::to_string(r.violation_count()) + " mismatches"};
}

// --- 6 ------------------------------------------------------------------------

Outcome order_sensitivity() {
    auto sys = corpus_system();
    auto labels = corpus_labels();
    const NoiseLabel l1 = labels.label(Rational(1), "t0", "k1");
    const NoiseLabel l2 = labels.label(Rational(2), "t0", "k2");
    const EntangledVector x12{{l1, l2}}, x21{{l2, l1}};
    const OperatorValue same = module_inner_product(sys, labels, x12, x12);
    const OperatorValue swapped = module_inner_product(sys, labels, x12, x21);
    return {same != swapped && !same.is_zero(),
            "<x12,x12> = " + same.to_string() + " vs <x12,x21> = " + swapped.to_string()};
}

// --- 7 ------------------------------------------------------------------------

std::vector<std::string> grid_times(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("t" + std::to_string(i));
    return out;
}

InteractionSpec corpus_couplings(std::size_t points) {
    InteractionSpec spec;
    spec.couplings[{Rational(1), 0}] = ExactComplex{Rational(1, 2), Rational(1, 3)};
    spec.couplings[{Rational(2), 1}] = ExactComplex{Rational(1), Rational(-1, 4)};
    spec.couplings[{Rational(3), 0}] = ExactComplex{Rational(1, 5), Rational(0)};
    spec.couplings[{Rational(2), 0}] = ExactComplex{Rational(-2, 3), Rational(1, 2)};
    spec.points = points;
    spec.dt = Rational(1, 5);
    return spec;
}

Outcome dyson_structure() {
    auto sys = corpus_system();
    auto labels5 = LabelSpace(grid_times(5), {"k1", "k2"}, {{"k1", Rational(1)}, {"k2", Rational(2)}});
    const bool structural = depends_only_on_entangled(sys, labels5, corpus_couplings(5), 4);

    double worst = 0.0;
    bool odd_zero = true;
    std::size_t compared = 0;
    auto run = [&](const GenericSystem& s, const LabelSpace& labels, const InteractionSpec& spec,
                   const ComplexVector& bra, const ComplexVector& ket, int cutoff) {
        for (const auto& o : propagator_matrix_elements(s, labels, spec, bra, ket, 3, cutoff)) {
            worst = std::max({worst, o.deviation, o.state_deviation});
            if (o.order % 2 == 1) odd_zero = odd_zero && o.symbolic_operator.is_zero();
            ++compared;
        }
    };
    auto labels3 = LabelSpace(grid_times(3), {"k1", "k2"}, {{"k1", Rational(1)}, {"k2", Rational(2)}});
    ComplexVector psi(3);
    psi << 0.5, std::complex<double>(0, 0.5), std::sqrt(0.5);
    run(sys, labels3, corpus_couplings(3), psi, psi, 2);
    run(sys, labels3, corpus_couplings(3), basis_vector(3, 2), basis_vector(3, 1), 2);

    auto two = two_level();
    auto spin_labels = LabelSpace(grid_times(3), {"k"}, {{"k", Rational(1)}});
    InteractionSpec spin;
    spin.couplings[{Rational(1), 0}] = ExactComplex(1);
    spin.points = 3;
    spin.dt = Rational(1, 10);
    run(two, spin_labels, spin, basis_vector(2, 1), basis_vector(2, 1), 3);

    return {structural && odd_zero && worst < 1e-8,
            std::string("entangled-only through order 4: ") + (structural ? "yes" : "no") +
                ", odd vacuum orders symbolically zero: " + (odd_zero ? "yes" : "no") + ", " +
                std::to_string(compared) + " order comparisons, max deviation " + fmt(worst)};
}

// --- 8 ------------------------------------------------------------------------

Outcome positivity() {
    auto sys = corpus_system();
    auto labels = corpus_labels();
    const auto all = labels.all_labels(sys.frequencies());
    std::vector<NoiseLabel> on_shell;
    for (const auto& l : all)
        if (labels.on_shell(l)) on_shell.push_back(l);

    WordSampler rng(8128);
    std::vector<EntangledVector> vectors;
    for (int i = 0; i < 100; ++i)
        vectors.push_back({rng.creators(rng.coin() ? on_shell : all, rng.index(4))});

    double worst = 0.0;
    std::size_t compressions = 0;
    std::vector<ComplexVector> states;
    for (std::size_t i = 0; i < 3; ++i) states.push_back(basis_vector(3, i));
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 5; ++i) {
        ComplexVector psi(3);
        for (Eigen::Index j = 0; j < 3; ++j) psi(j) = {gauss(rng.engine()), gauss(rng.engine())};
        states.push_back(psi.normalized());
    }

    auto check_family = [&](const std::vector<EntangledVector>& family) {
        const ComplexMatrix blocks = gram_blocks(sys, labels, family);
        worst = std::min(worst, min_hermitian_eigenvalue(blocks));
        for (const auto& psi : states) {
            worst = std::min(worst, min_hermitian_eigenvalue(compress_gram(blocks, 3, psi)));
            ++compressions;
        }
    };
    check_family(vectors);
    for (std::size_t start = 0; start < vectors.size(); start += 10)
        check_family({vectors.begin() + static_cast<long>(start), vectors.begin() + static_cast<long>(start + 10)});

    return {worst >= -1e-10, "100 vectors, " + std::to_string(compressions) +
                                 " compressed Gram matrices, min eigenvalue " + fmt(worst)};
}

// --- 9 ------------------------------------------------------------------------

Outcome mutation_sensitivity() {
    struct Mutation {
        const char* name;
        ContractionRule rule;
    };
    std::vector<Mutation> mutations;
    auto add = [&](const char* name, auto&& edit) {
        ContractionRule r;
        edit(r);
        mutations.push_back({name, r});
    };
    add("2pi->(2pi)^2", [](ContractionRule& r) { r.two_pi_power = 2; });
    add("2pi->1", [](ContractionRule& r) { r.two_pi_power = 0; });
    add("drop time delta", [](ContractionRule& r) { r.match_time = false; });
    add("drop momentum delta", [](ContractionRule& r) { r.match_momentum = false; });
    add("drop frequency delta", [](ContractionRule& r) { r.match_frequency = false; });
    add("drop on-shell delta", [](ContractionRule& r) { r.require_on_shell = false; });

    auto sys = corpus_system();
    auto labels = corpus_labels();
    bool all_caught = true;
    std::string detail;
    for (const auto& m : mutations) {
        RelationCheckOptions options;
        options.max_order = 2;
        options.rule = m.rule;
        const bool c3 = !check_module_relation(sys, labels, options).passed();
        const bool c4 = failed(oracle_equivalence_run(m.rule, 4, 100));
        const bool c5 = !representations(m.rule, 4).passed();
        all_caught = all_caught && (c3 || c4 || c5);
        detail += std::string(detail.empty() ? "" : "; ") + m.name + ": " + (c3 ? "3" : "") + (c4 ? "4" : "") +
                  (c5 ? "5" : "") + (c3 || c4 || c5 ? "" : "none");
    }
    return {all_caught, "criteria failing per mutation: " + detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "genericity gate", 1, genericity_gate},
        {2, "c^2 = 0", 5, c_squared},
        {3, "module relation (tol 1e-10)", 60, module_relation},
        {4, "oracle equivalence (tol 1e-10)", 120, oracle_equivalence},
        {5, "representation equivalence (exact)", 60, representation_equivalence},
        {6, "order sensitivity", 1, order_sensitivity},
        {7, "Dyson structure (tol 1e-8)", 60, dyson_structure},
        {8, "positivity (tol -1e-10)", 30, positivity},
        {9, "mutation sensitivity", 60, mutation_sensitivity},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = seconds < c.budget_seconds;
        const bool pass = o.passed && in_budget;
        if (!pass) ++failures;
        std::printf("[%s] criterion %d: %s (%.2f s, budget %.0f s%s) -- %s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    seconds, c.budget_seconds, in_budget ? "" : ", OVER BUDGET", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
