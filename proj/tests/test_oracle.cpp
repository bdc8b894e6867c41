#include "support.hpp"

#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include <filesystem>
#include <fstream>

using namespace qtest;

TEST_CASE("ladder normalization and dimensions") {
    auto sys = two_level();
    auto one_mode = single_mode_labels();
    const OracleRep rep = build_oracle(sys, one_mode, 1);
    CHECK(rep.fock().fock_dimension == 2);
    ComplexMatrix lowering = ComplexMatrix::Zero(2, 2);
    lowering(0, 1) = std::sqrt(kTwoPi);
    CHECK(max_abs(rep.single_mode_annihilator() - lowering) < 1e-15);
    CHECK(rep.commutator_deviation() < 1e-12);

    // C = kron(σ⁺, b) for the only mode.
    const NoiseLabel l = one_mode.label(Rational(1), "t0", "k");
    const ComplexMatrix sp = to_numeric(sigma_plus<ExactComplex>(sys, Rational(1)));
    const ComplexMatrix expected = Eigen::kroneckerProduct(sp, lowering);
    CHECK(max_abs(ComplexMatrix(rep.annihilator(l)) - expected) < 1e-15);
    CHECK(max_abs(ComplexMatrix(rep.creator(l)) - expected.adjoint()) < 1e-15);

    const OracleRep two = build_oracle(sys, single_mode_labels({"t0", "t1"}), 2);
    CHECK(two.fock().modes.size() == 2);
    CHECK(two.fock().fock_dimension == 9);
    CHECK(two.dimension() == 18);
    CHECK(two.commutator_deviation() < 1e-12);
}

TEST_CASE("off-shell labels have no mode") {
    auto sys = corpus_system();
    auto labels = corpus_labels();
    const OracleRep rep = build_oracle(sys, labels, 1, corpus_frequencies());
    CHECK(rep.fock().modes.size() == 4);
    const NoiseLabel off = labels.label(Rational(1), "t0", "k2");
    CHECK_FALSE(rep.mode_index(off).has_value());
    CHECK(rep.annihilator(off).nonZeros() == 0);
}

TEST_CASE("oracle errors") {
    auto sys = corpus_system();
    auto labels = corpus_labels();
    try {
        build_oracle(sys, labels, 0);
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadCutoff);
    }
    try {
        build_oracle(sys, labels, 9, {}, 20000);
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CapacityExceeded);
        CHECK(std::string(e.what()).find("30000") != std::string::npos);  // 3 · 10^4
    }
    const OracleRep rep = build_oracle(sys, labels, 1, corpus_frequencies());
    CHECK_THROWS_AS(entangled_basis(rep, 5), Error);
    const NoiseLabel l = labels.label(Rational(1), "t0", "k1");
    CHECK_THROWS_AS(oracle_vacuum_moment(rep, EntangledWord(9, Letter{true, l})), Error);
}

TEST_CASE("entangled basis") {
    auto sys = two_level();
    auto labels = single_mode_labels({"t0", "t1"});
    const OracleRep rep = build_oracle(sys, labels, 2);
    auto order0 = entangled_basis(rep, 0);
    CHECK(order0.size() == 2);
    auto order1 = entangled_basis(rep, 1);
    std::size_t nonzero_order1 = 0, zero_repeat = 0;
    for (const auto& b : order1) {
        if (b.creators.size() == 1 && !b.zero) ++nonzero_order1;
    }
    CHECK(nonzero_order1 == 2);  // only e_upper survives σ⁻, once per mode
    for (const auto& b : entangled_basis(rep, 2))
        if (b.creators.size() == 2 && b.creators[0] == b.creators[1] && b.zero) ++zero_repeat;
    CHECK(zero_repeat == 4);  // two modes × two system vectors
}

TEST_CASE("oracle relation check") {
    auto labels = corpus_labels();
    const auto sys = corpus_system();
    const OracleRep rep = build_oracle(sys, labels, 3, corpus_frequencies());
    Report ok = oracle_check_relation(rep, labels, 3);
    CHECK(ok.passed());
    CHECK(ok.max_deviation < 1e-10);
    CHECK(oracle_check_c_squared(rep, labels).passed());

    auto forced = force_system(spectrum_of({"0", "1", "2"}));
    const OracleRep bad = build_oracle(forced, labels, 3);
    CHECK_FALSE(oracle_check_relation(bad, labels, 2).passed());
}

TEST_CASE("vacuum moments and cross validation") {
    auto sys = corpus_system();
    auto labels = corpus_labels();
    const OracleRep rep = build_oracle(sys, labels, 3, corpus_frequencies());
    CHECK(max_abs(oracle_vacuum_moment(rep, {}) - ComplexMatrix::Identity(3, 3)) < 1e-15);
    const NoiseLabel l = labels.label(Rational(2), "t1", "k2");
    const ComplexMatrix p = to_numeric(upper_projector<ExactComplex>(sys, Rational(2)), 1);
    CHECK(max_abs(oracle_vacuum_moment(rep, {{false, l}, {true, l}}) - p) < 1e-12);

    CHECK(cross_validate(sys, labels, {}).empty());

    WordSampler rng(77);
    const auto pool = labels.all_labels(corpus_frequencies());
    std::vector<EntangledWord> words;
    for (int i = 0; i < 120; ++i) words.push_back(rng.balanced_word(pool, 3));
    CrossValidationOptions options;
    options.omegas = corpus_frequencies();
    Report good = summarize(cross_validate(sys, labels, words, options));
    CHECK(good.passed());

    // Truncation insensitivity: one more level per mode moves nothing.
    options.cutoff = 4;
    const auto wider = cross_validate(sys, labels, words, options);
    options.cutoff = 3;
    const auto narrow = cross_validate(sys, labels, words, options);
    for (std::size_t i = 0; i < words.size(); ++i) CHECK(max_abs(wider[i].oracle - narrow[i].oracle) <= 1e-12);

    options.rule.match_time = false;
    std::vector<EntangledWord> cross_time;
    const NoiseLabel a = labels.label(Rational(1), "t0", "k1"), b = labels.label(Rational(1), "t1", "k1");
    cross_time.push_back({{false, a}, {true, b}});
    CHECK_FALSE(summarize(cross_validate(sys, labels, cross_time, options)).passed());
}

TEST_CASE("dense dump") {
    auto sys = two_level();
    auto labels = single_mode_labels();
    const OracleRep rep = build_oracle(sys, labels, 2);
    const auto dir = std::filesystem::temp_directory_path() / "qboltz_dump_test";
    std::filesystem::remove_all(dir);
    dump_oracle(rep, labels, dir.string());
    CHECK(std::filesystem::exists(dir / "header.json"));
    CHECK(std::filesystem::file_size(dir / "c_0.bin") == rep.dimension() * rep.dimension() * 8);

    std::ifstream in(dir / "cdag_0.bin", std::ios::binary);
    std::vector<float> data(rep.dimension() * rep.dimension() * 2);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(float)));
    const ComplexMatrix cdag = rep.creator(labels.label(Rational(1), "t0", "k"));
    for (Eigen::Index i = 0; i < cdag.rows(); ++i)
        for (Eigen::Index j = 0; j < cdag.cols(); ++j)
            CHECK(std::abs(data[static_cast<std::size_t>(2 * (i * cdag.cols() + j))] - cdag(i, j).real()) < 1e-6);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(dump_oracle(rep, labels, dir.string(), 2), Error);
}
