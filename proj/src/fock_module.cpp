#include "qboltz/fock_module.hpp"

#include <Eigen/Eigenvalues>

#include <functional>

namespace qboltz {

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["parameters"] = parameters;
    j["counts"] = counts;
    j["violations"] = violations;
    j["violation_count"] = total_violations;
    j["max_deviation"] = max_deviation;
    j["passed"] = passed();
    return j;
}

EntangledWord creation_word(const EntangledVector& v) {
    EntangledWord word;
    word.reserve(v.creators.size());
    for (const auto& label : v.creators) word.push_back({true, label});
    return word;
}

std::vector<Rational> frequency_set(const GenericSystem& system, const std::vector<Rational>& requested) {
    if (requested.empty()) return system.frequencies();
    for (const auto& omega : requested)
        if (!system.has_frequency(omega))
            throw Error(ErrorCode::UnknownFrequency, "omega = " + omega.get_str() + " is not a Bohr frequency");
    return requested;
}

FockState module_state(const GenericSystem& system, const LabelSpace& labels, const EntangledVector& v,
                       const ContractionRule& rule) {
    std::vector<Rational> omegas;
    for (const auto& label : v.creators) {
        labels.check(label);
        omegas.push_back(label.omega);
    }
    SigmaTable sigma(system, omegas);
    FockState state = FockState::vacuum(system.dimension());
    for (auto it = v.creators.rbegin(); it != v.creators.rend(); ++it)
        state = act(sigma, Letter{true, *it}, state, labels, rule);
    return state;
}

OperatorValue module_inner_product(const GenericSystem& system, const LabelSpace& labels, const EntangledVector& xi,
                                   const EntangledVector& eta, const ContractionRule& rule) {
    Polynomial lhs = word_polynomial(system, labels, creation_word(xi));
    Polynomial rhs = word_polynomial(system, labels, creation_word(eta));
    return vacuum_expectation(multiply(adjoint(lhs), rhs), labels, rule);
}

bool relation_coefficient_nonzero(const NoiseLabel& annihilated, const NoiseLabel& created, const LabelSpace& labels) {
    return ContractionRule{}.contracts(annihilated, created, labels);
}

Report check_c_squared(const GenericSystem& system, const LabelSpace& labels, const std::vector<Rational>& omegas) {
    Report report;
    report.check = "c_squared";
    const auto freqs = frequency_set(system, omegas);
    nlohmann::json checked = nlohmann::json::array();
    std::size_t count = 0;
    for (const auto& label : labels.all_labels(freqs)) {
        Polynomial c = entangled_annihilate(system, labels, label);
        Polynomial c_star = entangled_create(system, labels, label);
        Polynomial square = multiply(c, c);
        Polynomial square_star = multiply(c_star, c_star);
        checked.push_back(labels.describe(label));
        count += 2;
        if (!square.is_zero()) report.add_violation({{"label", labels.describe(label)}, {"operator", "c^2"}});
        if (!square_star.is_zero()) report.add_violation({{"label", labels.describe(label)}, {"operator", "c*^2"}});
    }
    report.parameters["labels"] = checked;
    report.counts["identities_checked"] = count;
    return report;
}

namespace {

std::uint64_t subtree_size(std::uint64_t branching, int remaining) {
    // Σ_{j=0}^{remaining} branching^j
    std::uint64_t total = 0, layer = 1;
    for (int j = 0; j <= remaining; ++j) {
        total += layer;
        layer *= branching;
    }
    return total;
}

std::string describe_vector(const std::vector<NoiseLabel>& creators, const LabelSpace& labels) {
    if (creators.empty()) return "|0>";
    std::string out;
    for (const auto& label : creators) out += "c*" + labels.describe(label) + " ";
    return out + "|0>";
}

nlohmann::json describe_state(const FockState& state, const LabelSpace& labels) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, m] : state.terms()) {
        OperatorValue v = OperatorValue::from_matrix(m, key.second);
        terms.push_back({{"creators", describe_vector(key.first, labels)}, {"coefficient", v.to_string()}});
    }
    return terms;
}

FockState shifted(const FockState& state, const ExactMatrix& left, int extra_power) {
    FockState out(state.dimension());
    for (const auto& [key, m] : state.terms()) out.add(exact_product(left, m), key.first, key.second + extra_power);
    return out;
}

// Depth-first enumeration of entangled vectors c*_{L1}…c*_{Ln}|0⟩, n ≤ max_order.
// `visit` sees every nonzero vector; zero vectors (and everything built on them) are counted.
struct VectorEnumeration {
    std::uint64_t nonzero = 0;
    std::uint64_t zero = 0;
};

VectorEnumeration enumerate_vectors(const SigmaTable& sigma, const std::vector<NoiseLabel>& all, const LabelSpace& labels,
                                    std::size_t dimension, int max_order, const ContractionRule& rule,
                                    const std::function<void(const FockState&, const std::vector<NoiseLabel>&)>& visit) {
    VectorEnumeration counts;
    std::vector<NoiseLabel> creators;  // leftmost first
    std::function<void(const FockState&, int)> recurse = [&](const FockState& v, int order) {
        ++counts.nonzero;
        visit(v, creators);
        if (order == max_order) return;
        for (const auto& label : all) {
            FockState next = act(sigma, Letter{true, label}, v, labels, rule);
            if (next.is_zero()) {
                counts.zero += subtree_size(all.size(), max_order - order - 1);
                continue;
            }
            creators.insert(creators.begin(), label);
            recurse(next, order + 1);
            creators.erase(creators.begin());
        }
    };
    recurse(FockState::vacuum(dimension), 0);
    return counts;
}

}  // namespace

Report check_module_relation(const GenericSystem& system, const LabelSpace& labels,
                             const RelationCheckOptions& options) {
    if (!system.is_generic() && !options.force)
        throw Error(ErrorCode::NotGeneric, "module relation check requires a generic system (use force to bypass)");
    if (options.max_order < 0) throw Error(ErrorCode::MalformedInput, "max_order must be non-negative");
    Report report;
    report.check = "module_relation";
    const auto freqs = frequency_set(system, options.omegas);
    const auto all = labels.all_labels(freqs);
    SigmaTable sigma(system, freqs);

    std::uint64_t checks = 0;
    auto visit = [&](const FockState& v, const std::vector<NoiseLabel>& creators) {
        for (const auto& created : all) {
            FockState w = act(sigma, Letter{true, created}, v, labels, options.rule);
            for (const auto& annihilated : all) {
                ++checks;
                FockState residual = act(sigma, Letter{false, annihilated}, w, labels, options.rule);
                if (relation_coefficient_nonzero(annihilated, created, labels))
                    residual -= shifted(v, sigma.projector(annihilated.omega), 1);
                if (!residual.is_zero())
                    report.add_violation({{"annihilated", labels.describe(annihilated)},
                                          {"created", labels.describe(created)},
                                          {"vector", describe_vector(creators, labels)},
                                          {"residual", describe_state(residual, labels)}});
            }
        }
    };
    auto counts = enumerate_vectors(sigma, all, labels, system.dimension(), options.max_order, options.rule, visit);

    report.parameters["max_order"] = options.max_order;
    report.parameters["generic"] = system.is_generic();
    report.parameters["labels"] = all.size();
    report.counts["vectors"] = counts.nonzero + counts.zero;
    report.counts["nonzero_vectors"] = counts.nonzero;
    report.counts["zero_vectors"] = counts.zero;
    report.counts["label_pairs"] = all.size() * all.size();
    report.counts["relation_checks"] = checks;
    return report;
}

namespace {

FockState residual_state(const SigmaTable& sigma, const NoiseLabel& annihilated, const NoiseLabel& created,
                         const FockState& v, const LabelSpace& labels, const ContractionRule& rule) {
    const auto d = static_cast<Eigen::Index>(v.dimension());
    const ExactMatrix identity = ExactMatrix::Identity(d, d);
    FockState after_b = act(identity, NoiseFactor{NoiseKind::Annihilator, annihilated}, v, labels, rule);
    const ExactMatrix prefix = exact_product(sigma.plus(annihilated.omega), sigma.minus(created.omega));
    return act(prefix, NoiseFactor{NoiseKind::Creator, created}, after_b, labels, rule);
}

}  // namespace

bool check_residual_vanishing(const GenericSystem& system, const LabelSpace& labels, const NoiseLabel& annihilated,
                              const NoiseLabel& created, const EntangledVector& v, const ContractionRule& rule) {
    labels.check(annihilated);
    labels.check(created);
    std::vector<Rational> omegas{annihilated.omega, created.omega};
    for (const auto& label : v.creators) omegas.push_back(label.omega);
    SigmaTable sigma(system, omegas);
    FockState state = module_state(system, labels, v, rule);
    return residual_state(sigma, annihilated, created, state, labels, rule).is_zero();
}

Report search_residual_witnesses(const GenericSystem& system, const LabelSpace& labels, int max_order,
                                 const std::vector<Rational>& omegas, const ContractionRule& rule) {
    Report report;
    report.check = "residual_vanishing";
    const auto freqs = frequency_set(system, omegas);
    const auto all = labels.all_labels(freqs);
    SigmaTable sigma(system, freqs);
    std::uint64_t checks = 0;
    auto visit = [&](const FockState& v, const std::vector<NoiseLabel>& creators) {
        for (const auto& annihilated : all) {
            for (const auto& created : all) {
                ++checks;
                FockState r = residual_state(sigma, annihilated, created, v, labels, rule);
                if (!r.is_zero())
                    report.add_violation({{"annihilated", labels.describe(annihilated)},
                                          {"created", labels.describe(created)},
                                          {"vector", describe_vector(creators, labels)},
                                          {"residual", describe_state(r, labels)}});
            }
        }
    };
    auto counts = enumerate_vectors(sigma, all, labels, system.dimension(), max_order, rule, visit);
    report.parameters["max_order"] = max_order;
    report.parameters["generic"] = system.is_generic();
    report.counts["vectors"] = counts.nonzero + counts.zero;
    report.counts["nonzero_vectors"] = counts.nonzero;
    report.counts["residual_checks"] = checks;
    return report;
}

MomentSequence moment_sequence(const GenericSystem& system, const LabelSpace& labels, const NoiseLabel& label,
                               const ComplexVector& psi, int n_max, const ContractionRule& rule) {
    if (static_cast<std::size_t>(psi.size()) != system.dimension())
        throw Error(ErrorCode::DimensionMismatch, "system state has the wrong dimension");
    labels.check(label);
    SigmaTable sigma(system, {label.omega});
    MomentSequence out;
    FockState state = FockState::vacuum(system.dimension());
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) {
            FockState next = act(sigma, Letter{false, label}, state, labels, rule);
            FockState raised = act(sigma, Letter{true, label}, state, labels, rule);
            for (const auto& [key, m] : raised.terms()) next.add(m, key.first, key.second);
            state = std::move(next);
        }
        OperatorValue moment = state.vacuum_component();
        out.values.push_back(moment.sandwich(psi, psi));
        out.operator_moments.push_back(std::move(moment));
    }
    return out;
}

// ---------------------------------------------------------------- alternative representations

namespace {

constexpr int kTimeLeg = 0;
constexpr int kModeLeg = 1;
constexpr int kFrequencyLeg = 2;
constexpr int kMomentumLeg = 3;

std::int64_t omega_index(const std::vector<Rational>& freqs, const Rational& omega) {
    for (std::size_t i = 0; i < freqs.size(); ++i)
        if (freqs[i] == omega) return static_cast<std::int64_t>(i);
    throw Error(ErrorCode::UnknownFrequency, "omega = " + omega.get_str() + " is not a Bohr frequency");
}

ExactMatrix sigma_word(const GenericSystem& system, const EntangledWord& word) {
    const auto d = static_cast<Eigen::Index>(system.dimension());
    ExactMatrix m = ExactMatrix::Identity(d, d);
    for (const Letter& letter : word)
        m = exact_product(m, letter.creator ? sigma_minus<ExactComplex>(system, letter.label.omega)
                                            : sigma_plus<ExactComplex>(system, letter.label.omega));
    return m;
}

}  // namespace

OperatorValue tensor_vacuum_expectation(const GenericSystem& system, const LabelSpace& labels,
                                        const EntangledWord& word) {
    const auto freqs = system.frequencies();
    const auto n_momenta = static_cast<std::int64_t>(labels.momenta().size());
    std::vector<FreeGenerator> generators;
    for (const Letter& letter : word) {
        labels.check(letter.label);
        const std::int64_t mode = omega_index(freqs, letter.label.omega) * n_momenta + letter.label.momentum;
        generators.push_back({kTimeLeg, letter.label.time, letter.creator});
        generators.push_back({kModeLeg, mode, letter.creator});
    }
    auto weight = [&](int family, std::int64_t annihilated, std::int64_t created) -> ScalarExpr {
        if (annihilated != created) return {ExactComplex(0), 0};
        if (family != kModeLeg) return {ExactComplex(1), 0};
        const Rational& omega = freqs[static_cast<std::size_t>(annihilated / n_momenta)];
        const auto k = static_cast<std::uint32_t>(annihilated % n_momenta);
        if (labels.dispersion(k) != omega) return {ExactComplex(0), 0};
        return {ExactComplex(1), 1};
    };
    FreeMonomial reduced = free_reduce(generators, weight);
    OperatorValue value(system.dimension());
    if (reduced.is_zero() || !reduced.is_scalar()) return value;
    value.add(sigma_word(system, word) * reduced.scalar.coeff, reduced.scalar.two_pi_power);
    return value;
}

OperatorValue factorized_vacuum_expectation(const GenericSystem& system, const LabelSpace& labels,
                                            const EntangledWord& word) {
    const auto freqs = system.frequencies();
    OperatorValue value(system.dimension());
    std::vector<FreeGenerator> generators;
    for (const Letter& letter : word) {
        labels.check(letter.label);
        // √(2π [ω(k) = ω]) vanishes off shell.
        if (!labels.on_shell(letter.label)) return value;
        generators.push_back({kTimeLeg, letter.label.time, letter.creator});
        generators.push_back({kFrequencyLeg, omega_index(freqs, letter.label.omega), letter.creator});
        generators.push_back({kMomentumLeg, letter.label.momentum, letter.creator});
    }
    FreeMonomial reduced = free_reduce(generators);
    if (reduced.is_zero() || !reduced.is_scalar()) return value;
    // Each letter carries one √(2π); a fully reduced word has even length.
    value.add(sigma_word(system, word) * reduced.scalar.coeff, static_cast<int>(word.size() / 2));
    return value;
}

OperatorValue direct_vacuum_expectation(const GenericSystem& system, const LabelSpace& labels,
                                        const EntangledWord& word, const ContractionRule& rule) {
    return vacuum_expectation(word_polynomial(system, labels, word), labels, rule);
}

namespace {

// Vector state of a free (Boltzmann) representation: M ⊗ (creator stacks per leg)|0⟩.
// A single term always suffices since free annihilators act deterministically.
struct FreeState {
    bool alive = true;
    ExactMatrix system;
    int power = 0;  // 2π power (tensor) or √(2π) power (factorized)
    std::vector<std::vector<std::int64_t>> legs;

    OperatorValue vacuum_value(bool root_powers, std::size_t dimension) const {
        OperatorValue v(dimension);
        if (!alive) return v;
        for (const auto& leg : legs)
            if (!leg.empty()) return v;
        v.add(system, root_powers ? power / 2 : power);
        return v;
    }
};

struct LetterKeys {
    std::vector<std::int64_t> tensor;      // time, mode
    std::vector<std::int64_t> factorized;  // time, frequency, momentum
    bool on_shell = false;
};

FreeState apply_free(const FreeState& state, const ExactMatrix& sigma, bool creator, const std::vector<std::int64_t>& keys,
                     int power_per_contraction, int power_per_letter, bool require_on_shell_to_contract, bool on_shell) {
    FreeState out;
    if (!state.alive) {
        out.alive = false;
        return out;
    }
    out.system = exact_product(sigma, state.system);
    if (is_zero(out.system)) {
        out.alive = false;
        return out;
    }
    out.power = state.power + power_per_letter;
    out.legs = state.legs;
    if (creator) {
        for (std::size_t i = 0; i < keys.size(); ++i) out.legs[i].push_back(keys[i]);
        return out;
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto& leg = out.legs[i];
        if (leg.empty() || leg.back() != keys[i]) {
            out.alive = false;
            return out;
        }
        leg.pop_back();
    }
    if (require_on_shell_to_contract && !on_shell) {
        out.alive = false;
        return out;
    }
    out.power += power_per_contraction;
    return out;
}

}  // namespace

Report compare_representations(const GenericSystem& system, const LabelSpace& labels,
                               const RepresentationOptions& options) {
    if (options.max_length < 0) throw Error(ErrorCode::MalformedInput, "max_length must be non-negative");
    Report report;
    report.check = "compare_representations";
    const auto all_freqs = system.frequencies();
    const auto freqs = frequency_set(system, options.omegas);
    SigmaTable sigma(system, freqs);
    const auto n_momenta = static_cast<std::int64_t>(labels.momenta().size());

    std::vector<Letter> letters;
    for (const auto& label : labels.all_labels(freqs)) {
        letters.push_back({false, label});
        letters.push_back({true, label});
    }
    std::vector<LetterKeys> keys;
    for (const Letter& letter : letters) {
        const auto& l = letter.label;
        const std::int64_t w = omega_index(all_freqs, l.omega);
        keys.push_back({{l.time, w * n_momenta + l.momentum}, {l.time, w, l.momentum}, labels.on_shell(l)});
    }

    const auto d = static_cast<Eigen::Index>(system.dimension());
    FockState direct0 = FockState::vacuum(system.dimension());
    FreeState tensor0{true, ExactMatrix::Identity(d, d), 0, std::vector<std::vector<std::int64_t>>(2)};
    FreeState factor0{true, ExactMatrix::Identity(d, d), 0, std::vector<std::vector<std::int64_t>>(3)};

    std::uint64_t evaluated = 0, pruned = 0, nonzero = 0;
    EntangledWord suffix;  // stored reversed: suffix.back() is the leftmost letter

    std::function<void(const FockState&, const FreeState&, const FreeState&, int)> recurse =
        [&](const FockState& direct, const FreeState& tensor, const FreeState& factored, int depth) {
            ++evaluated;
            OperatorValue a = direct.vacuum_component();
            OperatorValue b = tensor.vacuum_value(false, system.dimension());
            OperatorValue c = factored.vacuum_value(true, system.dimension());
            if (!a.is_zero() || !b.is_zero() || !c.is_zero()) ++nonzero;
            if (a != b || a != c) {
                EntangledWord word(suffix.rbegin(), suffix.rend());
                report.add_violation({{"code", "REPRESENTATION_MISMATCH"},
                                      {"word", describe(word, labels)},
                                      {"direct", a.to_string()},
                                      {"tensor", b.to_string()},
                                      {"factorized", c.to_string()}});
            }
            if (depth == options.max_length) return;
            for (std::size_t i = 0; i < letters.size(); ++i) {
                const Letter& letter = letters[i];
                const ExactMatrix& s = sigma.of(letter);
                FockState next_direct = act(sigma, letter, direct, labels, options.rule);
                FreeState next_tensor = apply_free(tensor, s, letter.creator, keys[i].tensor, 1, 0, true,
                                                   keys[i].on_shell);
                FreeState next_factor = factored;
                if (!keys[i].on_shell)
                    next_factor.alive = false;
                else
                    next_factor = apply_free(factored, s, letter.creator, keys[i].factorized, 0, 1, false, true);
                if (next_direct.is_zero() && !next_tensor.alive && !next_factor.alive) {
                    // Every extension is the zero operator in all three representations.
                    pruned += subtree_size(letters.size(), options.max_length - depth - 1);
                    continue;
                }
                suffix.push_back(letter);
                recurse(next_direct, next_tensor, next_factor, depth + 1);
                suffix.pop_back();
            }
        };
    recurse(direct0, tensor0, factor0, 0);

    report.parameters["max_length"] = options.max_length;
    report.parameters["generators"] = letters.size();
    nlohmann::json omegas = nlohmann::json::array();
    for (const auto& w : freqs) omegas.push_back(w.get_str());
    report.parameters["frequencies"] = omegas;
    report.counts["words"] = evaluated + pruned;
    report.counts["words_evaluated"] = evaluated;
    report.counts["words_pruned_zero"] = pruned;
    report.counts["words_nonzero"] = nonzero;
    return report;
}

// ---------------------------------------------------------------- Gram matrices

ComplexMatrix gram_blocks(const GenericSystem& system, const LabelSpace& labels,
                          const std::vector<EntangledVector>& family) {
    const auto d = static_cast<Eigen::Index>(system.dimension());
    const auto n = static_cast<Eigen::Index>(family.size());
    std::vector<FockState> states;
    states.reserve(family.size());
    for (const auto& v : family) states.push_back(module_state(system, labels, v));
    SigmaTable sigma(system, system.frequencies());
    ComplexMatrix blocks = ComplexMatrix::Zero(n * d, n * d);
    for (Eigen::Index i = 0; i < n; ++i) {
        // word(ξ_i)† = c_{L_n} … c_{L_1}: apply c_{L_1} first.
        const auto& creators = family[static_cast<std::size_t>(i)].creators;
        for (Eigen::Index j = 0; j < n; ++j) {
            FockState s = states[static_cast<std::size_t>(j)];
            for (auto it = creators.begin(); it != creators.end() && !s.is_zero(); ++it)
                s = act(sigma, Letter{false, *it}, s, labels);
            blocks.block(i * d, j * d, d, d) = s.vacuum_component().evaluate();
        }
    }
    return blocks;
}

ComplexMatrix compress_gram(const ComplexMatrix& blocks, std::size_t dimension, const ComplexVector& psi) {
    const auto d = static_cast<Eigen::Index>(dimension);
    const Eigen::Index n = blocks.rows() / d;
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = psi.dot(blocks.block(i * d, j * d, d, d) * psi);
    return out;
}

double min_hermitian_eigenvalue(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace qboltz
