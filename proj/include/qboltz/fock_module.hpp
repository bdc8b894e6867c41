// fock_module.hpp — entangled number vectors and machine checks of the module relations.
//
// The entangled Fock module is spanned by c*_{L1}…c*_{Ln}|0⟩ with coefficients in B(H_S).
// Its B(H_S)-valued inner product is ⟨ξ, η⟩ = ⟨0| word(ξ)† word(η) |0⟩. The checks here
// verify, by exact rewriting with the plain bosonic white-noise rule, that on this module
//
//     c_L c*_L' = 2π [L = L'] [ω(k) = ω] σ⁺_ω σ⁻_ω
//
// holds for generic systems and fails for non-generic ones.

#pragma once

#include "qboltz/algebra.hpp"
#include "qboltz/free_algebra.hpp"
#include "qboltz/report.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace qboltz {

/// c*_{creators[0]} c*_{creators[1]} … |0⟩ (the last creator acts first). Empty = vacuum.
struct EntangledVector {
    std::vector<NoiseLabel> creators;
};

EntangledWord creation_word(const EntangledVector& v);

/// The module element as a FockState (exact, normal-ordered).
FockState module_state(const GenericSystem& system, const LabelSpace& labels, const EntangledVector& v,
                       const ContractionRule& rule = {});

/// vacuum_expectation(adjoint(word(ξ)) · word(η)).
OperatorValue module_inner_product(const GenericSystem& system, const LabelSpace& labels, const EntangledVector& xi,
                                   const EntangledVector& eta, const ContractionRule& rule = {});

/// Whether γ(L, L') = 2π [ω = ω'] [t = t'] [k = k'] [ω(k) = ω] is nonzero.
bool relation_coefficient_nonzero(const NoiseLabel& annihilated, const NoiseLabel& created, const LabelSpace& labels);

/// Frequencies a check ranges over: `requested` if non-empty, else all of F.
std::vector<Rational> frequency_set(const GenericSystem& system, const std::vector<Rational>& requested);

/// c_L c_L and c*_L c*_L are the zero polynomial for every label.
Report check_c_squared(const GenericSystem& system, const LabelSpace& labels,
                       const std::vector<Rational>& omegas = {});

struct RelationCheckOptions {
    int max_order = 3;
    ContractionRule rule{};
    std::vector<Rational> omegas{};
    /// Run on a system that failed validation (counterexample demos).
    bool force = false;
};

/// (c_L c*_L' − γ(L,L') σ⁺_ω σ⁻_ω) v = 0 for every label pair and every entangled
/// vector v of order ≤ max_order. Throws NotGeneric for a non-generic system unless forced.
Report check_module_relation(const GenericSystem& system, const LabelSpace& labels,
                             const RelationCheckOptions& options = {});

/// σ⁺_ω σ⁻_ω' b*_L' b_L v = 0, the term the bosonic rule leaves over.
bool check_residual_vanishing(const GenericSystem& system, const LabelSpace& labels, const NoiseLabel& annihilated,
                              const NoiseLabel& created, const EntangledVector& v, const ContractionRule& rule = {});

/// Deterministic search over vectors of order ≤ max_order (and all label pairs) for a
/// nonvanishing residual; every witness is recorded as a violation.
Report search_residual_witnesses(const GenericSystem& system, const LabelSpace& labels, int max_order,
                                 const std::vector<Rational>& omegas = {}, const ContractionRule& rule = {});

struct MomentSequence {
    std::vector<OperatorValue> operator_moments;  // ⟨0|(c_L + c*_L)^n|0⟩ ∈ B(H_S)
    std::vector<std::complex<double>> values;     // sandwiched in ψ
};

/// m_n = ⟨ψ⊗0| (c_L + c*_L)^n |ψ⊗0⟩ for n = 0..n_max.
MomentSequence moment_sequence(const GenericSystem& system, const LabelSpace& labels, const NoiseLabel& label,
                               const ComplexVector& psi, int n_max, const ContractionRule& rule = {});

// --- alternative representations ---------------------------------------------

/// σ⁺_ω c(t) ⊗ c_ω(k) with c(t)c*(t') = [t=t'] and c_ω(k)c*_ω'(k') = 2π[ω(k)=ω][ω=ω'][k=k'].
OperatorValue tensor_vacuum_expectation(const GenericSystem& system, const LabelSpace& labels,
                                        const EntangledWord& word);

/// σ⁺_ω c(t) ⊗ c_ω ⊗ √(2π[ω(k)=ω]) c(k) with three free legs.
OperatorValue factorized_vacuum_expectation(const GenericSystem& system, const LabelSpace& labels,
                                            const EntangledWord& word);

/// Bosonic white-noise representation σ⁺_ω ⊗ b_ω(t,k), through the rewrite engine.
OperatorValue direct_vacuum_expectation(const GenericSystem& system, const LabelSpace& labels,
                                        const EntangledWord& word, const ContractionRule& rule = {});

struct RepresentationOptions {
    int max_length = 6;
    std::vector<Rational> omegas{};
    /// Applied to the direct representation only.
    ContractionRule rule{};
};

/// Every word of length ≤ max_length in {c_L, c*_L}: the three representations give
/// identical exact vacuum expectations. Mismatches are reported as REPRESENTATION_MISMATCH.
Report compare_representations(const GenericSystem& system, const LabelSpace& labels,
                               const RepresentationOptions& options = {});

// --- Gram matrices -------------------------------------------------------------

/// Block matrix [⟨ξ_i, ξ_j⟩] (each block d×d), with 2π substituted.
ComplexMatrix gram_blocks(const GenericSystem& system, const LabelSpace& labels,
                          const std::vector<EntangledVector>& family);

/// [ψ† ⟨ξ_i, ξ_j⟩ ψ] from a block Gram matrix.
ComplexMatrix compress_gram(const ComplexMatrix& blocks, std::size_t dimension, const ComplexVector& psi);

double min_hermitian_eigenvalue(const ComplexMatrix& m);

}  // namespace qboltz
