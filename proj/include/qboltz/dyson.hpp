// dyson.hpp — master Hamiltonian and the discrete-time Dyson expansion of U_t, U_0 = 1.
//
//   h(t)    = Σ_{ω∈F} Σ_k conj(g_ω(k)) c_ω(t,k) + g_ω(k) c*_ω(t,k)
//   U^(n)   = (−i)^n Δt^n Σ_{t_end ≥ t_1 > … > t_n} h(t_1) … h(t_n)
//
// Time atoms are the declared times in order, spaced uniformly by Δt. Results depend on
// this Riemann-sum convention; there is no continuum claim.

#pragma once

#include "qboltz/algebra.hpp"
#include "qboltz/oracle.hpp"

#include <complex>
#include <map>
#include <vector>

namespace qboltz {

struct InteractionSpec {
    /// (ω, momentum index) → g_ω(k); absent entries are zero.
    std::map<std::pair<Rational, std::uint32_t>, ExactComplex> couplings;
    /// Number of grid points; grid point j is time atom j of the LabelSpace.
    std::size_t points = 0;
    Rational dt{1};

    const ExactComplex& coupling(const Rational& omega, std::uint32_t momentum) const;
};

/// Throws UnknownLabel if `time` is not a grid point.
Polynomial hamiltonian_at(const GenericSystem& system, const LabelSpace& labels, const InteractionSpec& spec,
                          std::uint32_t time);

/// All strictly decreasing tuples t_end ≥ t_1 > … > t_n of grid indices.
std::vector<std::vector<std::uint32_t>> ordered_time_tuples(std::size_t t_end, int n);

struct DysonOptions {
    /// ORDER_TOO_LARGE when C(m, n)·(#terms of h)^n exceeds this.
    std::size_t max_terms = 2'000'000;
};

/// U^(n) before normal ordering (factor order preserved, system legs fused).
Polynomial dyson_term(const GenericSystem& system, const LabelSpace& labels, const InteractionSpec& spec, int n,
                      std::uint32_t t_end, const DysonOptions& options = {});

/// True iff every term's system factor is a multiple of Π σ^±_{ω_i} matching its noise
/// word (σ⁺ with b, σ⁻ with b*), i.e. the term is a fused product of entangled generators.
bool depends_only_on_entangled(const GenericSystem& system, const Polynomial& p);

/// depends_only_on_entangled for every U^(n), n ≤ n_max, at the last grid point.
bool depends_only_on_entangled(const GenericSystem& system, const LabelSpace& labels, const InteractionSpec& spec,
                               int n_max);

struct PropagatorOrder {
    int order = 0;
    OperatorValue symbolic_operator;  // ⟨0|U^(n)|0⟩ ∈ B(H_S)
    ComplexMatrix oracle_operator;
    std::complex<double> symbolic{};  // ⟨ψ|·|ψ'⟩
    std::complex<double> oracle{};
    double deviation = 0.0;  // max over operator entries and the sandwiched value
    /// max |symbolic − oracle| over the components of U^(n)(ψ'⊗0); symbolic components
    /// carrying an off-shell creator are null vectors and are dropped.
    double state_deviation = 0.0;
};

/// Oracle side: (−iΔt)^n Σ_tuples H(t_1)…H(t_n) with H(t) = Σ conj(g) C + g C*.
ComplexMatrix oracle_dyson_vacuum_block(const OracleRep& rep, const LabelSpace& labels, const InteractionSpec& spec,
                                        int n, std::uint32_t t_end);

/// ⟨ψ⊗0| U^(n) |ψ'⊗0⟩ for n = 0..n_max, symbolic and oracle, at the last grid point,
/// plus the full propagated state U^(n)(ψ'⊗0) compared component by component.
std::vector<PropagatorOrder> propagator_matrix_elements(const GenericSystem& system, const LabelSpace& labels,
                                                        const InteractionSpec& spec, const ComplexVector& bra,
                                                        const ComplexVector& ket, int n_max, int cutoff = 3,
                                                        std::size_t max_dimension = kDefaultMaxDimension);

/// ‖Σ_{n ≤ n_max} U^(n) (ψ⊗0)‖² − 1 on the oracle; reported, never asserted.
double unitarity_defect(const OracleRep& rep, const InteractionSpec& spec,
                        const ComplexVector& psi, int n_max);

}  // namespace qboltz
