// oracle.hpp — truncated-Fock matrix representation, the independent check on the rewrite engine.
//
// Nothing here touches the symbolic normal-ordering code: operators are assembled from
// Kronecker products of σ±_ω with √(2π)-scaled ladder matrices, one mode per on-shell
// label (ω, t, k). Off-shell labels have no mode and act as the zero operator.
// Basis index of e_i ⊗ |n_1 … n_M⟩ is i·fock_dimension + Σ n_m (N+1)^(M−1−m).

#pragma once

#include "qboltz/algebra.hpp"
#include "qboltz/report.hpp"

#include <Eigen/SparseCore>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qboltz {

using SparseComplexMatrix = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;

inline constexpr double kRelationTolerance = 1e-10;
inline constexpr double kConstructionTolerance = 1e-12;
inline constexpr std::size_t kDefaultMaxDimension = 20000;

struct TruncatedFock {
    std::vector<NoiseLabel> modes;  // on-shell, deduplicated, sorted
    int cutoff = 1;                 // N_max, occupations 0..N_max
    std::size_t fock_dimension = 1; // (N_max+1)^#modes
};

class OracleRep {
public:
    const TruncatedFock& fock() const { return fock_; }
    std::size_t system_dimension() const { return system_dimension_; }
    std::size_t dimension() const { return system_dimension_ * fock_.fock_dimension; }
    int cutoff() const { return fock_.cutoff; }

    std::optional<std::size_t> mode_index(const NoiseLabel& label) const;

    /// C_L = σ⁺_ω ⊗ b_L; the zero operator when L has no mode.
    const SparseComplexMatrix& annihilator(const NoiseLabel& label) const;
    /// C*_L = σ⁻_ω ⊗ b*_L.
    const SparseComplexMatrix& creator(const NoiseLabel& label) const;
    const SparseComplexMatrix& letter(const Letter& l) const { return l.creator ? creator(l.label) : annihilator(l.label); }

    /// Single-mode ladder matrix √(2π)·a on N_max+1 levels.
    const ComplexMatrix& single_mode_annihilator() const { return ladder_; }

    /// P_ω = σ⁺_ω σ⁻_ω ⊗ 1
    SparseComplexMatrix projector(const Rational& omega) const;

    /// e_i ⊗ |0⟩
    ComplexVector vacuum_vector(std::size_t system_index) const;
    std::size_t vacuum_index(std::size_t system_index) const { return system_index * fock_.fock_dimension; }

    /// Occupation of each mode for a Fock basis index.
    std::vector<int> occupations(std::size_t fock_index) const;

    /// Largest deviation of [b, b*] from 2π·1 on sub-cutoff states, recorded at build time.
    double commutator_deviation() const { return commutator_deviation_; }

private:
    friend OracleRep build_oracle(const GenericSystem&, const LabelSpace&, int, const std::vector<Rational>&,
                                  std::size_t);

    TruncatedFock fock_;
    std::size_t system_dimension_ = 0;
    std::map<Rational, ComplexMatrix> sigma_plus_;
    ComplexMatrix ladder_;
    std::vector<SparseComplexMatrix> annihilators_;
    std::vector<SparseComplexMatrix> creators_;
    SparseComplexMatrix zero_;
    double commutator_deviation_ = 0.0;
};

/// Throws BadCutoff if cutoff < 1, CapacityExceeded if d·(N+1)^#modes > max_dimension.
OracleRep build_oracle(const GenericSystem& system, const LabelSpace& labels, int cutoff,
                       const std::vector<Rational>& omegas = {}, std::size_t max_dimension = kDefaultMaxDimension);

struct BasisVector {
    std::size_t system_index = 0;
    std::vector<NoiseLabel> creators;  // leftmost first
    ComplexVector vector;
    bool zero = false;
};

/// (Π c*)(e_i ⊗ |0⟩) for every system basis vector and every word over the modes of
/// length ≤ max_order. Throws OrderTooLarge if max_order > N_max·#modes.
std::vector<BasisVector> entangled_basis(const OracleRep& rep, int max_order);

/// ‖(C_L C*_L' − γ(L,L') P_ω) v‖ ≤ tol·‖v‖ for all mode pairs and nonzero basis vectors
/// v of order ≤ max_order whose L'-occupation is below the cutoff.
Report oracle_check_relation(const OracleRep& rep, const LabelSpace& labels, int max_order,
                             double tol = kRelationTolerance);

/// Frobenius norms of C_L C_L and C*_L C*_L for every mode.
Report oracle_check_c_squared(const OracleRep& rep, const LabelSpace& labels, double tol = kConstructionTolerance);

/// Entry (i, j) = ⟨e_i⊗0| word |e_j⊗0⟩. Throws OrderTooLarge if |word| > 2·N_max·#modes.
ComplexMatrix oracle_vacuum_moment(const OracleRep& rep, const EntangledWord& word);

struct MomentReport {
    std::string word;
    OperatorValue symbolic;
    ComplexMatrix oracle;
    double deviation = 0.0;  // max entrywise |symbolic(2π substituted) − oracle|
};

struct CrossValidationOptions {
    int cutoff = 3;
    std::vector<Rational> omegas{};
    ContractionRule rule{};  // symbolic side only
    std::size_t max_dimension = kDefaultMaxDimension;
};

std::vector<MomentReport> cross_validate(const GenericSystem& system, const LabelSpace& labels,
                                         const std::vector<EntangledWord>& words,
                                         const CrossValidationOptions& options = {});

Report summarize(const std::vector<MomentReport>& reports, double tol = kRelationTolerance);

/// Writes header.json plus one row-major little-endian complex64 file per C_L and C*_L.
void dump_oracle(const OracleRep& rep, const LabelSpace& labels, const std::string& directory,
                 std::size_t max_dense_dimension = 4096);

}  // namespace qboltz
