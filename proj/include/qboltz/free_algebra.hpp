// free_algebra.hpp — Quantum Boltzmann (free) generators: a_i a*_j = δ_ij and nothing else.
//
// Generators carry a family tag. Different families live on different tensor legs and
// commute; inside a family no two generators commute, so a*_i a*_j ≠ a*_j a*_i.

#pragma once

#include "qboltz/algebra.hpp"

#include <functional>
#include <map>
#include <vector>

namespace qboltz {

struct FreeGenerator {
    int family = 0;
    std::int64_t key = 0;
    bool creator = false;

    friend bool operator==(const FreeGenerator&, const FreeGenerator&) = default;
    friend auto operator<=>(const FreeGenerator&, const FreeGenerator&) = default;
};

/// Scalar produced by a_i a*_j for generators of one family.
using ContractionWeight = std::function<ScalarExpr(int family, std::int64_t annihilated, std::int64_t created)>;

/// δ_ij with weight 1.
ScalarExpr kronecker_weight(int family, std::int64_t annihilated, std::int64_t created);

/// scalar · Π_family (creators…)(annihilators…); a zero scalar means the word vanished.
struct FreeMonomial {
    ScalarExpr scalar;
    std::map<int, std::vector<FreeGenerator>> legs;

    bool is_zero() const { return scalar.is_zero(); }
    /// True when every leg reduced to the empty word (a pure scalar).
    bool is_scalar() const;
    friend bool operator==(const FreeMonomial&, const FreeMonomial&) = default;
};

/// Exhaustive reduction by a_i a*_j → weight(i, j). Never reorders two generators of
/// the same family; the result per family is creators followed by annihilators.
FreeMonomial free_reduce(const std::vector<FreeGenerator>& word,
                         const ContractionWeight& weight = kronecker_weight);

}  // namespace qboltz
