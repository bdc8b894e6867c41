#include "qboltz/free_algebra.hpp"

namespace qboltz {

ScalarExpr kronecker_weight(int /*family*/, std::int64_t annihilated, std::int64_t created) {
    return {ExactComplex(annihilated == created ? 1 : 0), 0};
}

bool FreeMonomial::is_scalar() const {
    for (const auto& [family, word] : legs)
        if (!word.empty()) return false;
    return true;
}

FreeMonomial free_reduce(const std::vector<FreeGenerator>& word, const ContractionWeight& weight) {
    FreeMonomial out;
    for (const FreeGenerator& g : word) {
        auto& leg = out.legs[g.family];
        if (g.creator && !leg.empty() && !leg.back().creator) {
            ScalarExpr w = weight(g.family, leg.back().key, g.key);
            if (w.is_zero()) return {ScalarExpr{ExactComplex(0), 0}, {}};
            out.scalar = out.scalar * w;
            leg.pop_back();
        } else {
            leg.push_back(g);
        }
    }
    for (auto it = out.legs.begin(); it != out.legs.end();) {
        if (it->second.empty())
            it = out.legs.erase(it);
        else
            ++it;
    }
    return out;
}

}  // namespace qboltz
