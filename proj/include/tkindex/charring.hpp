#pragma once

#include "tkindex/lattice.hpp"

#include <map>
#include <string>

namespace tkindex {

// Element of R(G) = Z[Ghat]: finite integer combination of weights.
// No zero coefficients are stored.
class FiniteCharacter {
  public:
    FiniteCharacter() = default;
    explicit FiniteCharacter(CharacterGroup g) : group_(std::move(g)) {}

    static FiniteCharacter one(const CharacterGroup& g) {
        FiniteCharacter c(g);
        c.add(zero_weight(g), 1);
        return c;
    }
    static FiniteCharacter monomial(const CharacterGroup& g, const Weight& w, Int c = 1) {
        FiniteCharacter r(g);
        r.add(w, c);
        return r;
    }

    const CharacterGroup& group() const { return group_; }
    const std::map<Weight, Int>& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }
    size_t size() const { return coeffs_.size(); }

    Int at(const Weight& w) const {
        auto it = coeffs_.find(w);
        return it == coeffs_.end() ? 0 : it->second;
    }

    void add(const Weight& w, Int c) {
        if (c == 0) return;
        auto [it, inserted] = coeffs_.emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    bool operator==(const FiniteCharacter& o) const { return group_ == o.group_ && coeffs_ == o.coeffs_; }

  private:
    CharacterGroup group_;
    std::map<Weight, Int> coeffs_;
};

FiniteCharacter add(const FiniteCharacter& a, const FiniteCharacter& b);
FiniteCharacter sub(const FiniteCharacter& a, const FiniteCharacter& b);
FiniteCharacter scalar_mul(Int k, const FiniteCharacter& a);

// Convolution product in Z[Ghat].
FiniteCharacter mul(const FiniteCharacter& a, const FiniteCharacter& b);

// Ring involution negating every weight.
FiniteCharacter conjugate(const FiniteCharacter& a);

GModule conjugate(const GModule& v);

// prod_{alpha in weights(V)} (1 - x^alpha)
FiniteCharacter wedge(const GModule& v);
// prod_{alpha in weights(V)} (1 - x^{-alpha}), the alternating sum of the
// exterior powers of the conjugate module.
FiniteCharacter wedge_conj(const GModule& v);

// Monomial x^{sum of weights} (the determinant character of the module).
FiniteCharacter det_character(const GModule& v);

// Grade a by the restriction to the connected subtorus H = exp h: the
// result maps each restricted weight to the part of a supported on its
// fiber. Reassembles to a; multiplicative for the induced grading.
std::map<IntVec, FiniteCharacter> restrict_and_grade(const FiniteCharacter& a, const Subspace& h);

// Stable text rendering: signed monomial list, graded-lexicographic order
// (grade = sum of |free coords|). Rank-one torsion-free groups render as
// Laurent monomials in t.
std::string render(const FiniteCharacter& a);
std::string render_weight_monomial(const CharacterGroup& g, const Weight& w);

// Divide a by (1 - x^step) exactly in Z[Ghat]; nullopt when not divisible.
// `step` must have nonzero differential.
std::optional<FiniteCharacter> divide_by_one_minus(const FiniteCharacter& a, const Weight& step);

}  // namespace tkindex
