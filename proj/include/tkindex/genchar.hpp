#pragma once

#include "tkindex/charring.hpp"
#include "tkindex/lattice.hpp"

#include <map>
#include <optional>

namespace tkindex {

// One polarized geometric-series term
//   coeff * x^numerator * prod_i (sum_{k>=0} x^{k alpha_i}),
// the witness certifies pointedness: <alpha_i, witness> > 0 for all i.
struct PolarizedTerm {
    Int coeff = 0;
    Weight numerator;
    std::vector<Weight> denominators;  // sorted multiset
    PolarizingVector witness;
};

// Element of R^{-inf}(G) as a finite sum of polarized terms plus a finite
// character. The representation is not canonical.
struct GenChar {
    CharacterGroup group;
    std::vector<PolarizedTerm> terms;
    FiniteCharacter finite;

    GenChar() = default;
    explicit GenChar(CharacterGroup g) : group(g), finite(std::move(g)) {}

    bool representation_empty() const { return terms.empty() && finite.empty(); }
};

// Inclusive box on the free part; all torsion values are always included.
struct Window {
    IntVec lower, upper;
};

Window make_window(IntVec lower, IntVec upper);
Window cube_window(int rank, Int radius);

// Construct a term, validating (or computing) the pointedness witness.
PolarizedTerm make_term(const CharacterGroup& g, Int coeff, Weight numerator,
                        std::vector<Weight> denominators,
                        std::optional<PolarizingVector> witness = std::nullopt);

GenChar from_finite(const FiniteCharacter& f);

// ---- coefficient extraction ----

// Shared-memo evaluator; coefficient counting enumerates the solutions of
// numerator + sum k_i alpha_i = mu bounded along the witness direction.
class GenCharEvaluator {
  public:
    explicit GenCharEvaluator(const GenChar& phi);
    Int at(const Weight& mu) const;

  private:
    Int count_term(size_t t, const Weight& mu) const;
    Int count_rec(size_t t, size_t pos, const Weight& tau) const;

    const GenChar& phi_;
    std::vector<IntVec> scaled_witness_;   // integer witness per term
    std::vector<std::vector<Int>> levels_; // witness level of each denominator
    mutable std::map<std::tuple<size_t, size_t, Weight>, Int> memo_;
};

Int coefficient_at(const GenChar& phi, const Weight& mu);
FiniteCharacter truncate(const GenChar& phi, const Window& w);

// ---- abelian-group structure ----

GenChar add(const GenChar& a, const GenChar& b);
GenChar negate(const GenChar& a);
GenChar scalar_mul(Int k, const GenChar& a);
GenChar sub(const GenChar& a, const GenChar& b);

// ---- products ----

// Multiply by a finite character; runs exact cancellation (numerators are
// divided by denominator factors whenever exact division succeeds).
GenChar mul_finite(const FiniteCharacter& p, const GenChar& phi);

// Regroup and cancel without changing the denoted element.
GenChar simplified(const GenChar& phi);

// Product of generalized characters; requires a common pointedness witness
// for every pair of terms (NotSummable otherwise).
GenChar mul_genchar(const GenChar& a, const GenChar& b);

// ---- polarized inverses and index series ----

// [wedge(V)]^{-1} expanded in the chamber of beta: the single term with
// coeff (-1)^{#neg}, numerator -sum_{neg} alpha, denominators
// {alpha : <a,beta> > 0} u {-alpha : <a,beta> < 0}, witness beta.
// Contract: mul_finite(wedge(V), result) == 1 exactly.
GenChar polarized_inverse(const GModule& v, const PolarizingVector& beta);

// Index of the beta-pushed Thom class of the moving part of V; trivial
// summands contribute a factor of 1. Equals
// polarized_inverse(conjugate(moving(V)), beta), so
// mul_finite(wedge_conj(moving V), result) == 1 exactly.
GenChar thom_index(const GModule& v, const PolarizingVector& beta);

// Index of the tangential Cauchy-Riemann class of (V, beta):
// thom_index(V, -beta) - thom_index(V, beta).
GenChar cauchy_riemann_index(const GModule& v, const PolarizingVector& beta);

// ---- induction along a surjective character ----

// Pull back phi (over the quotient group) along the projection: the result
// satisfies coefficient_at(result, mu) == coefficient_at(phi, project(mu)).
GenChar induce(const GenChar& phi, const QuotientByCharacter& q);

// Inverse of `induce` for certified kernel elements of (1 - x^chi):
// NotPeriodic if the kernel certificate fails, ReconstructionUnsupported
// when the fibers are not captured by the documented procedure.
GenChar invert_induction(const GenChar& phi, const QuotientByCharacter& q);

// ---- verdict-producing analysis ----

struct ZeroVerdict {
    enum Kind { ProvedZero, ProvedNonzero, Unknown } kind = Unknown;
    std::optional<Weight> witness;  // weight with nonzero coefficient
};

struct SupportVerdict {
    enum Kind { ProvedFinite, ProvedInfinite, Unknown } kind = Unknown;
    std::optional<Weight> ray_base;
    std::optional<Weight> ray_step;
};

struct SearchOptions {
    Int window_radius = 12;
    int ray_checks = 4;  // K: window cross-checks along a certified ray
};

ZeroVerdict is_zero(const GenChar& phi, const SearchOptions& opt = {});

// Is pi_H(Supp phi) finite for the connected subtorus H = exp h?
SupportVerdict projected_support_finite(const GenChar& phi, const Subspace& h,
                                        const SearchOptions& opt = {});

}  // namespace tkindex
