#pragma once

#include "tkindex/genchar.hpp"

#include <map>
#include <variant>

namespace tkindex {

// Generator tags for classes on the transversal cotangent space of V:
// a pushed Thom class along gamma, or a flag of Cauchy-Riemann factors.
struct ThomTag {
    PolarizingVector gamma;
    auto operator<=>(const ThomTag&) const = default;
};
struct FlagTag {
    Flag flag;
    auto operator<=>(const FlagTag&) const = default;
};
using GeneratorTag = std::variant<ThomTag, FlagTag>;

// Symbolic K-theory class: an R(G)-combination of generator tags over a
// fixed module. Classes are identified through their indices (the index
// map is injective), so equality is window-certified index equality.
struct KClass {
    GModule module;
    std::map<GeneratorTag, FiniteCharacter> combo;
};

// Tag admissibility: Thom tags need a gamma acting freely on the moving
// part; flag tags must validate.
void validate_kclass(const KClass& k);

GenChar index_tag(const GModule& v, const GeneratorTag& tag);
GenChar index_kclass(const KClass& k);

bool kclass_equal_on_window(const KClass& a, const KClass& b, const Window& w);

// Index-level restriction morphism to the submodule W: multiplication by
// wedge_conj(V/W). NotSubmodule if weights(W) is not a submultiset.
GenChar restrict_index(const GenChar& phi, const GModule& v, const GModule& w);

struct MembershipVerdict {
    enum Kind { ProvedIn, ProvedOut, Unknown } kind = Unknown;
    std::string detail;             // human-readable failing/blocking clause
    std::optional<Weight> witness;  // counterexample coefficient if any
};

// Is the projected support of phi under H = exp h finite, i.e. does phi lie
// in the R(G)-span of R^{-inf}(G/H)?
SupportVerdict in_rgh_span(const GenChar& phi, const Subspace& h, const SearchOptions& opt = {});

// Dahmen-Michelli membership: wedge_conj(V/V^h) x phi == 0 for every
// stabilizer h != h_min, and finite projected support at h_min.
MembershipVerdict in_dm_module(const GenChar& phi, const GModule& v, const SearchOptions& opt = {});

// Generalized membership: wedge_conj(V/V^h) x phi has finite projected
// support for every stabilizer h.
MembershipVerdict in_generalized_dm(const GenChar& phi, const GModule& v, const SearchOptions& opt = {});

// The decomposition map: assignments h -> Phi_h are multiplied by the
// polarized inverses of the conjugate moving parts and summed.
GenChar decomposition_map(const std::map<Subspace, GenChar>& assignments, const GModule& v,
                          const std::map<Subspace, PolarizingVector>& gammas);

struct IdentityCheck {
    enum Kind { ProvedEqual, WindowEqual, Failed, Unknown } kind = Unknown;
    std::optional<Weight> witness;
};

// Exchange identity for a pair of stabilizers: multiplying the polarized
// inverse at h by the full Euler factor at a equals the same expression
// computed inside V^h; verified by exact cancellation plus a window check.
IdentityCheck mother_formula_check(const GModule& v, const Subspace& a, const Subspace& h,
                                   const PolarizingVector& gamma_h, const GenChar& phi, const Window& w);

}  // namespace tkindex
