#pragma once

#include "tkindex/basic.hpp"
#include "tkindex/intlinalg.hpp"

#include <compare>
#include <optional>
#include <set>
#include <vector>

namespace tkindex {

// Character lattice of G = T^n x prod_i Z/d_i, i.e. Z^n (+) (+)_i Z/d_i.
struct CharacterGroup {
    int rank = 0;
    IntVec torsion_orders;  // each >= 2

    CharacterGroup() = default;
    CharacterGroup(int n, IntVec torsion) : rank(n), torsion_orders(std::move(torsion)) {
        if (rank < 0) throw InvariantError("character group rank must be nonnegative");
        for (Int d : torsion_orders)
            if (d < 2) throw InvariantError("torsion orders must be >= 2");
    }

    int torsion_size() const { return static_cast<int>(torsion_orders.size()); }
    bool operator==(const CharacterGroup&) const = default;
};

// A character of G: integer vector on the free part plus residues on the
// torsion part. The differential is the free part viewed in Q^n.
struct Weight {
    IntVec free;
    IntVec torsion;

    auto operator<=>(const Weight&) const = default;
    bool is_zero() const { return is_zero_vec(free) && is_zero_vec(torsion); }
    bool has_zero_differential() const { return is_zero_vec(free); }
};

Weight make_weight(const CharacterGroup& g, IntVec free, IntVec torsion = {});
Weight weight_add(const CharacterGroup& g, const Weight& a, const Weight& b);
Weight weight_sub(const CharacterGroup& g, const Weight& a, const Weight& b);
Weight weight_neg(const CharacterGroup& g, const Weight& a);
Weight weight_scale(const CharacterGroup& g, Int k, const Weight& a);
Weight zero_weight(const CharacterGroup& g);

// Pairing of a weight differential with a vector of the Lie algebra.
Rat pair_diff(const Weight& w, const RatVec& xi);

struct PolarizingVector {
    RatVec coords;

    bool is_zero() const {
        for (const Rat& c : coords)
            if (!c.is_zero()) return false;
        return true;
    }
    auto operator<=>(const PolarizingVector&) const = default;
};

// A complex G-module given by its multiset of weights plus a trivial real
// dimension. Zero weights are allowed (trivial complex lines); weights with
// zero differential but nonzero torsion are rejected.
struct GModule {
    CharacterGroup group;
    std::vector<Weight> weights;  // kept sorted: canonical multiset
    int trivial_real_dim = 0;

    GModule() = default;
    GModule(CharacterGroup g, std::vector<Weight> ws, int trivial = 0);

    std::vector<Weight> moving_weights() const;  // nonzero differential
    bool operator==(const GModule&) const = default;
};

// A rational subspace h of g, stored through the saturated annihilator
// lattice L in Hermite form: h = (L (x) R)^perp. Structural equality.
struct Subspace {
    int ambient = 0;
    IntMat perp_basis;  // HNF rows of L, saturated

    Subspace() = default;
    Subspace(int n, IntMat basis);

    int perp_rank() const { return static_cast<int>(perp_basis.size()); }
    int dim() const { return ambient - perp_rank(); }

    static Subspace full(int n) { return Subspace(n, {}); }           // h = g
    static Subspace zero(int n);                                       // h = {0}

    // Q-basis of h itself (integer vectors, saturated).
    IntMat basis() const;

    // Is the differential of w contained in h^perp = L (x) Q?
    bool perp_contains_diff(const Weight& w) const;

    // Does v lie in h?
    bool contains(const RatVec& v) const;

    bool operator==(const Subspace&) const = default;
    auto operator<=>(const Subspace&) const = default;
};

// Ordered block decomposition of the moving weights with one polarizing
// vector per block.
struct Flag {
    std::vector<std::vector<Weight>> blocks;
    std::vector<PolarizingVector> betas;

    auto operator<=>(const Flag&) const = default;
};

// ---------------- operations ----------------

// All infinitesimal stabilizers of points of V: annihilators of the spans
// of subsets of weight differentials, deduplicated. Sorted ascending.
std::vector<Subspace> stabilizer_subspaces(const GModule& v);

Subspace minimal_stabilizer(const GModule& v);

// (V^h, V/V^h): fixed submodule (trivial_real_dim carried over) and its
// multiset complement.
std::pair<GModule, GModule> fixed_submodule(const GModule& v, const Subspace& h);

// Sum of subspaces: annihilator lattice = intersection of the two lattices.
Subspace subspace_sum(const Subspace& a, const Subspace& b);

// Quotient of the character group by the subgroup generated by chi, with
// projection and section maps computed by Smith normal form.
struct QuotientByCharacter {
    CharacterGroup source;
    Weight chi;
    CharacterGroup quotient;

    Weight project(const Weight& w) const;
    Weight section(const Weight& w) const;

    // Differential of the section on the free part of the quotient:
    // row i = differential of section(e_i).
    IntMat section_diff() const;

    // internal data
    IntMat v;          // unimodular, N x N with N = rank + torsion_size of source
    IntMat v_inv;
    IntVec factors;    // invariant factors of the relation lattice, one per leading column
    std::vector<int> torsion_cols;  // columns with factor > 1
    std::vector<int> free_cols;     // columns with factor == 0 (beyond the relation rank)
};

QuotientByCharacter quotient_by_character(const CharacterGroup& g, const Weight& chi);

// Restriction map pi_H : Ghat -> Hhat for the connected subtorus H = exp h.
// H only sees the free part; the image lattice is Z^n / L (torsion-free
// since L is saturated).
struct TorusRestriction {
    Subspace h;
    IntMat v;  // unimodular change of basis from smith(L)
    int killed = 0;

    IntVec project(const IntVec& free_part) const;
    IntVec project(const Weight& w) const { return project(w.free); }
    bool is_trivial(const Weight& w) const { return is_zero_vec(project(w.free)); }
};

TorusRestriction torus_restriction(const Subspace& h);

bool validate_flag(const GModule& v, const Flag& f);

std::vector<Flag> enumerate_flags(const GModule& v, int limit);

// Deterministic pick of gamma in h pairing nonzero with every weight of
// V/V^h (lattice vectors of h enumerated by increasing max-norm, then
// lexicographically).
PolarizingVector choose_polarizer(const GModule& v, const Subspace& h);

// Enumerate admissible polarizers for the moving part (used to list Thom
// generators); deterministic order, up to `limit`.
std::vector<PolarizingVector> enumerate_polarizers(const GModule& v, int limit);

}  // namespace tkindex
