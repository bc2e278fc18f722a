#include "tkindex/ktheory.hpp"

#include <algorithm>

namespace tkindex {

namespace {

GModule multiset_quotient(const GModule& v, const GModule& w) {
    std::vector<Weight> rest = v.weights;
    for (const Weight& x : w.weights) {
        auto it = std::find(rest.begin(), rest.end(), x);
        if (it == rest.end()) throw NotSubmoduleError("weights of W are not a submultiset of V");
        rest.erase(it);
    }
    return GModule(v.group, std::move(rest));
}

}  // namespace

void validate_kclass(const KClass& k) {
    for (const auto& [tag, coeff] : k.combo) {
        if (std::holds_alternative<ThomTag>(tag)) {
            const auto& t = std::get<ThomTag>(tag);
            for (const Weight& w : k.module.moving_weights())
                if (pair_diff(w, t.gamma.coords).is_zero())
                    throw NotPolarizableError("Thom tag gamma fixes part of the moving module");
        } else {
            const auto& f = std::get<FlagTag>(tag);
            if (!validate_flag(k.module, f.flag)) throw InvariantError("flag tag fails validation");
        }
    }
}

GenChar index_tag(const GModule& v, const GeneratorTag& tag) {
    if (std::holds_alternative<ThomTag>(tag)) return thom_index(v, std::get<ThomTag>(tag).gamma);
    const Flag& f = std::get<FlagTag>(tag).flag;
    GenChar acc = from_finite(FiniteCharacter::one(v.group));
    for (size_t k = 0; k < f.blocks.size(); ++k) {
        GModule block(v.group, f.blocks[k]);
        acc = mul_genchar(acc, cauchy_riemann_index(block, f.betas[k]));
    }
    return acc;
}

GenChar index_kclass(const KClass& k) {
    validate_kclass(k);
    GenChar out(k.module.group);
    for (const auto& [tag, coeff] : k.combo) {
        if (coeff.empty()) continue;
        out = add(out, mul_finite(coeff, index_tag(k.module, tag)));
    }
    return out;
}

bool kclass_equal_on_window(const KClass& a, const KClass& b, const Window& w) {
    return truncate(index_kclass(a), w) == truncate(index_kclass(b), w);
}

GenChar restrict_index(const GenChar& phi, const GModule& v, const GModule& w) {
    GModule rest = multiset_quotient(v, w);
    return mul_finite(wedge_conj(rest), phi);
}

SupportVerdict in_rgh_span(const GenChar& phi, const Subspace& h, const SearchOptions& opt) {
    return projected_support_finite(phi, h, opt);
}

MembershipVerdict in_dm_module(const GenChar& phi, const GModule& v, const SearchOptions& opt) {
    Subspace hmin = minimal_stabilizer(v);
    MembershipVerdict out;
    out.kind = MembershipVerdict::ProvedIn;
    for (const Subspace& h : stabilizer_subspaces(v)) {
        if (h == hmin) continue;
        auto [fixed, moving] = fixed_submodule(v, h);
        ZeroVerdict z = is_zero(mul_finite(wedge_conj(moving), phi), opt);
        if (z.kind == ZeroVerdict::ProvedNonzero) {
            out.kind = MembershipVerdict::ProvedOut;
            out.detail = "annihilation fails at a stabilizer of dimension " + std::to_string(h.dim());
            out.witness = z.witness;
            return out;
        }
        if (z.kind == ZeroVerdict::Unknown) {
            out.kind = MembershipVerdict::Unknown;
            out.detail = "zero test undecided at a stabilizer of dimension " + std::to_string(h.dim());
        }
    }
    SupportVerdict s = projected_support_finite(phi, hmin, opt);
    if (s.kind == SupportVerdict::ProvedInfinite) {
        out.kind = MembershipVerdict::ProvedOut;
        out.detail = "projected support at the minimal stabilizer is infinite";
        out.witness = s.ray_base;
        return out;
    }
    if (s.kind == SupportVerdict::Unknown && out.kind == MembershipVerdict::ProvedIn) {
        out.kind = MembershipVerdict::Unknown;
        out.detail = "support test undecided at the minimal stabilizer";
    }
    return out;
}

MembershipVerdict in_generalized_dm(const GenChar& phi, const GModule& v, const SearchOptions& opt) {
    MembershipVerdict out;
    out.kind = MembershipVerdict::ProvedIn;
    for (const Subspace& h : stabilizer_subspaces(v)) {
        auto [fixed, moving] = fixed_submodule(v, h);
        GenChar prod = mul_finite(wedge_conj(moving), phi);
        SupportVerdict s = projected_support_finite(prod, h, opt);
        if (s.kind == SupportVerdict::ProvedInfinite) {
            out.kind = MembershipVerdict::ProvedOut;
            out.detail = "Euler product has infinite projected support at a stabilizer of dimension " +
                         std::to_string(h.dim());
            out.witness = s.ray_base;
            return out;
        }
        if (s.kind == SupportVerdict::Unknown) {
            out.kind = MembershipVerdict::Unknown;
            out.detail = "support test undecided at a stabilizer of dimension " + std::to_string(h.dim());
        }
    }
    return out;
}

GenChar decomposition_map(const std::map<Subspace, GenChar>& assignments, const GModule& v,
                          const std::map<Subspace, PolarizingVector>& gammas) {
    std::vector<Subspace> delta = stabilizer_subspaces(v);
    GenChar out(v.group);
    for (const auto& [h, phi] : assignments) {
        if (std::find(delta.begin(), delta.end(), h) == delta.end())
            throw InvariantError("assignment key is not a stabilizer of the module");
        auto git = gammas.find(h);
        auto [fixed, moving] = fixed_submodule(v, h);
        if (moving.weights.empty()) {
            out = add(out, phi);  // polarized inverse of the empty module is 1
            continue;
        }
        if (git == gammas.end()) throw GammaNotAdmissibleError("missing gamma for a stabilizer with moving part");
        const PolarizingVector& gamma = git->second;
        if (!h.contains(gamma.coords)) throw GammaNotAdmissibleError("gamma does not lie in its stabilizer");
        for (const Weight& w : moving.weights)
            if (pair_diff(w, gamma.coords).is_zero())
                throw GammaNotAdmissibleError("gamma fixes part of the moving module");
        out = add(out, mul_genchar(polarized_inverse(conjugate(moving), gamma), phi));
    }
    return out;
}

IdentityCheck mother_formula_check(const GModule& v, const Subspace& a, const Subspace& h,
                                   const PolarizingVector& gamma_h, const GenChar& phi, const Window& w) {
    auto [va, va_rest] = fixed_submodule(v, a);
    auto [vh, vh_rest] = fixed_submodule(v, h);
    Subspace ha = subspace_sum(h, a);
    auto [vha, vha_rest] = fixed_submodule(v, ha);

    for (const Weight& x : vh_rest.weights)
        if (pair_diff(x, gamma_h.coords).is_zero())
            throw GammaNotAdmissibleError("gamma_h fixes part of V/V^h");

    GenChar lhs = mul_finite(wedge_conj(va_rest), mul_genchar(polarized_inverse(conjugate(vh_rest), gamma_h), phi));

    GModule vh_over_vha = multiset_quotient(vh, vha);
    GModule va_over_vha = multiset_quotient(va, vha);
    GenChar rhs =
        mul_finite(wedge_conj(vh_over_vha), mul_genchar(polarized_inverse(conjugate(va_over_vha), gamma_h), phi));

    GenChar diff = sub(lhs, rhs);
    ZeroVerdict z = is_zero(diff);
    if (z.kind == ZeroVerdict::ProvedZero) return {IdentityCheck::ProvedEqual, std::nullopt};
    if (z.kind == ZeroVerdict::ProvedNonzero) return {IdentityCheck::Failed, z.witness};

    FiniteCharacter tl = truncate(lhs, w), tr = truncate(rhs, w);
    if (tl == tr) return {IdentityCheck::WindowEqual, std::nullopt};
    FiniteCharacter d = sub(tl, tr);
    return {IdentityCheck::Failed, d.coeffs().begin()->first};
}

}  // namespace tkindex
