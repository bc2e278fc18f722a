#include "tkindex/charring.hpp"

#include <algorithm>
#include <sstream>

namespace tkindex {

FiniteCharacter add(const FiniteCharacter& a, const FiniteCharacter& b) {
    FiniteCharacter r = a;
    for (const auto& [w, c] : b.coeffs()) r.add(w, c);
    return r;
}

FiniteCharacter sub(const FiniteCharacter& a, const FiniteCharacter& b) {
    FiniteCharacter r = a;
    for (const auto& [w, c] : b.coeffs()) r.add(w, -c);
    return r;
}

FiniteCharacter scalar_mul(Int k, const FiniteCharacter& a) {
    FiniteCharacter r(a.group());
    if (k == 0) return r;
    for (const auto& [w, c] : a.coeffs()) r.add(w, k * c);
    return r;
}

FiniteCharacter mul(const FiniteCharacter& a, const FiniteCharacter& b) {
    FiniteCharacter r(a.group());
    for (const auto& [wa, ca] : a.coeffs())
        for (const auto& [wb, cb] : b.coeffs()) r.add(weight_add(a.group(), wa, wb), ca * cb);
    return r;
}

FiniteCharacter conjugate(const FiniteCharacter& a) {
    FiniteCharacter r(a.group());
    for (const auto& [w, c] : a.coeffs()) r.add(weight_neg(a.group(), w), c);
    return r;
}

GModule conjugate(const GModule& v) {
    std::vector<Weight> ws;
    ws.reserve(v.weights.size());
    for (const Weight& w : v.weights) ws.push_back(weight_neg(v.group, w));
    return GModule(v.group, std::move(ws), v.trivial_real_dim);
}

FiniteCharacter wedge(const GModule& v) {
    FiniteCharacter r = FiniteCharacter::one(v.group);
    for (const Weight& w : v.weights) {
        FiniteCharacter f = FiniteCharacter::one(v.group);
        f.add(w, -1);
        r = mul(r, f);
    }
    return r;
}

FiniteCharacter wedge_conj(const GModule& v) { return wedge(conjugate(v)); }

FiniteCharacter det_character(const GModule& v) {
    Weight s = zero_weight(v.group);
    for (const Weight& w : v.weights) s = weight_add(v.group, s, w);
    return FiniteCharacter::monomial(v.group, s);
}

std::map<IntVec, FiniteCharacter> restrict_and_grade(const FiniteCharacter& a, const Subspace& h) {
    TorusRestriction t = torus_restriction(h);
    std::map<IntVec, FiniteCharacter> out;
    for (const auto& [w, c] : a.coeffs()) {
        IntVec mu = t.project(w);
        auto [it, inserted] = out.emplace(mu, FiniteCharacter(a.group()));
        it->second.add(w, c);
    }
    return out;
}

namespace {

Int grade_of(const Weight& w) {
    Int g = 0;
    for (Int x : w.free) g += std::llabs(x);
    return g;
}

}  // namespace

std::string render_weight_monomial(const CharacterGroup& g, const Weight& w) {
    if (g.rank == 1 && g.torsion_size() == 0) {
        Int k = w.free[0];
        if (k == 0) return "1";
        if (k == 1) return "t";
        return "t^" + std::to_string(k);
    }
    std::ostringstream os;
    os << "x^[";
    for (int i = 0; i < g.rank; ++i) {
        if (i) os << ",";
        os << w.free[i];
    }
    if (g.torsion_size() > 0) {
        os << ";";
        for (int i = 0; i < g.torsion_size(); ++i) {
            if (i) os << ",";
            os << w.torsion[i];
        }
    }
    os << "]";
    return os.str();
}

std::string render(const FiniteCharacter& a) {
    if (a.empty()) return "0";
    std::vector<std::pair<Weight, Int>> items(a.coeffs().begin(), a.coeffs().end());
    std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
        Int gx = grade_of(x.first), gy = grade_of(y.first);
        if (gx != gy) return gx < gy;
        return x.first < y.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : items) {
        Int mag = c < 0 ? -c : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        std::string mono = render_weight_monomial(a.group(), w);
        if (mag != 1 || mono == "1") {
            os << mag;
            if (mono != "1") os << "*" << mono;
        } else {
            os << mono;
        }
    }
    return os.str();
}

std::optional<FiniteCharacter> divide_by_one_minus(const FiniteCharacter& a, const Weight& step) {
    if (step.has_zero_differential())
        throw InvariantError("division step must have nonzero differential");
    if (a.empty()) return FiniteCharacter(a.group());

    // Order monomials by the exact level <diff, step.free>; dividing by
    // (1 - x^step) peels the minimal monomial and pushes it one step up.
    const IntVec& dir = step.free;
    auto level = [&](const Weight& w) { return dot(w.free, dir); };

    Int max_level = level(a.coeffs().begin()->first);
    for (const auto& [w, c] : a.coeffs()) max_level = std::max(max_level, level(w));

    FiniteCharacter rem = a;
    FiniteCharacter quot(a.group());
    while (!rem.empty()) {
        const Weight* minw = nullptr;
        Int minlev = 0;
        for (const auto& [w, c] : rem.coeffs()) {
            Int l = level(w);
            if (!minw || l < minlev || (l == minlev && w < *minw)) { minw = &w; minlev = l; }
        }
        if (minlev > max_level) return std::nullopt;
        Weight m = *minw;
        Int c = rem.at(m);
        quot.add(m, c);
        rem.add(m, -c);
        rem.add(weight_add(a.group(), m, step), c);
    }
    return quot;
}

}  // namespace tkindex
