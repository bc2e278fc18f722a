#include "tkindex/lattice.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace tkindex {

namespace {

Int mod_reduce(Int x, Int d) {
    Int r = x % d;
    return r < 0 ? r + d : r;
}

}  // namespace

Weight make_weight(const CharacterGroup& g, IntVec free, IntVec torsion) {
    if (static_cast<int>(free.size()) != g.rank)
        throw InvariantError("weight free part has wrong length");
    if (torsion.empty()) torsion.assign(g.torsion_size(), 0);
    if (static_cast<int>(torsion.size()) != g.torsion_size())
        throw InvariantError("weight torsion part has wrong length");
    for (int i = 0; i < g.torsion_size(); ++i) torsion[i] = mod_reduce(torsion[i], g.torsion_orders[i]);
    return Weight{std::move(free), std::move(torsion)};
}

Weight zero_weight(const CharacterGroup& g) {
    return Weight{IntVec(g.rank, 0), IntVec(g.torsion_size(), 0)};
}

Weight weight_add(const CharacterGroup& g, const Weight& a, const Weight& b) {
    Weight r = a;
    for (int i = 0; i < g.rank; ++i) r.free[i] += b.free[i];
    for (int i = 0; i < g.torsion_size(); ++i) r.torsion[i] = mod_reduce(r.torsion[i] + b.torsion[i], g.torsion_orders[i]);
    return r;
}

Weight weight_sub(const CharacterGroup& g, const Weight& a, const Weight& b) {
    return weight_add(g, a, weight_neg(g, b));
}

Weight weight_neg(const CharacterGroup& g, const Weight& a) {
    Weight r = a;
    for (int i = 0; i < g.rank; ++i) r.free[i] = -r.free[i];
    for (int i = 0; i < g.torsion_size(); ++i) r.torsion[i] = mod_reduce(-r.torsion[i], g.torsion_orders[i]);
    return r;
}

Weight weight_scale(const CharacterGroup& g, Int k, const Weight& a) {
    Weight r = a;
    for (int i = 0; i < g.rank; ++i) r.free[i] *= k;
    for (int i = 0; i < g.torsion_size(); ++i) r.torsion[i] = mod_reduce(k * r.torsion[i], g.torsion_orders[i]);
    return r;
}

Rat pair_diff(const Weight& w, const RatVec& xi) { return dot(xi, w.free); }

GModule::GModule(CharacterGroup g, std::vector<Weight> ws, int trivial)
    : group(std::move(g)), weights(std::move(ws)), trivial_real_dim(trivial) {
    if (trivial_real_dim < 0) throw InvariantError("trivial_real_dim must be nonnegative");
    for (const Weight& w : weights) {
        if (static_cast<int>(w.free.size()) != group.rank || static_cast<int>(w.torsion.size()) != group.torsion_size())
            throw InvariantError("module weight does not match group shape");
        if (w.has_zero_differential() && !w.is_zero())
            throw InvariantError("weights with zero differential but nonzero torsion are not supported");
    }
    std::sort(weights.begin(), weights.end());
}

std::vector<Weight> GModule::moving_weights() const {
    std::vector<Weight> out;
    for (const Weight& w : weights)
        if (!w.has_zero_differential()) out.push_back(w);
    return out;
}

Subspace::Subspace(int n, IntMat basis) : ambient(n) {
    perp_basis = linalg::hnf(std::move(basis));
    // Reject non-saturated lattices: saturation must not change the basis.
    IntMat sat = linalg::saturate(perp_basis, ambient);
    if (sat != perp_basis) throw InvariantError("subspace annihilator lattice must be saturated");
}

Subspace Subspace::zero(int n) { return Subspace(n, linalg::identity(n)); }

IntMat Subspace::basis() const {
    if (perp_basis.empty()) return linalg::identity(ambient);
    return linalg::kernel(perp_basis);
}

bool Subspace::perp_contains_diff(const Weight& w) const {
    return linalg::in_span(perp_basis, w.free);
}

bool Subspace::contains(const RatVec& v) const {
    for (const auto& row : perp_basis) {
        Rat s;
        for (int i = 0; i < ambient; ++i) s += v[i] * Rat(row[i]);
        if (!s.is_zero()) return false;
    }
    return true;
}

std::vector<Subspace> stabilizer_subspaces(const GModule& v) {
    const int n = v.group.rank;
    std::vector<IntVec> diffs;
    for (const Weight& w : v.moving_weights()) {
        if (std::find(diffs.begin(), diffs.end(), w.free) == diffs.end()) diffs.push_back(w.free);
    }
    std::set<Subspace> seen;
    const size_t m = diffs.size();
    if (m > 20) throw InvariantError("too many distinct weight differentials for stabilizer enumeration");
    for (size_t mask = 0; mask < (size_t{1} << m); ++mask) {
        IntMat span;
        for (size_t i = 0; i < m; ++i)
            if (mask & (size_t{1} << i)) span.push_back(diffs[i]);
        seen.insert(Subspace(n, linalg::saturate(span, n)));
    }
    return {seen.begin(), seen.end()};
}

Subspace minimal_stabilizer(const GModule& v) {
    IntMat span;
    for (const Weight& w : v.moving_weights()) span.push_back(w.free);
    return Subspace(v.group.rank, linalg::saturate(span, v.group.rank));
}

std::pair<GModule, GModule> fixed_submodule(const GModule& v, const Subspace& h) {
    std::vector<Weight> fixed, moving;
    for (const Weight& w : v.weights) {
        if (h.perp_contains_diff(w)) fixed.push_back(w);
        else moving.push_back(w);
    }
    return {GModule(v.group, std::move(fixed), v.trivial_real_dim), GModule(v.group, std::move(moving), 0)};
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    if (a.ambient != b.ambient) throw InvariantError("subspace_sum: ambient mismatch");
    // h + a corresponds to the intersection of the annihilator lattices,
    // computed through the annihilators of the spans.
    IntMat stacked;
    IntMat ka = a.perp_basis.empty() ? linalg::identity(a.ambient) : linalg::kernel(a.perp_basis);
    IntMat kb = b.perp_basis.empty() ? linalg::identity(b.ambient) : linalg::kernel(b.perp_basis);
    for (const auto& r : ka) stacked.push_back(r);
    for (const auto& r : kb) stacked.push_back(r);
    IntMat inter = stacked.empty() ? linalg::identity(a.ambient) : linalg::kernel(stacked);
    return Subspace(a.ambient, inter);
}

// ----------------- quotient by a character -----------------

QuotientByCharacter quotient_by_character(const CharacterGroup& g, const Weight& chi) {
    if (is_zero_vec(chi.free)) throw ZeroDifferentialError("quotient_by_character requires a weight with nonzero differential");

    const int n = g.rank, s = g.torsion_size(), big = n + s;
    // Ghat = Z^big / R with R spanned by d_i e_{n+i}; add the row for chi.
    IntMat rel;
    for (int i = 0; i < s; ++i) {
        IntVec row(big, 0);
        row[n + i] = g.torsion_orders[i];
        rel.push_back(row);
    }
    IntVec chirow(big, 0);
    for (int i = 0; i < n; ++i) chirow[i] = chi.free[i];
    for (int i = 0; i < s; ++i) chirow[n + i] = chi.torsion[i];
    rel.push_back(chirow);

    auto sm = linalg::smith(rel);

    QuotientByCharacter q;
    q.source = g;
    q.chi = chi;
    q.v = sm.v;
    // invert v: since v is unimodular, solve by Smith of v itself (v = u^-1 d w^-1
    // with d = I); cheaper: Gauss-Jordan over Z using the adjugate via hnf is
    // overkill at this size, so invert with rational elimination and round.
    {
        const int N = big;
        std::vector<RatVec> aug(N, RatVec(2 * N));
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) aug[i][j] = Rat(sm.v[i][j]);
            aug[i][N + i] = Rat(1);
        }
        for (int col = 0; col < N; ++col) {
            int piv = -1;
            for (int i = col; i < N; ++i)
                if (!aug[i][col].is_zero()) { piv = i; break; }
            std::swap(aug[col], aug[piv]);
            Rat p = aug[col][col];
            for (int j = 0; j < 2 * N; ++j) aug[col][j] = aug[col][j] / p;
            for (int i = 0; i < N; ++i) {
                if (i == col || aug[i][col].is_zero()) continue;
                Rat f = aug[i][col];
                for (int j = 0; j < 2 * N; ++j) aug[i][j] -= f * aug[col][j];
            }
        }
        q.v_inv.assign(N, IntVec(N));
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                if (aug[i][N + j].den != 1) throw InvariantError("unimodular inverse not integral");
                q.v_inv[i][j] = aug[i][N + j].num;
            }
    }

    const int r = std::min(static_cast<int>(rel.size()), big);
    q.factors.assign(big, 0);
    for (int i = 0; i < r; ++i) q.factors[i] = (i < static_cast<int>(sm.d.size())) ? sm.d[i][i] : 0;
    IntVec torsion_orders;
    for (int i = 0; i < big; ++i) {
        if (q.factors[i] == 0) q.free_cols.push_back(i);
        else if (q.factors[i] > 1) {
            q.torsion_cols.push_back(i);
            torsion_orders.push_back(q.factors[i]);
        }
    }
    q.quotient = CharacterGroup(static_cast<int>(q.free_cols.size()), torsion_orders);
    return q;
}

Weight QuotientByCharacter::project(const Weight& w) const {
    const int n = source.rank, s = source.torsion_size(), big = n + s;
    IntVec x(big, 0);
    for (int i = 0; i < n; ++i) x[i] = w.free[i];
    for (int i = 0; i < s; ++i) x[n + i] = w.torsion[i];
    IntVec y = linalg::row_times_mat(x, v);
    IntVec free, tors;
    for (int c : free_cols) free.push_back(y[c]);
    for (size_t k = 0; k < torsion_cols.size(); ++k) tors.push_back(mod_reduce(y[torsion_cols[k]], factors[torsion_cols[k]]));
    return make_weight(quotient, std::move(free), std::move(tors));
}

Weight QuotientByCharacter::section(const Weight& w) const {
    const int n = source.rank, s = source.torsion_size(), big = n + s;
    IntVec y(big, 0);
    for (size_t k = 0; k < free_cols.size(); ++k) y[free_cols[k]] = w.free[k];
    for (size_t k = 0; k < torsion_cols.size(); ++k) y[torsion_cols[k]] = w.torsion[k];
    IntVec x = linalg::row_times_mat(y, v_inv);
    IntVec free(x.begin(), x.begin() + n);
    IntVec tors(x.begin() + n, x.end());
    return make_weight(source, std::move(free), std::move(tors));
}

IntMat QuotientByCharacter::section_diff() const {
    IntMat rows;
    for (size_t k = 0; k < free_cols.size(); ++k) {
        Weight e = zero_weight(quotient);
        e.free[k] = 1;
        rows.push_back(section(e).free);
    }
    return rows;
}

// ----------------- torus restriction -----------------

TorusRestriction torus_restriction(const Subspace& h) {
    TorusRestriction t;
    t.h = h;
    const int n = h.ambient;
    if (h.perp_basis.empty()) {
        t.v = linalg::identity(n);
        t.killed = 0;
        return t;
    }
    auto sm = linalg::smith(h.perp_basis);
    // L saturated: all invariant factors are 1; the quotient Z^n / L reads
    // off the trailing columns of x * v.
    t.v = sm.v;
    t.killed = static_cast<int>(h.perp_basis.size());
    return t;
}

IntVec TorusRestriction::project(const IntVec& free_part) const {
    IntVec y = linalg::row_times_mat(free_part, v);
    return IntVec(y.begin() + killed, y.end());
}

// ----------------- flags -----------------

bool validate_flag(const GModule& v, const Flag& f) {
    if (f.blocks.size() != f.betas.size()) throw BlockMismatchError("flag must have one beta per block");
    std::vector<Weight> all;
    for (const auto& b : f.blocks) {
        if (b.empty()) throw BlockMismatchError("flag blocks must be nonempty");
        for (const auto& w : b) all.push_back(w);
    }
    std::sort(all.begin(), all.end());
    if (all != v.moving_weights()) throw BlockMismatchError("flag blocks must partition the moving weights");

    const int s = static_cast<int>(f.blocks.size());
    for (int k = 0; k < s; ++k) {
        for (int j = 0; j < k; ++j)
            for (const Weight& w : f.blocks[j])
                if (!pair_diff(w, f.betas[k].coords).is_zero()) return false;
        for (const Weight& w : f.blocks[k])
            if (pair_diff(w, f.betas[k].coords).is_zero()) return false;
    }

    // The betas together with h_min must decompose g as a direct sum.
    Subspace hmin = minimal_stabilizer(v);
    if (s != hmin.perp_rank()) return false;
    std::vector<RatVec> rows;
    for (const auto& r : hmin.basis()) {
        RatVec rr;
        for (Int x : r) rr.push_back(Rat(x));
        rows.push_back(rr);
    }
    for (const auto& b : f.betas) rows.push_back(b.coords);
    return linalg::rank(rows) == v.group.rank;
}

namespace {

// Integer vectors of length k enumerated by increasing max-norm; within a
// shell, lexicographically from the all-positive corner downwards (so the
// first admissible pick on the circle is +1, not -1). For k == 0 the only
// vector is the empty one; exhaustion is signalled by has_more().
class ShellEnumerator {
  public:
    explicit ShellEnumerator(int k) : k_(k) {}

    bool has_more() const { return k_ > 0 || shell_ == 0; }

    IntVec next() {
        while (true) {
            if (k_ == 0) {
                ++shell_;
                return IntVec{};
            }
            if (!started_) {
                started_ = true;
                cur_.assign(k_, -shell_);
                if (shell_ == 0) return cur_;
                if (on_shell()) return negated();
            }
            while (advance())
                if (on_shell()) return negated();
            ++shell_;
            started_ = false;
            if (shell_ > 40) throw NoAdmissibleGammaError("polarizer search schedule exhausted");
        }
    }

  private:
    bool advance() {
        for (int i = k_ - 1; i >= 0; --i) {
            if (cur_[i] < shell_) {
                ++cur_[i];
                for (int j = i + 1; j < k_; ++j) cur_[j] = -shell_;
                return true;
            }
        }
        return false;
    }
    bool on_shell() const {
        Int m = 0;
        for (Int x : cur_) m = std::max(m, std::llabs(x));
        return m == shell_;
    }
    IntVec negated() const {
        IntVec r = cur_;
        for (Int& x : r) x = -x;
        return r;
    }

    int k_;
    Int shell_ = 0;
    bool started_ = false;
    IntVec cur_;
};

PolarizingVector from_int_vec(const IntVec& v) {
    PolarizingVector p;
    for (Int x : v) p.coords.push_back(Rat(x));
    return p;
}

// First lattice vector of span(rows of basis) pairing nonzero with every
// listed differential and zero with every `kill` differential.
std::optional<PolarizingVector> scheduled_pick(const IntMat& basis, const std::vector<IntVec>& nonzero,
                                               const std::vector<IntVec>& kill, int ambient) {
    const int k = static_cast<int>(basis.size());
    ShellEnumerator shells(k);
    for (int guard = 0; guard < 2000000 && shells.has_more(); ++guard) {
        IntVec c;
        try {
            c = shells.next();
        } catch (const NoAdmissibleGammaError&) {
            return std::nullopt;
        }
        IntVec g(ambient, 0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < ambient; ++j) g[j] += c[i] * basis[i][j];
        bool ok = true;
        for (const auto& d : nonzero)
            if (dot(d, g) == 0) { ok = false; break; }
        if (ok)
            for (const auto& d : kill)
                if (dot(d, g) != 0) { ok = false; break; }
        if (ok) return from_int_vec(g);
    }
    return std::nullopt;
}

}  // namespace

PolarizingVector choose_polarizer(const GModule& v, const Subspace& h) {
    auto [fixed, moving] = fixed_submodule(v, h);
    std::vector<IntVec> diffs;
    for (const Weight& w : moving.moving_weights()) diffs.push_back(w.free);
    IntMat basis = h.basis();
    auto pick = scheduled_pick(basis, diffs, {}, v.group.rank);
    if (!pick) throw NoAdmissibleGammaError("no admissible polarizer for this stabilizer");
    return *pick;
}

std::vector<PolarizingVector> enumerate_polarizers(const GModule& v, int limit) {
    std::vector<IntVec> diffs;
    for (const Weight& w : v.moving_weights()) diffs.push_back(w.free);
    std::vector<PolarizingVector> out;
    ShellEnumerator shells(v.group.rank);
    int guard = 0;
    while (static_cast<int>(out.size()) < limit && guard++ < 2000000 && shells.has_more()) {
        IntVec c;
        try {
            c = shells.next();
        } catch (const NoAdmissibleGammaError&) {
            break;
        }
        bool ok = true;
        for (const auto& d : diffs)
            if (dot(d, c) == 0) { ok = false; break; }
        if (ok) out.push_back(from_int_vec(c));
    }
    return out;
}

namespace {

void ordered_partitions(const std::vector<Weight>& ws, int s, std::vector<int>& assign, size_t pos,
                        const std::function<bool(const std::vector<int>&)>& emit) {
    if (pos == ws.size()) {
        std::vector<bool> used(s, false);
        for (int a : assign) used[a] = true;
        for (bool u : used)
            if (!u) return;
        emit(assign);
        return;
    }
    for (int b = 0; b < s; ++b) {
        // canonical order among equal weights: block indices nondecreasing
        if (pos > 0 && ws[pos] == ws[pos - 1] && b < assign[pos - 1]) continue;
        assign[pos] = b;
        ordered_partitions(ws, s, assign, pos + 1, emit);
    }
}

}  // namespace

std::vector<Flag> enumerate_flags(const GModule& v, int limit) {
    std::vector<Flag> out;
    std::vector<Weight> moving = v.moving_weights();
    Subspace hmin = minimal_stabilizer(v);
    const int s = hmin.perp_rank();
    if (moving.empty()) {
        if (s == 0 && limit > 0) out.push_back(Flag{});
        return out;
    }
    if (s == 0) return out;

    std::vector<int> assign(moving.size(), 0);
    std::function<bool(const std::vector<int>&)> emit = [&](const std::vector<int>& a) {
        if (static_cast<int>(out.size()) >= limit) return false;
        Flag f;
        f.blocks.assign(s, {});
        for (size_t i = 0; i < moving.size(); ++i) f.blocks[a[i]].push_back(moving[i]);
        // pick betas: beta_k kills blocks j<k and pairs nonzero with block k
        for (int k = 0; k < s; ++k) {
            std::vector<IntVec> kill, nonzero;
            for (int j = 0; j < k; ++j)
                for (const Weight& w : f.blocks[j]) kill.push_back(w.free);
            for (const Weight& w : f.blocks[k]) nonzero.push_back(w.free);
            IntMat sub = kill.empty() ? linalg::identity(v.group.rank) : linalg::kernel(kill);
            auto pick = scheduled_pick(sub, nonzero, {}, v.group.rank);
            if (!pick) return true;  // no beta for this partition; skip it
            f.betas.push_back(*pick);
        }
        try {
            if (validate_flag(v, f)) out.push_back(f);
        } catch (const BlockMismatchError&) {
        }
        return true;
    };
    ordered_partitions(moving, s, assign, 0, emit);
    if (static_cast<int>(out.size()) > limit) out.resize(limit);
    return out;
}

}  // namespace tkindex
