#include "tkindex/verify.hpp"

#include <chrono>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tkindex::verify {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string describe_module(const GModule& v) {
    std::ostringstream os;
    os << "rank " << v.group.rank;
    if (v.group.torsion_size() > 0) {
        os << " x";
        for (Int d : v.group.torsion_orders) os << " Z/" << d;
    }
    os << ", weights {";
    bool first = true;
    for (const Weight& w : v.weights) {
        if (!first) os << ", ";
        first = false;
        os << render_weight_monomial(v.group, w);
    }
    os << "}";
    return os.str();
}

std::string describe_beta(const PolarizingVector& b) {
    std::ostringstream os;
    os << "beta (";
    for (size_t i = 0; i < b.coords.size(); ++i) {
        if (i) os << ",";
        os << b.coords[i].str();
    }
    os << ")";
    return os.str();
}

std::string weight_str(const CharacterGroup& g, const Weight& w) { return render_weight_monomial(g, w); }

}  // namespace

int Report::fails() const {
    int n = 0;
    for (const auto& c : checks) n += c.verdict == CheckResult::Fail;
    return n;
}

int Report::unknowns() const {
    int n = 0;
    for (const auto& c : checks) n += c.verdict == CheckResult::Unknown;
    return n;
}

// SplitMix64: tiny, fully specified, identical across platforms.
InstanceGen::InstanceGen(const SuiteOptions& opt)
    : opt_(opt), state_(opt.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull) {}

unsigned long long InstanceGen::raw() {
    unsigned long long z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

GModule InstanceGen::next_module(bool allow_torsion) {
    int n = 1 + static_cast<int>(raw() % opt_.max_rank);
    IntVec torsion;
    if (allow_torsion && raw() % 4 == 0) torsion.push_back(2 + static_cast<Int>(raw() % 3));
    CharacterGroup g(n, torsion);
    int count = 1 + static_cast<int>(raw() % opt_.max_weights);
    std::vector<Weight> ws;
    for (int i = 0; i < count; ++i) {
        IntVec f(n);
        bool nz = false;
        for (auto& x : f) { x = static_cast<Int>(raw() % 7) - 3; nz |= x != 0; }
        if (!nz) f[raw() % n] = 1;
        IntVec ts(g.torsion_size());
        for (int j = 0; j < g.torsion_size(); ++j) ts[j] = static_cast<Int>(raw() % g.torsion_orders[j]);
        ws.push_back(make_weight(g, f, ts));
    }
    return GModule(g, std::move(ws));
}

PolarizingVector InstanceGen::admissible_beta(const GModule& v) {
    // random small vectors first, deterministic schedule as fallback
    for (int attempt = 0; attempt < 32; ++attempt) {
        PolarizingVector b;
        bool nz = false;
        for (int i = 0; i < v.group.rank; ++i) {
            Int x = static_cast<Int>(raw() % 9) - 4;
            nz |= x != 0;
            b.coords.push_back(Rat(x));
        }
        if (!nz) continue;
        bool ok = true;
        for (const Weight& w : v.moving_weights())
            if (pair_diff(w, b.coords).is_zero()) { ok = false; break; }
        if (ok) return b;
    }
    return choose_polarizer(GModule(v.group, v.moving_weights()), Subspace::full(v.group.rank));
}

FiniteCharacter InstanceGen::next_finite(const CharacterGroup& g, int max_terms) {
    FiniteCharacter f(g);
    int n = 1 + static_cast<int>(raw() % max_terms);
    for (int i = 0; i < n; ++i) {
        IntVec fr(g.rank);
        for (auto& x : fr) x = static_cast<Int>(raw() % 7) - 3;
        IntVec ts(g.torsion_size());
        for (int j = 0; j < g.torsion_size(); ++j) ts[j] = static_cast<Int>(raw() % g.torsion_orders[j]);
        Int c = static_cast<Int>(raw() % 5) - 2;
        if (c == 0) c = 1;
        f.add(make_weight(g, fr, ts), c);
    }
    return f;
}

Report check_inverse_identity(const SuiteOptions& opt) {
    Report rep;
    rep.suite = "inverse-identity";
    rep.seed = opt.seed;
    rep.window_radius = opt.window_radius;
    InstanceGen gen(opt);
    for (int trial = 0; trial < opt.trials; ++trial) {
        auto t0 = Clock::now();
        GModule v = gen.next_module();
        PolarizingVector beta = gen.admissible_beta(v);
        CheckResult c;
        c.name = "wedge-times-inverse-is-one";
        c.instance = describe_module(v) + ", " + describe_beta(beta);
        GenChar prod = mul_finite(wedge(v), polarized_inverse(v, beta));
        if (prod.terms.empty() && prod.finite == FiniteCharacter::one(v.group)) {
            c.verdict = CheckResult::Pass;
        } else {
            c.verdict = CheckResult::Fail;
            c.detail = "residue: " + render(prod.finite) + " with " + std::to_string(prod.terms.size()) + " terms";
        }
        c.millis = ms_since(t0);
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

Report check_thom_pm(const SuiteOptions& opt) {
    Report rep;
    rep.suite = "thom-pm";
    rep.seed = opt.seed;
    rep.window_radius = opt.window_radius;
    InstanceGen gen(opt);
    for (int trial = 0; trial < opt.trials; ++trial) {
        auto t0 = Clock::now();
        GModule v = gen.next_module();
        PolarizingVector beta = gen.admissible_beta(v);
        CheckResult c;
        c.name = "cauchy-riemann-annihilation";
        c.instance = describe_module(v) + ", " + describe_beta(beta);
        GenChar cr = cauchy_riemann_index(v, beta);
        GenChar z = mul_finite(wedge_conj(GModule(v.group, v.moving_weights())), cr);
        ZeroVerdict zv = is_zero(z);
        if (zv.kind != ZeroVerdict::ProvedZero) {
            c.verdict = zv.kind == ZeroVerdict::ProvedNonzero ? CheckResult::Fail : CheckResult::Unknown;
            c.detail = zv.witness ? "nonzero at " + weight_str(v.group, *zv.witness) : "zero test undecided";
            c.millis = ms_since(t0);
            rep.checks.push_back(std::move(c));
            continue;
        }
        PolarizingVector mb;
        for (const Rat& x : beta.coords) mb.coords.push_back(-x);
        Window w = cube_window(v.group.rank, std::min<Int>(opt.window_radius, 4 + 8 / v.group.rank));
        FiniteCharacter lhs = truncate(cr, w);
        FiniteCharacter rhs = truncate(sub(thom_index(v, mb), thom_index(v, beta)), w);
        if (lhs == rhs) {
            c.verdict = CheckResult::Pass;
        } else {
            c.verdict = CheckResult::Fail;
            c.detail = "window mismatch";
        }
        c.millis = ms_since(t0);
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

Report check_exact_sequence(const IntVec& chi_free, const SuiteOptions& opt) {
    Report rep;
    rep.suite = "exact-sequence";
    rep.seed = opt.seed;
    rep.window_radius = opt.window_radius;
    CharacterGroup g(static_cast<int>(chi_free.size()), {});
    Weight chi = make_weight(g, chi_free);
    auto q = quotient_by_character(g, chi);
    InstanceGen gen(opt);

    std::ostringstream inst;
    inst << "G rank " << g.rank << ", chi " << weight_str(g, chi);

    FiniteCharacter onemx = FiniteCharacter::one(g);
    onemx.add(chi, -1);

    for (int trial = 0; trial < opt.trials; ++trial) {
        {
            auto t0 = Clock::now();
            CheckResult c;
            c.name = "induction-injective";
            c.instance = inst.str() + ", trial " + std::to_string(trial);
            FiniteCharacter psi = gen.next_finite(q.quotient);
            if (psi.empty()) psi = FiniteCharacter::one(q.quotient);
            GenChar ind = induce(from_finite(psi), q);
            Weight theta = psi.coeffs().begin()->first;
            Int got = coefficient_at(ind, q.section(theta));
            if (got == psi.at(theta) && got != 0) c.verdict = CheckResult::Pass;
            else {
                c.verdict = CheckResult::Fail;
                c.detail = "fiber coefficient mismatch at " + weight_str(q.quotient, theta);
            }
            c.millis = ms_since(t0);
            rep.checks.push_back(std::move(c));
        }
        {
            auto t0 = Clock::now();
            CheckResult c;
            c.name = "image-in-kernel";
            c.instance = inst.str() + ", trial " + std::to_string(trial);
            GenChar psi(q.quotient);
            psi.finite = gen.next_finite(q.quotient);
            if (q.quotient.rank > 0 && gen.raw() % 2 == 0) {
                IntVec f(q.quotient.rank, 0);
                f[0] = 1 + static_cast<Int>(gen.raw() % 2);
                psi.terms.push_back(make_term(q.quotient, 1, zero_weight(q.quotient), {make_weight(q.quotient, f)}));
            }
            GenChar ind = induce(psi, q);
            ZeroVerdict zv = is_zero(mul_finite(onemx, ind));
            if (zv.kind == ZeroVerdict::ProvedZero) c.verdict = CheckResult::Pass;
            else {
                c.verdict = zv.kind == ZeroVerdict::ProvedNonzero ? CheckResult::Fail : CheckResult::Unknown;
                c.detail = "kernel certificate failed";
            }
            c.millis = ms_since(t0);
            rep.checks.push_back(std::move(c));
        }
        {
            auto t0 = Clock::now();
            CheckResult c;
            c.name = "kernel-reconstructs";
            c.instance = inst.str() + ", trial " + std::to_string(trial);
            GenChar psi(q.quotient);
            psi.finite = gen.next_finite(q.quotient);
            GenChar ind = induce(psi, q);
            try {
                GenChar back = invert_induction(ind, q);
                Window w = cube_window(q.quotient.rank, opt.window_radius);
                if (truncate(sub(back, psi), w).empty()) c.verdict = CheckResult::Pass;
                else {
                    c.verdict = CheckResult::Fail;
                    c.detail = "round trip differs on the window";
                }
            } catch (const TkError& e) {
                c.verdict = CheckResult::Fail;
                c.detail = std::string("reconstruction error: ") + e.code;
            }
            c.millis = ms_since(t0);
            rep.checks.push_back(std::move(c));
        }
    }
    {
        auto t0 = Clock::now();
        CheckResult c;
        c.name = "non-kernel-rejected";
        c.instance = inst.str();
        GenChar one = from_finite(FiniteCharacter::one(g));
        try {
            invert_induction(one, q);
            c.verdict = CheckResult::Fail;
            c.detail = "constant function accepted as periodic";
        } catch (const NotPeriodicError&) {
            c.verdict = CheckResult::Pass;
        }
        c.millis = ms_since(t0);
        rep.checks.push_back(std::move(c));
    }
    {
        auto t0 = Clock::now();
        CheckResult c;
        c.name = "restriction-onto";
        c.instance = inst.str();
        c.verdict = CheckResult::Pass;
        for (int i = 0; i < 12; ++i) {
            FiniteCharacter f = gen.next_finite(q.quotient, 1);
            if (f.empty()) continue;
            Weight theta = f.coeffs().begin()->first;
            if (!(q.project(q.section(theta)) == theta)) {
                c.verdict = CheckResult::Fail;
                c.detail = "no preimage found for " + weight_str(q.quotient, theta);
                break;
            }
        }
        c.millis = ms_since(t0);
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

Report check_generators_membership(const GModule& v, const SuiteOptions& opt) {
    Report rep;
    rep.suite = "generators-membership";
    rep.seed = opt.seed;
    rep.window_radius = opt.window_radius;
    SearchOptions sopt;
    sopt.window_radius = opt.window_radius;

    for (const PolarizingVector& gamma : enumerate_polarizers(v, 3)) {
        auto t0 = Clock::now();
        CheckResult c;
        c.name = "thom-generator-in-generalized-module";
        c.instance = describe_module(v) + ", " + describe_beta(gamma);
        GenChar idx = thom_index(v, gamma);
        MembershipVerdict m = in_generalized_dm(idx, v, sopt);
        c.verdict = m.kind == MembershipVerdict::ProvedIn
                        ? CheckResult::Pass
                        : (m.kind == MembershipVerdict::ProvedOut ? CheckResult::Fail : CheckResult::Unknown);
        c.detail = m.detail;
        c.millis = ms_since(t0);
        rep.checks.push_back(std::move(c));
    }
    for (const Flag& f : enumerate_flags(v, opt.flag_limit)) {
        auto t0 = Clock::now();
        CheckResult c;
        c.name = "flag-generator-in-dm-module";
        c.instance = describe_module(v) + ", " + std::to_string(f.blocks.size()) + " blocks";
        KClass k;
        k.module = v;
        k.combo.emplace(FlagTag{f}, FiniteCharacter::one(v.group));
        GenChar idx = index_kclass(k);
        MembershipVerdict m = in_dm_module(idx, v, sopt);
        if (m.kind == MembershipVerdict::ProvedIn) {
            MembershipVerdict mf = in_generalized_dm(idx, v, sopt);
            c.verdict = mf.kind == MembershipVerdict::ProvedIn ? CheckResult::Pass : CheckResult::Unknown;
            if (mf.kind != MembershipVerdict::ProvedIn) c.detail = "containment spot check: " + mf.detail;
        } else {
            c.verdict = m.kind == MembershipVerdict::ProvedOut ? CheckResult::Fail : CheckResult::Unknown;
            c.detail = m.detail;
        }
        c.millis = ms_since(t0);
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

Report check_decomposition(const GModule& v, const SuiteOptions& opt) {
    Report rep;
    rep.suite = "decomposition";
    rep.seed = opt.seed;
    rep.window_radius = opt.window_radius;
    const CharacterGroup& g = v.group;
    SearchOptions sopt;
    sopt.window_radius = opt.window_radius;

    std::vector<Subspace> ds = stabilizer_subspaces(v);
    std::map<Subspace, PolarizingVector> gammas;
    for (const Subspace& h : ds) gammas.emplace(h, choose_polarizer(v, h));

    // (i) single-level images: membership and window independence
    std::vector<GenChar> images;
    {
        auto t0 = Clock::now();
        CheckResult c;
        c.name = "level-images-independent";
        c.instance = describe_module(v);
        c.verdict = CheckResult::Pass;
        for (const Subspace& h : ds) {
            auto [fixed_mod, moving_mod] = fixed_submodule(v, h);
            GenChar phi_h(g);
            if (fixed_mod.moving_weights().empty()) {
                phi_h.finite = FiniteCharacter::one(g);
            } else {
                auto flags = enumerate_flags(fixed_mod, 1);
                if (flags.empty()) continue;
                KClass k;
                k.module = fixed_mod;
                k.combo.emplace(FlagTag{flags[0]}, FiniteCharacter::one(g));
                phi_h = index_kclass(k);
            }
            std::map<Subspace, GenChar> assign;
            assign.emplace(h, phi_h);
            GenChar img = decomposition_map(assign, v, gammas);
            MembershipVerdict m = in_generalized_dm(img, v, sopt);
            if (m.kind == MembershipVerdict::ProvedOut) {
                c.verdict = CheckResult::Fail;
                c.detail = "image leaves the generalized module at level dim " + std::to_string(h.dim());
                break;
            }
            images.push_back(img);
        }
        if (c.verdict == CheckResult::Pass && images.size() >= 2) {
            Window w = cube_window(g.rank, std::min<Int>(opt.window_radius, 10));
            std::vector<FiniteCharacter> ts;
            for (const GenChar& img : images) ts.push_back(truncate(img, w));
            std::set<Weight> support;
            for (const auto& t : ts)
                for (const auto& [mono, cc] : t.coeffs()) support.insert(mono);
            IntMat mat;
            for (const auto& t : ts) {
                IntVec row;
                for (const Weight& mono : support) row.push_back(t.at(mono));
                mat.push_back(std::move(row));
            }
            int rank = linalg::rank(mat);
            if (rank != static_cast<int>(images.size())) {
                c.verdict = CheckResult::Fail;
                c.detail = "window rank " + std::to_string(rank) + " of " + std::to_string(images.size());
            }
        }
        c.millis = ms_since(t0);
        rep.checks.push_back(std::move(c));
    }

    // (ii) exchange identity over all ordered stabilizer pairs
    {
        Window w = cube_window(g.rank, std::min<Int>(opt.window_radius, 6));
        GenChar one = from_finite(FiniteCharacter::one(g));
        for (const Subspace& a : ds)
            for (const Subspace& h : ds) {
                auto t0 = Clock::now();
                CheckResult c;
                c.name = "exchange-identity";
                c.instance = describe_module(v) + ", dims (" + std::to_string(a.dim()) + "," +
                             std::to_string(h.dim()) + ")";
                auto chk = mother_formula_check(v, a, h, gammas.at(h), one, w);
                c.verdict = (chk.kind == IdentityCheck::ProvedEqual || chk.kind == IdentityCheck::WindowEqual)
                                ? CheckResult::Pass
                                : (chk.kind == IdentityCheck::Failed ? CheckResult::Fail : CheckResult::Unknown);
                if (chk.witness) c.detail = "differs at " + weight_str(g, *chk.witness);
                c.millis = ms_since(t0);
                rep.checks.push_back(std::move(c));
            }
    }

    // (iii) induction compatibility on an applicable splitting V = W + C_chi
    for (const Weight& chi : v.moving_weights()) {
        auto q = quotient_by_character(g, chi);
        std::vector<Weight> rest;
        bool applicable = true;
        {
            std::vector<Weight> pool = v.weights;
            auto it = std::find(pool.begin(), pool.end(), chi);
            pool.erase(it);
            for (const Weight& x : pool) {
                Weight px = q.project(x);
                if (px.has_zero_differential() && !px.is_zero()) { applicable = false; break; }
                rest.push_back(px);
            }
        }
        if (!applicable) continue;
        auto t0 = Clock::now();
        CheckResult c;
        c.name = "induction-compatibility";
        c.instance = describe_module(v) + ", chi " + weight_str(g, chi);
        GModule w_mod(q.quotient, rest);
        GenChar psi(q.quotient);
        if (w_mod.moving_weights().empty()) {
            psi.finite = FiniteCharacter::one(q.quotient);
        } else {
            auto flags = enumerate_flags(w_mod, 1);
            if (flags.empty()) continue;
            KClass k;
            k.module = w_mod;
            k.combo.emplace(FlagTag{flags[0]}, FiniteCharacter::one(q.quotient));
            psi = index_kclass(k);
        }
        MembershipVerdict below = in_dm_module(psi, w_mod, sopt);
        MembershipVerdict above = in_dm_module(induce(psi, q), v, sopt);
        if (below.kind == MembershipVerdict::ProvedIn && above.kind == MembershipVerdict::ProvedIn)
            c.verdict = CheckResult::Pass;
        else if (below.kind == MembershipVerdict::Unknown || above.kind == MembershipVerdict::Unknown) {
            c.verdict = CheckResult::Unknown;
            c.detail =
                "membership undecided: " + (below.kind == MembershipVerdict::Unknown ? below.detail : above.detail);
        } else {
            c.verdict = CheckResult::Fail;
            c.detail = "membership mismatch across the induction";
        }
        c.millis = ms_since(t0);
        rep.checks.push_back(std::move(c));
        break;  // one applicable splitting suffices per module
    }
    return rep;
}

std::vector<Report> run_battery(const SuiteOptions& opt) {
    std::vector<Report> out;
    SuiteOptions small = opt;
    small.trials = std::min(opt.trials, 25);

    out.push_back(check_inverse_identity(small));
    out.push_back(check_thom_pm(small));
    out.push_back(check_exact_sequence({1}, small));
    out.push_back(check_exact_sequence({2}, small));
    out.push_back(check_exact_sequence({1, 0}, small));
    out.push_back(check_exact_sequence({2, 3}, small));

    CharacterGroup c1(1, {}), c2(2, {});
    auto w1 = [&](Int k) { return make_weight(c1, {k}); };
    auto w2 = [&](Int a, Int b) { return make_weight(c2, {a, b}); };
    std::vector<GModule> modules = {
        GModule(c1, {w1(1)}),
        GModule(c1, {w1(1), w1(1)}),
        GModule(c2, {w2(1, 0), w2(0, 1), w2(1, 1)}),
    };
    {
        InstanceGen gen(opt);
        std::vector<Weight> ws;
        for (int i = 0; i < 4; ++i) {
            IntVec f = {static_cast<Int>(gen.raw() % 7) - 3, static_cast<Int>(gen.raw() % 7) - 3};
            if (is_zero_vec(f)) f[0] = 1;
            ws.push_back(make_weight(c2, f));
        }
        modules.push_back(GModule(c2, ws));
    }
    for (const GModule& v : modules) out.push_back(check_generators_membership(v, small));

    out.push_back(check_decomposition(modules[0], small));
    out.push_back(check_decomposition(modules[2], small));
    return out;
}

std::string to_json_lines(const Report& r, bool include_timing) {
    std::ostringstream os;
    for (const auto& c : r.checks) {
        nlohmann::json j;
        j["suite"] = r.suite;
        j["seed"] = r.seed;
        j["window_radius"] = r.window_radius;
        j["check"] = c.name;
        j["instance"] = c.instance;
        j["verdict"] = c.verdict == CheckResult::Pass ? "pass" : (c.verdict == CheckResult::Fail ? "fail" : "unknown");
        if (!c.detail.empty()) j["detail"] = c.detail;
        if (include_timing) j["ms"] = c.millis;
        os << j.dump() << "\n";
    }
    return os.str();
}

std::string to_text(const Report& r) {
    std::ostringstream os;
    os << "suite " << r.suite << " (seed " << r.seed << ")\n";
    for (const auto& c : r.checks) {
        os << "  [" << (c.verdict == CheckResult::Pass ? "pass" : (c.verdict == CheckResult::Fail ? "FAIL" : "unknown"))
           << "] " << c.name << " -- " << c.instance;
        if (!c.detail.empty()) os << " -- " << c.detail;
        os << "\n";
    }
    os << "  " << r.checks.size() << " checks, " << r.fails() << " failed, " << r.unknowns() << " unknown\n";
    return os.str();
}

}  // namespace tkindex::verify
