#pragma once

#include "tkindex/ktheory.hpp"

#include <string>
#include <vector>

namespace tkindex::verify {

struct CheckResult {
    std::string name;
    std::string instance;
    enum Verdict { Pass, Fail, Unknown } verdict = Unknown;
    std::string detail;  // counterexample coefficient or blocking verdict source
    double millis = 0.0;
};

struct Report {
    std::string suite;
    unsigned long long seed = 0;
    Int window_radius = 12;
    std::vector<CheckResult> checks;

    int fails() const;
    int unknowns() const;
    bool all_pass() const { return fails() == 0 && unknowns() == 0; }
};

struct SuiteOptions {
    unsigned long long seed = 1;
    int trials = 50;
    Int window_radius = 12;
    int max_rank = 3;
    int max_weights = 6;
    int flag_limit = 6;
};

// Random desk-scale instances: rank <= max_rank, <= max_weights weights,
// coordinates in [-3, 3], occasional torsion factor.
struct InstanceGen {
    explicit InstanceGen(const SuiteOptions& opt);
    GModule next_module(bool allow_torsion = true);
    PolarizingVector admissible_beta(const GModule& v);
    FiniteCharacter next_finite(const CharacterGroup& g, int max_terms = 3);
    unsigned long long raw();

  private:
    SuiteOptions opt_;
    unsigned long long state_;
};

// wedge(V) x polarized_inverse(V, beta) == 1, exactly.
Report check_inverse_identity(const SuiteOptions& opt);

// wedge_conj x cauchy_riemann == 0 exactly; window equality with the
// difference of the two pushed Thom indices.
Report check_thom_pm(const SuiteOptions& opt);

// Exactness of the induction sequence along chi (free coordinates only).
Report check_exact_sequence(const IntVec& chi, const SuiteOptions& opt);

// Membership of the generator indices for a fixed module.
Report check_generators_membership(const GModule& v, const SuiteOptions& opt);

// Decomposition evidence: independence of single-level images, the
// exchange identity over all stabilizer pairs, induction compatibility.
Report check_decomposition(const GModule& v, const SuiteOptions& opt);

// The standard battery with fixed instances (used by the determinism
// criterion; output must be byte-identical for equal seeds).
std::vector<Report> run_battery(const SuiteOptions& opt);

// JSON-lines rendering: one object per check. Timings are emitted only on
// request so that equal-seed runs are byte-identical.
std::string to_json_lines(const Report& r, bool include_timing = false);
std::string to_text(const Report& r);

}  // namespace tkindex::verify
