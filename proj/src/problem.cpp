#include "tkindex/problem.hpp"

#include <fstream>
#include <future>
#include <sstream>

namespace tkindex {

using io::json;

namespace {

const GModule& named_module(const ProblemFile& p, const std::string& name) {
    auto it = p.modules.find(name);
    if (it == p.modules.end()) throw SchemaError("unknown module: " + name);
    return it->second;
}

Window default_window(const ProblemFile& p, const RunFlags& flags, Int radius = 8) {
    if (flags.window) {
        if (static_cast<int>(flags.window->lower.size()) != p.group.rank)
            throw SchemaError("window rank does not match the group");
        return *flags.window;
    }
    return cube_window(p.group.rank, radius);
}

std::string verdict_name(MembershipVerdict::Kind k) {
    switch (k) {
        case MembershipVerdict::ProvedIn: return "ProvedIn";
        case MembershipVerdict::ProvedOut: return "ProvedOut";
        default: return "Unknown";
    }
}

}  // namespace

Window parse_window_spec(const std::string& spec, int rank) {
    std::vector<std::pair<Int, Int>> ranges;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto dots = part.find("..");
        if (dots == std::string::npos) throw SchemaError("window range must look like lo..hi");
        try {
            ranges.emplace_back(std::stoll(part.substr(0, dots)), std::stoll(part.substr(dots + 2)));
        } catch (const std::exception&) {
            throw SchemaError("malformed window range: " + part);
        }
    }
    if (ranges.empty()) throw SchemaError("empty window spec");
    if (ranges.size() == 1 && rank > 1) ranges.assign(rank, ranges[0]);
    if (static_cast<int>(ranges.size()) != rank) throw SchemaError("window spec rank mismatch");
    IntVec lo, hi;
    for (auto& [l, h] : ranges) {
        lo.push_back(l);
        hi.push_back(h);
    }
    return make_window(std::move(lo), std::move(hi));
}

ProblemFile parse_problem(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("problem file must be a JSON object");
    if (j.value("version", "") != std::string("tkindex/1"))
        throw SchemaError("problem file must declare version \"tkindex/1\"");
    if (!j.contains("group")) throw SchemaError("problem file needs a group");

    ProblemFile p;
    p.group = io::group_from_json(j["group"]);
    if (j.contains("modules")) {
        if (!j["modules"].is_object()) throw SchemaError("modules must be an object");
        for (const auto& [name, mj] : j["modules"].items()) {
            try {
                p.modules.emplace(name, io::module_from_json(p.group, mj));
            } catch (const InvariantError& e) {
                throw InvariantError("module " + name + ": " + e.what());
            }
        }
    }
    if (j.contains("gen_chars")) {
        if (!j["gen_chars"].is_object()) throw SchemaError("gen_chars must be an object");
        for (const auto& [name, ej] : j["gen_chars"].items()) p.gen_char_exprs.emplace(name, ej);
    }
    if (j.contains("queries")) {
        if (!j["queries"].is_array()) throw SchemaError("queries must be an array");
        for (const auto& qj : j["queries"]) p.queries.push_back(qj);
    }
    // eager validation: every expression must evaluate
    for (const auto& [name, expr] : p.gen_char_exprs) {
        try {
            eval_gen_char(p, expr);
        } catch (const TkError& e) {
            throw SchemaError("gen_char " + name + ": " + e.what());
        }
    }
    return p;
}

ProblemFile parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open problem file: " + path);
    return parse_problem(in);
}

json problem_to_json(const ProblemFile& p) {
    json j;
    j["version"] = "tkindex/1";
    j["group"] = io::to_json(p.group);
    json mods = json::object();
    for (const auto& [name, m] : p.modules) mods[name] = io::to_json(m);
    j["modules"] = std::move(mods);
    json gcs = json::object();
    for (const auto& [name, e] : p.gen_char_exprs) gcs[name] = e;
    j["gen_chars"] = std::move(gcs);
    j["queries"] = p.queries;
    return j;
}

GenChar eval_gen_char(const ProblemFile& p, const json& expr) {
    if (expr.is_string()) {
        auto it = p.gen_char_exprs.find(expr.get<std::string>());
        if (it == p.gen_char_exprs.end()) throw SchemaError("unknown gen_char name: " + expr.get<std::string>());
        return eval_gen_char(p, it->second);
    }
    if (!expr.is_object() || expr.size() != 1)
        throw SchemaError("gen_char expression must be a single-key object or a name");
    const std::string op = expr.begin().key();
    const json& arg = expr.begin().value();

    auto module_arg = [&](const json& a) -> GModule {
        if (a.is_string()) return named_module(p, a.get<std::string>());
        return io::module_from_json(p.group, a);
    };

    if (op == "lit") return io::genchar_from_json(p.group, arg);
    if (op == "finite") return from_finite(io::finite_from_json(p.group, arg));
    if (op == "polarized_inverse")
        return polarized_inverse(module_arg(arg.at("module")), io::polarizing_from_json(arg.at("beta")));
    if (op == "index_thom") return thom_index(module_arg(arg.at("module")), io::polarizing_from_json(arg.at("beta")));
    if (op == "cauchy_riemann")
        return cauchy_riemann_index(module_arg(arg.at("module")), io::polarizing_from_json(arg.at("beta")));
    if (op == "flag_index") {
        GModule v = module_arg(arg.at("module"));
        Flag f = io::flag_from_json(p.group, arg.at("flag"));
        KClass k;
        k.module = v;
        k.combo.emplace(FlagTag{f}, FiniteCharacter::one(p.group));
        return index_kclass(k);
    }
    if (op == "mul_finite")
        return mul_finite(io::finite_from_json(p.group, arg.at("finite")), eval_gen_char(p, arg.at("inner")));
    if (op == "mul") {
        const auto& items = arg;
        if (!items.is_array() || items.empty()) throw SchemaError("mul needs a nonempty array");
        GenChar acc = eval_gen_char(p, items[0]);
        for (size_t i = 1; i < items.size(); ++i) acc = mul_genchar(acc, eval_gen_char(p, items[i]));
        return acc;
    }
    if (op == "add") {
        if (!arg.is_array() || arg.empty()) throw SchemaError("add needs a nonempty array");
        GenChar acc = eval_gen_char(p, arg[0]);
        for (size_t i = 1; i < arg.size(); ++i) acc = add(acc, eval_gen_char(p, arg[i]));
        return acc;
    }
    if (op == "negate") return negate(eval_gen_char(p, arg));
    if (op == "scalar_mul") return scalar_mul(arg.at("k").get<Int>(), eval_gen_char(p, arg.at("inner")));
    if (op == "induction") {
        Weight chi = io::weight_from_json(p.group, arg.at("chi"));
        auto q = quotient_by_character(p.group, chi);
        GenChar inner = io::genchar_from_json(q.quotient, arg.at("inner"));
        return induce(inner, q);
    }
    throw SchemaError("unknown gen_char operation: " + op);
}

namespace {

struct QueryOutcome {
    json out;        // structured result
    bool ok = true;  // false on computation error
    bool verify_failed = false;
};

QueryOutcome run_query(const ProblemFile& p, const json& q, const RunFlags& flags) {
    QueryOutcome res;
    json& out = res.out;
    const std::string op = q.at("op").get<std::string>();
    out["op"] = op;

    SearchOptions sopt;

    auto window_for = [&](Int radius) {
        if (q.contains("window")) return io::window_from_json(q["window"]);
        return default_window(p, flags, radius);
    };

    if (op == "delta") {
        const GModule& v = named_module(p, q.at("module").get<std::string>());
        json arr = json::array();
        for (const Subspace& h : stabilizer_subspaces(v)) arr.push_back(io::to_json(h));
        out["stabilizers"] = std::move(arr);
    } else if (op == "index-thom" || op == "index-flag") {
        const GModule& v = named_module(p, q.at("module").get<std::string>());
        GenChar idx(p.group);
        if (op == "index-thom") {
            idx = thom_index(v, io::polarizing_from_json(q.at("beta")));
        } else if (q.contains("flag")) {
            KClass k;
            k.module = v;
            k.combo.emplace(FlagTag{io::flag_from_json(p.group, q["flag"])}, FiniteCharacter::one(p.group));
            idx = index_kclass(k);
        } else {
            auto flags_found = enumerate_flags(v, q.value("limit", flags.limit));
            if (flags_found.empty()) throw InvariantError("no flags found for the module");
            KClass k;
            k.module = v;
            k.combo.emplace(FlagTag{flags_found[0]}, FiniteCharacter::one(p.group));
            idx = index_kclass(k);
            out["flag"] = io::to_json(p.group, flags_found[0]);
        }
        out["series"] = io::to_json(idx);
        Window w = window_for(5);
        out["window"] = io::to_json(w);
        out["truncation"] = render(truncate(idx, w));
    } else if (op == "coeff") {
        GenChar phi = eval_gen_char(p, q.at("gen_char"));
        Weight mu = io::weight_from_json(p.group, q.at("at"));
        out["at"] = io::to_json(p.group, mu);
        out["coeff"] = coefficient_at(phi, mu);
    } else if (op == "truncate") {
        GenChar phi = eval_gen_char(p, q.at("gen_char"));
        Window w = window_for(8);
        FiniteCharacter t = truncate(phi, w);
        out["window"] = io::to_json(w);
        out["truncation"] = render(t);
        out["coeffs"] = io::to_json(t);
    } else if (op == "check-dm" || op == "check-f") {
        const GModule& v = named_module(p, q.at("module").get<std::string>());
        GenChar phi = eval_gen_char(p, q.at("gen_char"));
        MembershipVerdict m = op == "check-dm" ? in_dm_module(phi, v, sopt) : in_generalized_dm(phi, v, sopt);
        out["verdict"] = verdict_name(m.kind);
        if (!m.detail.empty()) out["detail"] = m.detail;
        if (m.witness) out["witness"] = io::to_json(p.group, *m.witness);
    } else if (op == "decompose") {
        const GModule& v = named_module(p, q.at("module").get<std::string>());
        std::map<Subspace, GenChar> assignments;
        for (const auto& a : q.at("assignments")) {
            Subspace h = io::subspace_from_json(p.group.rank, a.at("subspace"));
            assignments.emplace(h, eval_gen_char(p, a.at("gen_char")));
        }
        std::map<Subspace, PolarizingVector> gammas;
        if (q.contains("gammas")) {
            for (const auto& gj : q["gammas"]) {
                Subspace h = io::subspace_from_json(p.group.rank, gj.at("subspace"));
                gammas.emplace(h, io::polarizing_from_json(gj.at("gamma")));
            }
        } else {
            for (const Subspace& h : stabilizer_subspaces(v)) gammas.emplace(h, choose_polarizer(v, h));
        }
        GenChar img = decomposition_map(assignments, v, gammas);
        out["series"] = io::to_json(img);
        Window w = window_for(5);
        out["window"] = io::to_json(w);
        out["truncation"] = render(truncate(img, w));
    } else if (op == "restrict") {
        const GModule& v = named_module(p, q.at("module").get<std::string>());
        const GModule& sub = named_module(p, q.at("submodule").get<std::string>());
        GenChar phi = eval_gen_char(p, q.at("gen_char"));
        GenChar r = restrict_index(phi, v, sub);
        out["series"] = io::to_json(r);
        Window w = window_for(5);
        out["window"] = io::to_json(w);
        out["truncation"] = render(truncate(r, w));
    } else if (op == "induce") {
        Weight chi = io::weight_from_json(p.group, q.at("chi"));
        auto quot = quotient_by_character(p.group, chi);
        GenChar inner = io::genchar_from_json(quot.quotient, q.at("gen_char"));
        GenChar ind = induce(inner, quot);
        out["quotient_group"] = io::to_json(quot.quotient);
        out["series"] = io::to_json(ind);
        Window w = window_for(5);
        out["window"] = io::to_json(w);
        out["truncation"] = render(truncate(ind, w));
    } else if (op == "verify") {
        verify::SuiteOptions vopt;
        vopt.seed = flags.seed;
        if (q.contains("seed")) vopt.seed = q["seed"].get<unsigned long long>();
        if (q.contains("trials")) vopt.trials = q["trials"].get<int>();
        if (q.contains("window_radius")) vopt.window_radius = q["window_radius"].get<Int>();
        vopt.flag_limit = q.value("limit", flags.limit);
        const std::string suite = q.at("suite").get<std::string>();
        std::vector<verify::Report> reports;
        if (suite == "inverse-identity") reports.push_back(verify::check_inverse_identity(vopt));
        else if (suite == "thom-pm") reports.push_back(verify::check_thom_pm(vopt));
        else if (suite == "exact-sequence") {
            IntVec chi = q.contains("chi") ? q["chi"].get<IntVec>() : IntVec{1};
            reports.push_back(verify::check_exact_sequence(chi, vopt));
        } else if (suite == "generators") {
            const GModule& v = named_module(p, q.at("module").get<std::string>());
            reports.push_back(verify::check_generators_membership(v, vopt));
        } else if (suite == "decomposition") {
            const GModule& v = named_module(p, q.at("module").get<std::string>());
            reports.push_back(verify::check_decomposition(v, vopt));
        } else if (suite == "battery") {
            reports = verify::run_battery(vopt);
        } else {
            throw SchemaError("unknown verify suite: " + suite);
        }
        json rj = json::array();
        for (const auto& r : reports) {
            std::istringstream lines(verify::to_json_lines(r, flags.timings));
            std::string line;
            while (std::getline(lines, line)) rj.push_back(json::parse(line));
            if (r.fails() > 0) res.verify_failed = true;
        }
        out["report"] = std::move(rj);
    } else {
        throw SchemaError("unknown query op: " + op);
    }
    return res;
}

std::string render_text(const json& out) {
    std::ostringstream os;
    const std::string op = out.value("op", "?");
    os << "== " << op;
    if (out.contains("error")) {
        os << "\nerror [" << out.value("code", "?") << "]: " << out["error"].get<std::string>() << "\n";
        return os.str();
    }
    if (out.contains("verdict")) os << ": " << out["verdict"].get<std::string>();
    if (out.contains("coeff")) os << ": " << out["coeff"].get<Int>();
    os << "\n";
    if (out.contains("truncation")) os << out["truncation"].get<std::string>() << "\n";
    if (out.contains("stabilizers")) os << out["stabilizers"].dump() << "\n";
    if (out.contains("detail")) os << "detail: " << out["detail"].get<std::string>() << "\n";
    if (out.contains("report")) {
        for (const auto& line : out["report"]) os << line.dump() << "\n";
    }
    return os.str();
}

}  // namespace

RunResult run(const ProblemFile& p, const RunFlags& flags) {
    RunResult res;
    std::vector<QueryOutcome> outcomes(p.queries.size());

    auto work = [&](size_t i) {
        try {
            outcomes[i] = run_query(p, p.queries[i], flags);
        } catch (const TkError& e) {
            outcomes[i].ok = false;
            outcomes[i].out["op"] = p.queries[i].value("op", "?");
            outcomes[i].out["error"] = e.what();
            outcomes[i].out["code"] = e.code;
        } catch (const std::exception& e) {
            outcomes[i].ok = false;
            outcomes[i].out["op"] = p.queries[i].value("op", "?");
            outcomes[i].out["error"] = e.what();
            outcomes[i].out["code"] = "internal";
        }
    };

    if (flags.parallel) {
        std::vector<std::future<void>> futs;
        for (size_t i = 0; i < p.queries.size(); ++i) futs.push_back(std::async(std::launch::async, work, i));
        for (auto& f : futs) f.get();
    } else {
        for (size_t i = 0; i < p.queries.size(); ++i) work(i);
    }

    bool any_error = false, any_verify_fail = false;
    for (auto& o : outcomes) {
        any_error |= !o.ok;
        any_verify_fail |= o.verify_failed;
    }

    if (flags.format == "json") {
        json arr = json::array();
        for (size_t i = 0; i < outcomes.size(); ++i) {
            json e = outcomes[i].out;
            e["query"] = i;
            arr.push_back(std::move(e));
        }
        res.output = arr.dump(2) + "\n";
    } else {
        std::ostringstream os;
        for (size_t i = 0; i < outcomes.size(); ++i) os << render_text(outcomes[i].out);
        res.output = os.str();
    }
    res.exit_code = any_error ? 3 : (any_verify_fail ? 4 : 0);
    return res;
}

}  // namespace tkindex
