#include "tkindex/problem.hpp"

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

using namespace tkindex;

namespace {

struct CommonArgs {
    std::string problem_path;
    std::string window_spec;
    std::string format = "text";
    unsigned long long seed = 1;
    int limit = 6;
    bool parallel = false;
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_problem) {
    auto* opt = cmd->add_option("--problem,-p", args.problem_path, "problem file (tkindex/1 JSON)");
    if (needs_problem) opt->required();
    cmd->add_option("--window,-w", args.window_spec, "window lo..hi[,lo..hi...] on the free part");
    cmd->add_option("--format,-f", args.format, "output format: text | json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--seed,-s", args.seed, "seed for randomized suites");
    cmd->add_option("--limit,-l", args.limit, "enumeration limit (flags, polarizers)");
    cmd->add_flag("--parallel", args.parallel, "run independent queries concurrently");
    cmd->add_flag("--timings", args.timings, "include timings in verify reports");
}

ProblemFile load_problem(const CommonArgs& args) {
    if (!args.problem_path.empty()) return parse_problem_file(args.problem_path);
    ProblemFile p;
    p.group = CharacterGroup(1, {});
    return p;
}

RunFlags make_flags(const CommonArgs& args, const ProblemFile& p) {
    RunFlags f;
    f.format = args.format;
    f.seed = args.seed;
    f.limit = args.limit;
    f.parallel = args.parallel;
    f.timings = args.timings;
    std::string spec = args.window_spec;
    if (spec.empty()) {
        if (const char* env = std::getenv("TKINDEX_WINDOW_DEFAULT")) spec = env;
    }
    if (!spec.empty()) f.window = parse_window_spec(spec, p.group.rank);
    return f;
}

int emit(const RunResult& r) {
    std::cout << r.output;
    return r.exit_code;
}

io::json parse_inline_json(const std::string& text, const char* what) {
    try {
        return io::json::parse(text);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("malformed ") + what + ": " + e.what());
    }
}

// parse "1,-2" or "1/2,3" into a polarizing-vector JSON array
io::json beta_json(const std::string& s) {
    io::json arr = io::json::array();
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) arr.push_back(part);
    return arr;
}

io::json weight_json(const std::string& s) {
    IntVec free;
    IntVec torsion;
    std::string main = s;
    auto semi = s.find(';');
    if (semi != std::string::npos) main = s.substr(0, semi);
    std::stringstream ss(main);
    std::string part;
    while (std::getline(ss, part, ',')) free.push_back(std::stoll(part));
    io::json j;
    j["free"] = free;
    if (semi != std::string::npos) {
        std::stringstream ts(s.substr(semi + 1));
        while (std::getline(ts, part, ',')) torsion.push_back(std::stoll(part));
        j["torsion"] = torsion;
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact index computations for transversally elliptic classes on linear spaces"};
    app.require_subcommand(1);

    // ---- run: execute the queries of a problem file ----
    CommonArgs run_args;
    auto* cmd_run = app.add_subcommand("run", "execute the queries of a problem file in order");
    std::string run_path;
    cmd_run->add_option("file", run_path, "problem file")->required();
    add_common(cmd_run, run_args, false);

    // ---- ad hoc query subcommands ----
    struct {
        CommonArgs args;
        std::string module;
    } delta;
    auto* cmd_delta = app.add_subcommand("delta", "list the stabilizer subspaces of a module");
    cmd_delta->add_option("module", delta.module)->required();
    add_common(cmd_delta, delta.args, true);

    struct {
        CommonArgs args;
        std::string module, beta;
    } ithom;
    auto* cmd_ithom = app.add_subcommand("index-thom", "index of the pushed Thom class of a module");
    cmd_ithom->add_option("module", ithom.module)->required();
    cmd_ithom->add_option("--beta,-b", ithom.beta, "polarizing vector, e.g. 1 or 1,-2")->required();
    add_common(cmd_ithom, ithom.args, true);

    struct {
        CommonArgs args;
        std::string module, flag;
    } iflag;
    auto* cmd_iflag = app.add_subcommand("index-flag", "index of a flag class (first enumerated if none given)");
    cmd_iflag->add_option("module", iflag.module)->required();
    cmd_iflag->add_option("--flag", iflag.flag, "flag as JSON {blocks, betas}");
    add_common(cmd_iflag, iflag.args, true);

    struct {
        CommonArgs args;
        std::string gen_char, at;
    } coeff;
    auto* cmd_coeff = app.add_subcommand("coeff", "coefficient of a generalized character at a weight");
    cmd_coeff->add_option("gen_char", coeff.gen_char, "name or expression JSON")->required();
    cmd_coeff->add_option("--at", coeff.at, "weight, e.g. 2,1 or 2;1 with torsion")->required();
    add_common(cmd_coeff, coeff.args, true);

    struct {
        CommonArgs args;
        std::string gen_char;
    } trunc;
    auto* cmd_trunc = app.add_subcommand("truncate", "truncate a generalized character to a window");
    cmd_trunc->add_option("gen_char", trunc.gen_char)->required();
    add_common(cmd_trunc, trunc.args, true);

    struct {
        CommonArgs args;
        std::string module, gen_char;
        bool generalized = false;
    } dm;
    auto* cmd_dm = app.add_subcommand("check-dm", "Dahmen-Michelli membership verdict");
    cmd_dm->add_option("module", dm.module)->required();
    cmd_dm->add_option("gen_char", dm.gen_char)->required();
    add_common(cmd_dm, dm.args, true);
    auto* cmd_f = app.add_subcommand("check-f", "generalized-module membership verdict");
    cmd_f->add_option("module", dm.module)->required();
    cmd_f->add_option("gen_char", dm.gen_char)->required();
    add_common(cmd_f, dm.args, true);

    struct {
        CommonArgs args;
        std::string module, assignments, gammas;
    } dec;
    auto* cmd_dec = app.add_subcommand("decompose", "apply the decomposition map to level assignments");
    cmd_dec->add_option("module", dec.module)->required();
    cmd_dec->add_option("--assignments", dec.assignments, "JSON [{subspace, gen_char}...]")->required();
    cmd_dec->add_option("--gammas", dec.gammas, "JSON [{subspace, gamma}...] (defaults to the schedule)");
    add_common(cmd_dec, dec.args, true);

    struct {
        CommonArgs args;
        std::string module, submodule, gen_char;
    } restr;
    auto* cmd_restr = app.add_subcommand("restrict", "index-level restriction to a submodule");
    cmd_restr->add_option("module", restr.module)->required();
    cmd_restr->add_option("submodule", restr.submodule)->required();
    cmd_restr->add_option("gen_char", restr.gen_char)->required();
    add_common(cmd_restr, restr.args, true);

    struct {
        CommonArgs args;
        std::string chi, gen_char;
    } ind;
    auto* cmd_ind = app.add_subcommand("induce", "induce a generalized character along a surjective character");
    cmd_ind->add_option("--chi", ind.chi, "character, e.g. 2 or 1,0")->required();
    cmd_ind->add_option("gen_char", ind.gen_char, "literal over the quotient group (JSON)")->required();
    add_common(cmd_ind, ind.args, true);

    struct {
        CommonArgs args;
        std::string suite, chi, module;
        int trials = 0;
    } ver;
    auto* cmd_ver = app.add_subcommand("verify", "run a theorem-verification suite");
    cmd_ver->add_option("suite", ver.suite,
                        "inverse-identity | thom-pm | exact-sequence | generators | decomposition | battery")
        ->required();
    cmd_ver->add_option("--chi", ver.chi, "character for exact-sequence, e.g. 2 or 2,3");
    cmd_ver->add_option("--module,-m", ver.module, "module name for generators/decomposition");
    cmd_ver->add_option("--trials", ver.trials, "trial count override");
    add_common(cmd_ver, ver.args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            ProblemFile p = parse_problem_file(run_path);
            return emit(run(p, make_flags(run_args, p)));
        }

        auto one_query = [&](const CommonArgs& args, io::json q) -> int {
            ProblemFile p = load_problem(args);
            p.queries.push_back(std::move(q));
            return emit(run(p, make_flags(args, p)));
        };

        if (cmd_delta->parsed()) return one_query(delta.args, {{"op", "delta"}, {"module", delta.module}});
        if (cmd_ithom->parsed())
            return one_query(ithom.args,
                             {{"op", "index-thom"}, {"module", ithom.module}, {"beta", beta_json(ithom.beta)}});
        if (cmd_iflag->parsed()) {
            io::json q = {{"op", "index-flag"}, {"module", iflag.module}};
            if (!iflag.flag.empty()) q["flag"] = parse_inline_json(iflag.flag, "flag");
            return one_query(iflag.args, q);
        }
        if (cmd_coeff->parsed()) {
            io::json gc = coeff.gen_char.front() == '{' ? parse_inline_json(coeff.gen_char, "gen_char")
                                                        : io::json(coeff.gen_char);
            return one_query(coeff.args, {{"op", "coeff"}, {"gen_char", gc}, {"at", weight_json(coeff.at)}});
        }
        if (cmd_trunc->parsed()) {
            io::json gc = trunc.gen_char.front() == '{' ? parse_inline_json(trunc.gen_char, "gen_char")
                                                        : io::json(trunc.gen_char);
            return one_query(trunc.args, {{"op", "truncate"}, {"gen_char", gc}});
        }
        if (cmd_dm->parsed() || cmd_f->parsed()) {
            io::json gc =
                dm.gen_char.front() == '{' ? parse_inline_json(dm.gen_char, "gen_char") : io::json(dm.gen_char);
            const char* op = cmd_dm->parsed() ? "check-dm" : "check-f";
            return one_query(dm.args, {{"op", op}, {"module", dm.module}, {"gen_char", gc}});
        }
        if (cmd_dec->parsed()) {
            io::json q = {{"op", "decompose"},
                          {"module", dec.module},
                          {"assignments", parse_inline_json(dec.assignments, "assignments")}};
            if (!dec.gammas.empty()) q["gammas"] = parse_inline_json(dec.gammas, "gammas");
            return one_query(dec.args, q);
        }
        if (cmd_restr->parsed()) {
            io::json gc = restr.gen_char.front() == '{' ? parse_inline_json(restr.gen_char, "gen_char")
                                                        : io::json(restr.gen_char);
            return one_query(restr.args, {{"op", "restrict"},
                                          {"module", restr.module},
                                          {"submodule", restr.submodule},
                                          {"gen_char", gc}});
        }
        if (cmd_ind->parsed()) {
            io::json q = {{"op", "induce"},
                          {"chi", weight_json(ind.chi)},
                          {"gen_char", parse_inline_json(ind.gen_char, "gen_char")}};
            return one_query(ind.args, q);
        }
        if (cmd_ver->parsed()) {
            io::json q = {{"op", "verify"}, {"suite", ver.suite}, {"seed", ver.args.seed}};
            if (!ver.chi.empty()) {
                IntVec chi;
                std::stringstream ss(ver.chi);
                std::string part;
                while (std::getline(ss, part, ',')) chi.push_back(std::stoll(part));
                q["chi"] = chi;
            }
            if (!ver.module.empty()) q["module"] = ver.module;
            if (ver.trials > 0) q["trials"] = ver.trials;
            return one_query(ver.args, q);
        }
    } catch (const SchemaError& e) {
        std::cerr << "parse error [" << e.code << "]: " << e.what() << "\n";
        return 2;
    } catch (const InvariantError& e) {
        std::cerr << "parse error [" << e.code << "]: " << e.what() << "\n";
        return 2;
    } catch (const TkError& e) {
        std::cerr << "error [" << e.code << "]: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
