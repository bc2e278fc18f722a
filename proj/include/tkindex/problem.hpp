#pragma once

#include "tkindex/serialize.hpp"
#include "tkindex/verify.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace tkindex {

// Declarative problem file, schema "tkindex/1": a group, named modules,
// named generalized-character expressions, and a list of queries.
struct ProblemFile {
    CharacterGroup group;
    std::map<std::string, GModule> modules;
    std::map<std::string, io::json> gen_char_exprs;  // declarative expression trees
    std::vector<io::json> queries;
};

ProblemFile parse_problem(std::istream& in);
ProblemFile parse_problem_file(const std::string& path);
io::json problem_to_json(const ProblemFile& p);

struct RunFlags {
    std::optional<Window> window;
    std::string format = "text";  // text | json
    unsigned long long seed = 1;
    int limit = 6;
    bool parallel = false;
    bool timings = false;
};

struct RunResult {
    std::string output;
    int exit_code = 0;  // 0 ok, 2 parse, 3 computation, 4 verification failure
};

// Evaluate a generalized-character expression relative to a problem file.
GenChar eval_gen_char(const ProblemFile& p, const io::json& expr);

// Execute the queries in order; deterministic output for fixed inputs.
RunResult run(const ProblemFile& p, const RunFlags& flags);

// Parse "lo..hi[,lo..hi...]" into a window (one range per free coordinate;
// a single range broadcasts to every coordinate).
Window parse_window_spec(const std::string& spec, int rank);

}  // namespace tkindex
