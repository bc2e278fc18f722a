#include "tkindex/serialize.hpp"

namespace tkindex {

Rat Rat::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(std::stoll(s));
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw SchemaError("malformed rational: " + s);
    }
}

}  // namespace tkindex

namespace tkindex::io {

namespace {

IntVec int_vec(const json& j, const char* what) {
    if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array");
    IntVec v;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw SchemaError(std::string(what) + " entries must be integers");
        v.push_back(x.get<Int>());
    }
    return v;
}

}  // namespace

json to_json(const CharacterGroup& g) {
    json j;
    j["rank"] = g.rank;
    j["torsion"] = g.torsion_orders;
    return j;
}

CharacterGroup group_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rank")) throw SchemaError("group needs a rank field");
    IntVec torsion;
    if (j.contains("torsion")) torsion = int_vec(j["torsion"], "group torsion");
    try {
        return CharacterGroup(j["rank"].get<int>(), torsion);
    } catch (const InvariantError& e) {
        throw SchemaError(std::string("invalid group: ") + e.what());
    }
}

json to_json(const CharacterGroup& g, const Weight& w) {
    json j;
    j["free"] = w.free;
    if (g.torsion_size() > 0) j["torsion"] = w.torsion;
    return j;
}

Weight weight_from_json(const CharacterGroup& g, const json& j) {
    if (!j.is_object() || !j.contains("free")) throw SchemaError("weight needs a free field");
    IntVec free = int_vec(j["free"], "weight free part");
    IntVec torsion;
    if (j.contains("torsion")) torsion = int_vec(j["torsion"], "weight torsion part");
    return make_weight(g, std::move(free), std::move(torsion));
}

json to_json(const GModule& v) {
    json ws = json::array();
    for (const Weight& w : v.weights) ws.push_back(to_json(v.group, w));
    json j;
    j["weights"] = std::move(ws);
    j["trivial_real_dim"] = v.trivial_real_dim;
    return j;
}

GModule module_from_json(const CharacterGroup& g, const json& j) {
    if (!j.is_object() || !j.contains("weights")) throw SchemaError("module needs a weights field");
    std::vector<Weight> ws;
    for (const auto& wj : j["weights"]) ws.push_back(weight_from_json(g, wj));
    int trivial = j.value("trivial_real_dim", 0);
    return GModule(g, std::move(ws), trivial);
}

json to_json(const FiniteCharacter& f) {
    json j = json::array();
    for (const auto& [w, c] : f.coeffs()) {
        json e;
        e["weight"] = to_json(f.group(), w);
        e["coeff"] = c;
        j.push_back(std::move(e));
    }
    return j;
}

FiniteCharacter finite_from_json(const CharacterGroup& g, const json& j) {
    if (!j.is_array()) throw SchemaError("finite character must be an array of {weight, coeff}");
    FiniteCharacter f(g);
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("weight") || !e.contains("coeff"))
            throw SchemaError("finite character entries need weight and coeff");
        f.add(weight_from_json(g, e["weight"]), e["coeff"].get<Int>());
    }
    return f;
}

json to_json(const PolarizingVector& p) {
    json j = json::array();
    for (const Rat& c : p.coords) j.push_back(c.str());
    return j;
}

PolarizingVector polarizing_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("polarizing vector must be an array of rationals");
    PolarizingVector p;
    for (const auto& e : j) {
        if (e.is_number_integer()) p.coords.push_back(Rat(e.get<Int>()));
        else if (e.is_string()) p.coords.push_back(Rat::parse(e.get<std::string>()));
        else throw SchemaError("polarizing vector entries must be integers or 'p/q' strings");
    }
    return p;
}

json to_json(const Subspace& s) {
    json j;
    j["perp_basis"] = s.perp_basis;
    return j;
}

Subspace subspace_from_json(int ambient, const json& j) {
    if (!j.is_object() || !j.contains("perp_basis")) throw SchemaError("subspace needs a perp_basis field");
    IntMat rows;
    for (const auto& r : j["perp_basis"]) rows.push_back(int_vec(r, "perp_basis row"));
    try {
        return Subspace(ambient, rows);
    } catch (const InvariantError& e) {
        throw SchemaError(std::string("invalid subspace: ") + e.what());
    }
}

json to_json(const CharacterGroup& g, const Flag& f) {
    json blocks = json::array();
    for (const auto& b : f.blocks) {
        json bj = json::array();
        for (const Weight& w : b) bj.push_back(to_json(g, w));
        blocks.push_back(std::move(bj));
    }
    json betas = json::array();
    for (const auto& b : f.betas) betas.push_back(to_json(b));
    json j;
    j["blocks"] = std::move(blocks);
    j["betas"] = std::move(betas);
    return j;
}

Flag flag_from_json(const CharacterGroup& g, const json& j) {
    if (!j.is_object() || !j.contains("blocks") || !j.contains("betas"))
        throw SchemaError("flag needs blocks and betas");
    Flag f;
    for (const auto& bj : j["blocks"]) {
        std::vector<Weight> block;
        for (const auto& wj : bj) block.push_back(weight_from_json(g, wj));
        f.blocks.push_back(std::move(block));
    }
    for (const auto& b : j["betas"]) f.betas.push_back(polarizing_from_json(b));
    return f;
}

json to_json(const GenChar& phi) {
    json terms = json::array();
    for (const PolarizedTerm& t : phi.terms) {
        json tj;
        tj["coeff"] = t.coeff;
        tj["numerator"] = to_json(phi.group, t.numerator);
        json dens = json::array();
        for (const Weight& d : t.denominators) dens.push_back(to_json(phi.group, d));
        tj["denominators"] = std::move(dens);
        tj["witness"] = to_json(t.witness);
        terms.push_back(std::move(tj));
    }
    json j;
    j["terms"] = std::move(terms);
    j["finite"] = to_json(phi.finite);
    return j;
}

GenChar genchar_from_json(const CharacterGroup& g, const json& j) {
    if (!j.is_object()) throw SchemaError("generalized character must be an object");
    GenChar phi(g);
    if (j.contains("terms")) {
        for (const auto& tj : j["terms"]) {
            if (!tj.contains("coeff") || !tj.contains("numerator") || !tj.contains("denominators"))
                throw SchemaError("term needs coeff, numerator, denominators");
            std::vector<Weight> dens;
            for (const auto& dj : tj["denominators"]) dens.push_back(weight_from_json(g, dj));
            std::optional<PolarizingVector> witness;
            if (tj.contains("witness")) witness = polarizing_from_json(tj["witness"]);
            try {
                phi.terms.push_back(
                    make_term(g, tj["coeff"].get<Int>(), weight_from_json(g, tj["numerator"]), dens, witness));
            } catch (const InvariantError& e) {
                throw SchemaError(std::string("invalid term: ") + e.what());
            } catch (const NotSummableError& e) {
                throw SchemaError(std::string("invalid term: ") + e.what());
            }
        }
    }
    if (j.contains("finite")) phi.finite = finite_from_json(g, j["finite"]);
    return phi;
}

json to_json(const KClass& k) {
    json combo = json::array();
    for (const auto& [tag, coeff] : k.combo) {
        json e;
        if (std::holds_alternative<ThomTag>(tag)) e["tag"] = json{{"thom", to_json(std::get<ThomTag>(tag).gamma)}};
        else e["tag"] = json{{"flag", to_json(k.module.group, std::get<FlagTag>(tag).flag)}};
        e["coeff"] = to_json(coeff);
        combo.push_back(std::move(e));
    }
    json j;
    j["module"] = to_json(k.module);
    j["combo"] = std::move(combo);
    return j;
}

KClass kclass_from_json(const CharacterGroup& g, const json& j) {
    if (!j.is_object() || !j.contains("module") || !j.contains("combo"))
        throw SchemaError("kclass needs module and combo");
    KClass k;
    k.module = module_from_json(g, j["module"]);
    for (const auto& e : j["combo"]) {
        if (!e.contains("tag") || !e.contains("coeff")) throw SchemaError("combo entries need tag and coeff");
        GeneratorTag tag;
        const json& tj = e["tag"];
        if (tj.contains("thom")) tag = ThomTag{polarizing_from_json(tj["thom"])};
        else if (tj.contains("flag")) tag = FlagTag{flag_from_json(g, tj["flag"])};
        else throw SchemaError("tag must be thom or flag");
        k.combo.emplace(std::move(tag), finite_from_json(g, e["coeff"]));
    }
    return k;
}

json to_json(const Window& w) {
    json j;
    j["lower"] = w.lower;
    j["upper"] = w.upper;
    return j;
}

Window window_from_json(const json& j) {
    if (!j.is_object() || !j.contains("lower") || !j.contains("upper"))
        throw SchemaError("window needs lower and upper");
    try {
        return make_window(int_vec(j["lower"], "window lower"), int_vec(j["upper"], "window upper"));
    } catch (const InvariantError& e) {
        throw SchemaError(std::string("invalid window: ") + e.what());
    }
}

}  // namespace tkindex::io
