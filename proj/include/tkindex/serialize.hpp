#pragma once

#include "tkindex/ktheory.hpp"

#include "json.hpp"

namespace tkindex::io {

using nlohmann::json;

json to_json(const CharacterGroup& g);
CharacterGroup group_from_json(const json& j);

json to_json(const CharacterGroup& g, const Weight& w);
Weight weight_from_json(const CharacterGroup& g, const json& j);

json to_json(const GModule& v);
GModule module_from_json(const CharacterGroup& g, const json& j);

json to_json(const FiniteCharacter& f);
FiniteCharacter finite_from_json(const CharacterGroup& g, const json& j);

json to_json(const PolarizingVector& p);
PolarizingVector polarizing_from_json(const json& j);

json to_json(const Subspace& s);
Subspace subspace_from_json(int ambient, const json& j);

json to_json(const CharacterGroup& g, const Flag& f);
Flag flag_from_json(const CharacterGroup& g, const json& j);

json to_json(const GenChar& phi);
GenChar genchar_from_json(const CharacterGroup& g, const json& j);

json to_json(const KClass& k);
KClass kclass_from_json(const CharacterGroup& g, const json& j);

json to_json(const Window& w);
Window window_from_json(const json& j);

}  // namespace tkindex::io
