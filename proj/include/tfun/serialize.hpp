#pragma once

// JSON views of every report type (stable field names, deterministic key
// order) and JSON config loaders for the generator specs.

#include <json.hpp>

#include "tfun/calculus.hpp"
#include "tfun/expr.hpp"
#include "tfun/generators.hpp"
#include "tfun/relations.hpp"
#include "tfun/word.hpp"

namespace tfun {

using json = nlohmann::json;

json to_json(const BitSeq& s);
json to_json(const CompatibilityReport& r);
json to_json(const DiffReport& r);
json to_json(const TransitivityCertificate& c);
json to_json(const ProductCheck& c);
json to_json(const ProofProbe& p);
json to_json(const RelationProfile& p);
json to_json(const IndependenceReport& r);
json to_json(const RecoveryResult& r);
json ast_to_json(const Expr& e);

// {"m", "k", "sboxes", "sigma", "epsilon"}; permutations are 0-indexed rows.
TscSpec tsc_from_json(const json& j);

// {"k", "family": {"<control value>": "<expression>", ...},
//  "control": "counter" | [values] | {"lfsr": {"taps", "state0", "bits"}},
//  "p": optional counter period (default: family size)}
WreathSpec wreath_from_json(const json& j);

}  // namespace tfun
