#include "tfun/serialize.hpp"

namespace tfun {

json to_json(const BitSeq& s) {
  std::string bits(s.bits.size(), '0');
  for (size_t i = 0; i < s.bits.size(); ++i)
    if (s.bits[i]) bits[i] = '1';
  json j{{"bits", bits}};
  if (s.coord >= 0) j["coord"] = s.coord;
  if (s.start != 0) j["start"] = s.start;
  return j;
}

json to_json(const CompatibilityReport& r) {
  json j{{"pass", r.pass}, {"checked", r.checked}};
  if (r.witness)
    j["witness"] = json{{"a", r.witness->a}, {"b", r.witness->b}, {"s", r.witness->s}};
  return j;
}

json to_json(const DiffReport& r) {
  json j{{"M", r.m},
         {"K", r.k},
         {"width", r.width},
         {"verdict", to_string(r.verdict)},
         {"table", r.table}};
  if (r.witness) j["witness"] = json{{"x", r.witness->x}, {"h", r.witness->h}};
  return j;
}

json to_json(const TransitivityCertificate& c) {
  json j{{"verdict", to_string(c.verdict)},
         {"checked_mod", c.checked_mod},
         {"estimate", to_json(c.diff)}};
  if (c.n2 >= 0) j["n2"] = c.n2;
  return j;
}

json to_json(const ProductCheck& c) {
  json j{{"pass", c.pass}, {"n2", c.n2}, {"z_count", c.z_count}};
  if (c.witness_z) j["witness_z"] = *c.witness_z;
  if (c.witness_product) j["witness_product"] = *c.witness_product;
  return j;
}

json to_json(const ProofProbe& p) {
  json phi = json::array();
  for (const PhiSample& s : p.phi) phi.push_back(json{{"x", s.x}, {"phi", s.phi}});
  json j{{"n", p.n},       {"phi", phi},     {"alpha", p.alpha},
         {"beta", p.beta}, {"beta_bits", p.beta_bits}, {"gamma", p.gamma},
         {"lambda", p.lambda}, {"eta", p.eta}};
  if (p.k3 >= 0) j["k3"] = p.k3;
  return j;
}

json to_json(const RelationProfile& p) {
  json j{{"kind", to_string(p.kind)},
         {"n", p.n},
         {"radius", p.radius},
         {"constant", p.constant},
         {"y", to_json(p.y)},
         {"measured_period", p.measured_period},
         {"verdict", to_string(p.verdict)}};
  if (p.witness) j["witness"] = *p.witness;
  if (p.kind == RelationKind::Quadratic) {
    if (p.theta) j["theta"] = *p.theta;
    j["theta_periods"] = json::array({p.theta_period[0], p.theta_period[1]});
    j["ambiguous_theta"] = p.ambiguous_theta;
    j["no_constant_theta"] = p.no_constant_theta;
    j["period_checked"] = p.period_checked;
  }
  return j;
}

json to_json(const IndependenceReport& r) {
  json profiles = json::array();
  for (const RelationProfile& p : r.profiles) profiles.push_back(to_json(p));
  json j{{"holds", r.holds}, {"n_lo", r.n_lo}, {"n_hi", r.n_hi}, {"profiles", profiles}};
  if (r.witness)
    j["witness"] = json{{"level", r.witness->first}, {"index", r.witness->second}};
  return j;
}

json to_json(const RecoveryResult& r) {
  json levels = json::array();
  for (const RecoveredLevel& lvl : r.levels)
    levels.push_back(json{{"m", lvl.m},
                          {"candidates", json::array({to_json(lvl.cand0),
                                                      to_json(lvl.cand1)})}});
  return json{{"n", r.n},
              {"floor_level", r.floor_level},
              {"y", to_json(r.y)},
              {"levels", levels}};
}

json ast_to_json(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var: return json{{"node", "var"}};
    case Expr::Kind::Lit: return json{{"node", "lit"}, {"value", e.lit}};
    case Expr::Kind::Unary:
      return json{{"node", e.un == UnaryOp::Neg ? "neg" : "not"},
                  {"child", ast_to_json(*e.lhs)}};
    case Expr::Kind::Binary: {
      const char* name = "?";
      switch (e.bin) {
        case BinaryOp::Add: name = "add"; break;
        case BinaryOp::Sub: name = "sub"; break;
        case BinaryOp::Mul: name = "mul"; break;
        case BinaryOp::Div: name = "div"; break;
        case BinaryOp::Pow: name = "pow"; break;
        case BinaryOp::And: name = "and"; break;
        case BinaryOp::Or: name = "or"; break;
        case BinaryOp::Xor: name = "xor"; break;
      }
      return json{{"node", name},
                  {"lhs", ast_to_json(*e.lhs)},
                  {"rhs", ast_to_json(*e.rhs)}};
    }
  }
  throw Error("malformed expression node");
}

namespace {

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(std::string("config is missing \"") + key + "\"");
  return *it;
}

}  // namespace

TscSpec tsc_from_json(const json& j) {
  TscSpec spec;
  spec.m = need(j, "m").get<int>();
  spec.k = need(j, "k").get<int>();
  spec.sboxes = need(j, "sboxes").get<std::vector<std::vector<uint32_t>>>();
  spec.sigma = need(j, "sigma").get<std::vector<uint64_t>>();
  spec.epsilon = need(j, "epsilon").get<std::vector<uint64_t>>();
  return spec;
}

WreathSpec wreath_from_json(const json& j) {
  WreathSpec spec;
  spec.k = need(j, "k").get<int>();
  for (const auto& [key, value] : need(j, "family").items()) {
    uint64_t y = std::stoull(key);
    spec.family.emplace(y, TFunction(value.get<std::string>(), spec.k));
  }
  const json& control = need(j, "control");
  if (control.is_string() && control.get<std::string>() == "counter") {
    uint64_t p = j.value("p", static_cast<uint64_t>(spec.family.size()));
    if (p == 0) throw Error("counter control needs a nonzero period");
    for (uint64_t i = 0; i < p; ++i) spec.control.push_back(i);
  } else if (control.is_array()) {
    spec.control = control.get<std::vector<uint64_t>>();
  } else if (control.is_object() && control.contains("lfsr")) {
    const json& l = control["lfsr"];
    spec.control = make_lfsr_control(need(l, "taps").get<uint64_t>(),
                                     need(l, "state0").get<uint64_t>(),
                                     need(l, "bits").get<int>());
  } else {
    throw Error("control must be \"counter\", an array, or {\"lfsr\": {...}}");
  }
  validate(spec);
  return spec;
}

}  // namespace tfun
