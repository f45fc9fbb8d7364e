#include "pdexact/catalog.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pdexact {

namespace detail {
extern const unsigned char kCatalogJson[];
extern const std::size_t kCatalogJsonSize;
}  // namespace detail

namespace {

using nlohmann::json;

funcspace::Guard parse_guard(const json& j, const std::string& id) {
  funcspace::Guard g;
  const std::string kind = j.value("kind", "none");
  if (kind == "none") {
    g.kind = funcspace::GuardKind::None;
  } else if (kind == "nonvanishing_deriv") {
    g.kind = funcspace::GuardKind::NonvanishingDeriv;
    g.order = j.at("order").get<int>();
    g.min_abs = j.at("min_abs").get<double>();
  } else if (kind == "positive") {
    g.kind = funcspace::GuardKind::Positive;
    g.min = j.at("min").get<double>();
    g.order = j.value("order", 0);
  } else if (kind == "bounded_range") {
    g.kind = funcspace::GuardKind::BoundedRange;
    g.lo = j.at("lo").get<double>();
    g.hi = j.at("hi").get<double>();
    g.order = j.value("order", 0);
  } else if (kind == "compact_support") {
    g.kind = funcspace::GuardKind::CompactSupport;
    g.radius = j.at("radius").get<double>();
  } else {
    throw SchemaError(id, "unknown guard kind '" + kind + "'");
  }
  g.z_lo = j.value("z_lo", 0.0);
  g.z_hi = j.value("z_hi", 1.0);
  if (g.kind != funcspace::GuardKind::CompactSupport && g.kind != funcspace::GuardKind::None &&
      !(g.z_lo < g.z_hi))
    throw SchemaError(id, "guard window is empty");
  return g;
}

struct Comparison {
  std::string lhs, op, rhs;
};

Comparison split_predicate(const std::string& text, const std::string& id) {
  static const char* ops[] = {"!=", ">=", "<=", "==", ">", "<"};
  for (const char* op : ops) {
    const auto pos = text.find(op);
    if (pos != std::string::npos)
      return {text.substr(0, pos), op, text.substr(pos + std::strlen(op))};
  }
  throw SchemaError(id, "constraint '" + text + "' has no comparison operator");
}

double eval_const_expr(const std::string& text, const std::map<std::string, double>& params,
                       const std::string& id) {
  ExprPtr e;
  try {
    e = parse(text);
  } catch (const ParseError& pe) {
    throw SchemaError(id, "constraint side '" + text + "': " + pe.what());
  }
  // tiny constant-folding walk; only params, consts and arithmetic allowed
  struct Folder {
    const std::map<std::string, double>& params;
    const std::string& id;
    double fold(const Expr& n) const {
      switch (n.kind) {
        case NodeKind::Const:
          return n.value;
        case NodeKind::Param: {
          auto it = params.find(n.name);
          if (it == params.end()) throw SchemaError(id, "constraint uses unknown name " + n.name);
          return it->second;
        }
        case NodeKind::Unary:
          switch (n.uop) {
            case UnaryOp::Neg: return -fold(*n.args[0]);
            case UnaryOp::Exp: return std::exp(fold(*n.args[0]));
            case UnaryOp::Ln: return std::log(fold(*n.args[0]));
            case UnaryOp::Sqrt: return std::sqrt(fold(*n.args[0]));
            case UnaryOp::Abs: return std::abs(fold(*n.args[0]));
            default: throw SchemaError(id, "constraint uses an unsupported function");
          }
        case NodeKind::Binary: {
          const double a = fold(*n.args[0]), b = fold(*n.args[1]);
          switch (n.bop) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div: return a / b;
            case BinaryOp::Pow: return std::pow(a, b);
          }
          return 0;
        }
        default:
          throw SchemaError(id, "constraint must be arithmetic over parameters");
      }
    }
  } folder{params, id};
  return folder.fold(*e);
}

CatalogEntry parse_entry(const json& j) {
  CatalogEntry e;
  e.id = j.at("id").get<std::string>();
  e.source_label = j.value("source_label", "");
  e.tier = j.at("tier").get<std::string>().at(0);
  e.quarantined = j.value("quarantined", false);
  e.note = j.value("note", "");
  e.superposition = j.value("superposition", false);
  if (j.contains("tol_override")) e.tol_override = j.at("tol_override").get<double>();
  if (j.contains("window")) {
    auto w = j.at("window");
    for (int i = 0; i < 4; ++i) e.window[static_cast<std::size_t>(i)] = w.at(i).get<double>();
  }
  for (const auto& p : j.value("params", json::array())) {
    ParamSpec ps;
    ps.name = p.at("name").get<std::string>();
    ps.value = p.at("default").get<double>();
    ps.constraint = p.value("constraint", "");
    e.params.push_back(std::move(ps));
  }
  for (const auto& s : j.value("slots", json::array())) {
    SlotSpec ss;
    ss.name = s.at("name").get<std::string>();
    for (const auto& g : s.value("guards", json::array()))
      ss.constraint.guards.push_back(parse_guard(g, e.id));
    e.slots.push_back(std::move(ss));
  }
  try {
    e.residual = parse(j.at("residual").get<std::string>());
    e.solution = parse(j.at("solution").get<std::string>());
  } catch (const ParseError& pe) {
    throw SchemaError(e.id, std::string("parse error: ") + pe.what());
  }
  return e;
}

void validate_entry(const CatalogEntry& e) {
  if (e.id.empty()) throw SchemaError(e.id, "empty id");
  if (!(e.window[0] < e.window[1]) || !(e.window[2] < e.window[3]))
    throw SchemaError(e.id, "degenerate window");
  if (e.tier != 'A' && e.tier != 'B' && e.tier != 'C' && e.tier != 'D')
    throw SchemaError(e.id, "tier must be A, B, C or D");

  std::set<std::string> params, slots;
  for (const auto& p : e.params)
    if (!params.insert(p.name).second) throw SchemaError(e.id, "duplicate parameter " + p.name);
  for (const auto& s : e.slots)
    if (!slots.insert(s.name).second) throw SchemaError(e.id, "duplicate slot " + s.name);

  try {
    validate_expr(*e.residual, params, slots, /*is_residual=*/true);
    validate_expr(*e.solution, params, slots, /*is_residual=*/false);
  } catch (const ParseError& pe) {
    throw SchemaError(e.id, pe.what());
  }
  if (uses_field_vars(*e.solution))
    throw SchemaError(e.id, "solution must not use field variables");

  const auto defaults = default_params(e);
  if (auto bad = violated_constraint(e, defaults))
    throw SchemaError(e.id, "default parameters violate constraint '" + *bad + "'");

  if (computed_tier(e) != e.tier)
    throw SchemaError(e.id, std::string("tier label ") + e.tier +
                                " does not match node content (expected " + computed_tier(e) +
                                ")");
}

}  // namespace

char computed_tier(const CatalogEntry& e) {
  char tier = 'A';
  auto bump = [&tier](char c) {
    if (c > tier) tier = c;
  };
  auto walk = [&bump](const Expr& n, auto&& self) -> void {
    if (n.kind == NodeKind::Integral) bump('B');
    if (n.kind == NodeKind::Root) bump('C');
    if (n.kind == NodeKind::Special) bump('D');
    for (const auto& a : n.args) self(*a, self);
  };
  walk(*e.solution, walk);
  walk(*e.residual, walk);
  return tier;
}

bool constraint_holds(const std::string& predicate, const std::map<std::string, double>& params) {
  if (predicate.empty()) return true;
  const Comparison c = split_predicate(predicate, "");
  const double lhs = eval_const_expr(c.lhs, params, "");
  const double rhs = eval_const_expr(c.rhs, params, "");
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  if (c.op == "!=") return std::abs(lhs - rhs) > 1e-12 * scale;
  if (c.op == "==") return std::abs(lhs - rhs) <= 1e-12 * scale;
  if (c.op == ">") return lhs > rhs;
  if (c.op == "<") return lhs < rhs;
  if (c.op == ">=") return lhs >= rhs;
  return lhs <= rhs;
}

std::optional<std::string> violated_constraint(const CatalogEntry& e,
                                               const std::map<std::string, double>& params) {
  for (const auto& p : e.params)
    if (!p.constraint.empty() && !constraint_holds(p.constraint, params)) return p.constraint;
  return std::nullopt;
}

std::map<std::string, double> default_params(const CatalogEntry& e) {
  std::map<std::string, double> out;
  for (const auto& p : e.params) out[p.name] = p.value;
  return out;
}

Catalog load_catalog(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& je) {
    throw SchemaError("", std::string("catalogue is not valid JSON: ") + je.what());
  }
  Catalog c;
  c.raw = json_text;
  c.version = doc.value("version", 0);
  std::set<std::string> seen;
  for (const auto& j : doc.at("entries")) {
    CatalogEntry e = parse_entry(j);
    if (!seen.insert(e.id).second) throw SchemaError(e.id, "duplicate id");
    validate_entry(e);
    c.entries.push_back(std::move(e));
  }
  return c;
}

Catalog load_catalog_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot open catalogue file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_catalog(ss.str());
}

const std::string& default_catalog_text() {
  static const std::string text(reinterpret_cast<const char*>(detail::kCatalogJson),
                                detail::kCatalogJsonSize);
  return text;
}

const Catalog& default_catalog() {
  static const Catalog c = load_catalog(default_catalog_text());
  return c;
}

const CatalogEntry& get(const Catalog& c, const std::string& id) {
  for (const auto& e : c.entries)
    if (e.id == id) return e;
  throw NotFoundError("no catalogue entry with id '" + id + "'");
}

}  // namespace pdexact
