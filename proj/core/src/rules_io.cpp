#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "petro/classify.hpp"

namespace petro::classify {

RuleLoadError::RuleLoadError(std::string message, std::string path_)
    : std::runtime_error(message + " (at " + path_ + ")"), path(std::move(path_)) {}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Rational rational_at(const json& j, const std::string& path) {
  if (j.is_string()) {
    auto q = try_parse_rational(j.get<std::string>());
    if (!q) throw RuleLoadError("bad rational literal '" + j.get<std::string>() + "'", path);
    return *q;
  }
  if (j.is_number_integer()) return Rational(BigInt(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Rational(BigInt(j.get<std::uint64_t>()));
  throw RuleLoadError("rational literals must be strings or integers", path);
}

// Expansion of a species or derived group into primary-species coefficients
// plus a constant, used to check that a diagram's axes sum to its group.
struct LinearForm {
  std::map<std::string, Rational> coeffs;
  Rational constant;

  bool operator==(const LinearForm&) const = default;
  void add(const LinearForm& other, const Rational& scale = Rational(1)) {
    for (const auto& [var, c] : other.coeffs) {
      coeffs[var] += c * scale;
      if (coeffs[var] == 0) coeffs.erase(var);
    }
    constant += other.constant * scale;
  }
};

LinearForm expand_symbol(const std::string& name) {
  LinearForm f;
  if (name == "Px") {
    f.coeffs = {{"Opx", 1}, {"Cpx", 1}};
  } else if (name == "OOC") {
    f.coeffs = {{"Ol", 1}, {"Opx", 1}, {"Cpx", 1}};
  } else if (name == "OPH") {
    f.coeffs = {{"Ol", 1}, {"Opx", 1}, {"Cpx", 1}, {"hornblende", 1}};
  } else if (name == "M") {
    f.coeffs = {{"Q", -1}, {"A", -1}, {"P", -1}, {"F", -1}};
    f.constant = 100;
  } else {
    f.coeffs = {{name, 1}};
  }
  return f;
}

void check_variable(const std::string& var, const SpeciesRegistry& registry,
                    const std::string& path) {
  if (!registry.contains(var) && !group_from_name(var)) {
    throw RuleLoadError("undeclared species or group '" + var + "'", path);
  }
}

LinearConstraint constraint_at(const json& j, const std::string& path,
                               const SpeciesRegistry& registry, const Diagram* diagram) {
  if (!j.is_object()) throw RuleLoadError("constraint must be an object", path);
  LinearConstraint c;
  auto terms = j.find("terms");
  if (terms == j.end() || !terms->is_object() || terms->empty()) {
    throw RuleLoadError("constraint needs a non-empty 'terms' object", path + "/terms");
  }
  bool any_nonzero = false;
  for (const auto& [var, coeff] : terms->items()) {
    std::string term_path = path + "/terms/" + var;
    if (diagram) {
      if (std::find(diagram->axes.begin(), diagram->axes.end(), var) ==
          diagram->axes.end()) {
        throw RuleLoadError("field constraints may only reference the diagram axes",
                            term_path);
      }
    } else {
      check_variable(var, registry, term_path);
    }
    Rational value = rational_at(coeff, term_path);
    if (value != 0) any_nonzero = true;
    c.terms[var] = value;
  }
  if (!any_nonzero) {
    throw RuleLoadError("constraint needs at least one nonzero coefficient",
                        path + "/terms");
  }
  std::string cmp_text = j.value("cmp", "");
  auto cmp = cmp_from_symbol(cmp_text);
  if (!cmp) throw RuleLoadError("bad comparator '" + cmp_text + "'", path + "/cmp");
  c.cmp = *cmp;
  if (!j.contains("rhs")) throw RuleLoadError("constraint needs 'rhs'", path);
  c.rhs = rational_at(j.at("rhs"), path + "/rhs");
  c.relative = j.value("relative", false);
  if (c.relative) {
    if (!diagram) {
      throw RuleLoadError("relative constraints are only valid inside diagram fields",
                          path + "/relative");
    }
    c.group = diagram->group;
  }
  return c;
}

TreeNodePtr tree_at(const json& j, const std::string& path,
                    const SpeciesRegistry& registry,
                    const std::vector<Diagram>& diagrams) {
  if (!j.is_object()) throw RuleLoadError("tree node must be an object", path);
  auto node = std::make_unique<TreeNode>();
  if (j.contains("if")) {
    const auto& cond = j.at("if");
    GuardNode guard;
    if (cond.contains("flag")) {
      std::string name = cond.at("flag").get<std::string>();
      auto flag = flag_from_name(name);
      if (!flag) throw RuleLoadError("unknown flag '" + name + "'", path + "/if/flag");
      guard.condition = FlagTest{*flag};
    } else if (cond.contains("constraint")) {
      guard.condition =
          constraint_at(cond.at("constraint"), path + "/if/constraint", registry, nullptr);
    } else {
      throw RuleLoadError("guard needs 'flag' or 'constraint'", path + "/if");
    }
    if (!j.contains("then") || !j.contains("else")) {
      throw RuleLoadError("guard node needs 'then' and 'else' children", path);
    }
    guard.on_true = tree_at(j.at("then"), path + "/then", registry, diagrams);
    guard.on_false = tree_at(j.at("else"), path + "/else", registry, diagrams);
    node->node = std::move(guard);
    return node;
  }
  if (j.contains("rock_type")) {
    node->node = RockLeaf{j.at("rock_type").get<std::string>()};
    return node;
  }
  if (j.contains("diagram")) {
    std::string name = j.at("diagram").get<std::string>();
    bool declared = std::any_of(diagrams.begin(), diagrams.end(),
                                [&](const Diagram& d) { return d.name == name; });
    if (!declared) {
      throw RuleLoadError("undeclared diagram '" + name + "'", path + "/diagram");
    }
    node->node = DiagramLeaf{name};
    return node;
  }
  if (j.contains("out_of_scope")) {
    node->node = OutOfScopeLeaf{j.at("out_of_scope").get<std::string>()};
    return node;
  }
  throw RuleLoadError(
      "leaf needs one of 'rock_type', 'diagram' or 'out_of_scope'", path);
}

Diagram diagram_at(const json& j, const std::string& path,
                   const SpeciesRegistry& registry) {
  Diagram d;
  d.name = j.value("name", "");
  if (d.name.empty()) throw RuleLoadError("diagram needs a name", path + "/name");
  d.group = j.value("group", "");
  if (!group_from_name(d.group)) {
    throw RuleLoadError("diagram group must be a derived group", path + "/group");
  }
  auto axes = j.find("axes");
  if (axes == j.end() || !axes->is_array() || axes->size() != 3) {
    throw RuleLoadError("diagram needs exactly three axes", path + "/axes");
  }
  LinearForm axis_sum;
  for (std::size_t i = 0; i < 3; ++i) {
    std::string axis = (*axes)[i].get<std::string>();
    std::string axis_path = path + "/axes/" + std::to_string(i);
    check_variable(axis, registry, axis_path);
    d.axes[i] = axis;
    axis_sum.add(expand_symbol(axis));
  }
  if (axis_sum != expand_symbol(d.group)) {
    throw RuleLoadError("axes do not sum to the diagram group '" + d.group + "'",
                        path + "/axes");
  }
  d.stamp = j.value("stamp", "");

  auto fields = j.find("fields");
  if (fields == j.end() || !fields->is_array() || fields->empty()) {
    throw RuleLoadError("diagram needs a non-empty field list", path + "/fields");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < fields->size(); ++i) {
    const auto& fj = (*fields)[i];
    std::string field_path = path + "/fields/" + std::to_string(i);
    DiagramField field;
    field.name = fj.value("name", "");
    if (field.name.empty()) throw RuleLoadError("field needs a name", field_path + "/name");
    if (!seen.insert(field.name).second) {
      throw RuleLoadError("duplicate field name '" + field.name + "'",
                          field_path + "/name");
    }
    field.reconstructed = fj.value("reconstructed", false);
    auto cons = fj.find("constraints");
    if (cons == fj.end() || !cons->is_array() || cons->empty()) {
      throw RuleLoadError("field needs a non-empty constraint list",
                          field_path + "/constraints");
    }
    for (std::size_t k = 0; k < cons->size(); ++k) {
      field.constraints.push_back(constraint_at(
          (*cons)[k], field_path + "/constraints/" + std::to_string(k), registry, &d));
    }
    d.fields.push_back(std::move(field));
  }
  return d;
}

}  // namespace

RuleSet load_rules(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RuleLoadError(std::string("invalid JSON: ") + e.what(), "/");
  }
  if (!j.is_object()) throw RuleLoadError("rule file must be a JSON object", "/");

  RuleSet rules;
  rules.name = j.value("name", "");
  rules.registry = SpeciesRegistry::standard();
  if (auto extra = j.find("extra_species"); extra != j.end()) {
    if (!extra->is_array()) {
      throw RuleLoadError("extra_species must be an array", "/extra_species");
    }
    for (const auto& s : *extra) rules.registry.add(s.get<std::string>());
  }

  if (auto diagrams = j.find("diagrams"); diagrams != j.end()) {
    if (!diagrams->is_array()) throw RuleLoadError("diagrams must be an array", "/diagrams");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < diagrams->size(); ++i) {
      Diagram d = diagram_at((*diagrams)[i], "/diagrams/" + std::to_string(i),
                             rules.registry);
      if (!seen.insert(d.name).second) {
        throw RuleLoadError("duplicate diagram name '" + d.name + "'",
                            "/diagrams/" + std::to_string(i) + "/name");
      }
      rules.diagrams.push_back(std::move(d));
    }
  }

  if (!j.contains("tree")) throw RuleLoadError("rule file needs a 'tree'", "/tree");
  rules.tree = tree_at(j.at("tree"), "/tree", rules.registry, rules.diagrams);
  return rules;
}

RuleSet load_rules_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuleLoadError("cannot open rule file '" + path + "'", "/");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_rules(buffer.str());
}

// ---------------------------------------------------------------------------
// Compiled predicate JSON
// ---------------------------------------------------------------------------

namespace {

json constraint_to_json(const LinearConstraint& c) {
  json terms = json::object();
  for (const auto& [var, coeff] : c.terms) terms[var] = to_ratio_string(coeff);
  json j;
  j["terms"] = terms;
  j["cmp"] = std::string(cmp_symbol(c.cmp));
  j["rhs"] = to_ratio_string(c.rhs);
  j["relative"] = c.relative;
  if (c.relative) j["group"] = c.group;
  return j;
}

LinearConstraint constraint_from_json(const json& j, const std::string& path) {
  LinearConstraint c;
  for (const auto& [var, coeff] : j.at("terms").items()) {
    c.terms[var] = rational_at(coeff, path + "/terms/" + var);
  }
  auto cmp = cmp_from_symbol(j.value("cmp", ""));
  if (!cmp) throw RuleLoadError("bad comparator", path + "/cmp");
  c.cmp = *cmp;
  c.rhs = rational_at(j.at("rhs"), path + "/rhs");
  c.relative = j.value("relative", false);
  c.group = j.value("group", "");
  return c;
}

}  // namespace

std::string predicate_to_json(const CompiledPredicate& predicate) {
  json j;
  j["rock_type"] = predicate.rock_type;
  json dnf = json::array();
  for (const auto& conjunct : predicate.dnf) {
    json quals = json::array();
    for (const auto& q : conjunct.qualitative) {
      quals.push_back(
          {{"flag", std::string(flag_name(q.flag))}, {"negated", q.negated}});
    }
    json constraints = json::array();
    for (const auto& c : conjunct.constraints) constraints.push_back(constraint_to_json(c));
    dnf.push_back({{"qualitative", quals}, {"constraints", constraints}});
  }
  j["dnf"] = dnf;
  return j.dump(2);
}

CompiledPredicate predicate_from_json(const std::string& text) {
  json j = json::parse(text);
  CompiledPredicate predicate;
  predicate.rock_type = j.at("rock_type").get<std::string>();
  std::size_t ci = 0;
  for (const auto& cj : j.at("dnf")) {
    std::string path = "/dnf/" + std::to_string(ci++);
    Conjunct conjunct;
    for (const auto& qj : cj.value("qualitative", json::array())) {
      auto flag = flag_from_name(qj.at("flag").get<std::string>());
      if (!flag) throw RuleLoadError("unknown flag", path + "/qualitative");
      conjunct.qualitative.push_back({*flag, qj.value("negated", false)});
    }
    std::size_t ki = 0;
    for (const auto& kj : cj.value("constraints", json::array())) {
      conjunct.constraints.push_back(
          constraint_from_json(kj, path + "/constraints/" + std::to_string(ki++)));
    }
    predicate.dnf.push_back(std::move(conjunct));
  }
  return predicate;
}

// ---------------------------------------------------------------------------
// Stamps
// ---------------------------------------------------------------------------

namespace {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string canonical_geometry(const Diagram& diagram) {
  std::ostringstream os;
  os << diagram.name << "|" << diagram.group << "|";
  for (const auto& axis : diagram.axes) os << axis << ",";
  for (const auto& field : diagram.fields) {
    os << "|" << field.name << (field.reconstructed ? "*" : "") << "{";
    for (const auto& c : field.constraints) {
      for (const auto& [var, coeff] : c.terms) {
        os << var << ":" << to_ratio_string(coeff) << ",";
      }
      os << cmp_symbol(c.cmp) << ":" << to_ratio_string(c.rhs)
         << (c.relative ? "~" : "") << ";";
    }
    os << "}";
  }
  return os.str();
}

}  // namespace

std::string diagram_stamp(const Diagram& diagram) {
  std::ostringstream os;
  os << "fnv1a64:" << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a64(canonical_geometry(diagram));
  return os.str();
}

bool stamp_valid(const Diagram& diagram) {
  return !diagram.stamp.empty() && diagram.stamp == diagram_stamp(diagram);
}

std::string stamp_rules_text(const std::string& text) {
  RuleSet rules = load_rules(text);  // reuse validation
  ordered_json j = ordered_json::parse(text);
  if (auto diagrams = j.find("diagrams"); diagrams != j.end()) {
    for (std::size_t i = 0; i < diagrams->size() && i < rules.diagrams.size(); ++i) {
      (*diagrams)[i]["stamp"] = diagram_stamp(rules.diagrams[i]);
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace petro::classify
