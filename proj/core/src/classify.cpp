#include "petro/classify.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace petro::classify {

// ---------------------------------------------------------------------------
// Comparators
// ---------------------------------------------------------------------------

std::string_view cmp_symbol(Cmp c) {
  switch (c) {
    case Cmp::lt:
      return "<";
    case Cmp::le:
      return "<=";
    case Cmp::eq:
      return "=";
    case Cmp::ge:
      return ">=";
    case Cmp::gt:
      return ">";
  }
  return "?";
}

std::optional<Cmp> cmp_from_symbol(std::string_view s) {
  if (s == "<") return Cmp::lt;
  if (s == "<=") return Cmp::le;
  if (s == "=" || s == "==") return Cmp::eq;
  if (s == ">=") return Cmp::ge;
  if (s == ">") return Cmp::gt;
  return std::nullopt;
}

namespace {

bool compare(const Rational& lhs, Cmp cmp, const Rational& rhs) {
  switch (cmp) {
    case Cmp::lt:
      return lhs < rhs;
    case Cmp::le:
      return lhs <= rhs;
    case Cmp::eq:
      return lhs == rhs;
    case Cmp::ge:
      return lhs >= rhs;
    case Cmp::gt:
      return lhs > rhs;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string render_vpc(std::string_view var) {
  return "VPC_" + std::string(var) + "(x)";
}

std::string render_terms(const std::map<std::string, Rational>& terms) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [var, coeff] : terms) {
    Rational a = coeff;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    if (a != 1) os << to_display_string(a) << "*";
    os << render_vpc(var);
    first = false;
  }
  return os.str();
}

}  // namespace

std::string render_constraint(const LinearConstraint& c) {
  std::ostringstream os;
  os << render_terms(c.terms) << " " << cmp_symbol(c.cmp) << " ";
  if (c.relative) {
    if (c.rhs != 1) os << to_display_string(c.rhs) << "*";
    os << render_vpc(c.group);
  } else {
    os << to_display_string(c.rhs);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

bool evaluate_constraint(const Sample& sample, const LinearConstraint& c,
                         const SpeciesRegistry& registry) {
  Rational lhs(0);
  for (const auto& [var, coeff] : c.terms) {
    lhs += coeff * vpc_value(sample, var, registry);
  }
  Rational rhs = c.rhs;
  if (c.relative) rhs *= vpc_value(sample, c.group, registry);
  return compare(lhs, c.cmp, rhs);
}

bool point_in_field(const DiagramField& field, const std::array<std::string, 3>& axes,
                    const std::array<Rational, 3>& values) {
  Rational total = values[0] + values[1] + values[2];
  for (const auto& c : field.constraints) {
    Rational lhs(0);
    for (const auto& [var, coeff] : c.terms) {
      auto it = std::find(axes.begin(), axes.end(), var);
      if (it == axes.end()) throw UnknownSpeciesError(var);
      lhs += coeff * values[static_cast<std::size_t>(it - axes.begin())];
    }
    Rational rhs = c.rhs;
    if (c.relative) rhs *= total;
    if (!compare(lhs, c.cmp, rhs)) return false;
  }
  return true;
}

const DiagramField* locate_field_values(const Diagram& diagram,
                                        const std::array<Rational, 3>& values) {
  for (const auto& field : diagram.fields) {
    if (point_in_field(field, diagram.axes, values)) return &field;
  }
  return nullptr;
}

namespace {

std::array<Rational, 3> axis_values(const Diagram& diagram, const Sample& sample,
                                    const SpeciesRegistry& registry) {
  return {vpc_value(sample, diagram.axes[0], registry),
          vpc_value(sample, diagram.axes[1], registry),
          vpc_value(sample, diagram.axes[2], registry)};
}

}  // namespace

std::string locate_field(const Diagram& diagram, const Sample& sample,
                         const SpeciesRegistry& registry) {
  auto values = axis_values(diagram, sample, registry);
  if (values[0] + values[1] + values[2] == 0) {
    throw DegenerateCompositionError("zero " + diagram.group + " axis total for sample '" +
                                     sample.id + "'");
  }
  const DiagramField* field = locate_field_values(diagram, values);
  if (!field) {
    throw NoFieldError("no field of diagram '" + diagram.name + "' matches sample '" +
                       sample.id + "' (unverified diagram?)");
  }
  return field->name;
}

// ---------------------------------------------------------------------------
// RuleSet
// ---------------------------------------------------------------------------

const Diagram* RuleSet::diagram(std::string_view name) const {
  for (const auto& d : diagrams) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

namespace {

void collect_rock_types(const TreeNode* node, const RuleSet& rules,
                        std::vector<std::string>& out) {
  if (!node) return;
  if (const auto* guard = std::get_if<GuardNode>(&node->node)) {
    collect_rock_types(guard->on_true.get(), rules, out);
    collect_rock_types(guard->on_false.get(), rules, out);
  } else if (const auto* rock = std::get_if<RockLeaf>(&node->node)) {
    out.push_back(rock->rock_type);
  } else if (const auto* dia = std::get_if<DiagramLeaf>(&node->node)) {
    if (const Diagram* d = rules.diagram(dia->diagram)) {
      for (const auto& field : d->fields) out.push_back(field.name);
    }
  }
}

}  // namespace

std::vector<std::string> RuleSet::rock_types() const {
  std::vector<std::string> out;
  collect_rock_types(tree.get(), *this, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

std::string_view outcome_name(ClassificationResult::Outcome o) {
  switch (o) {
    case ClassificationResult::Outcome::classified:
      return "classified";
    case ClassificationResult::Outcome::out_of_scope:
      return "out_of_scope";
    case ClassificationResult::Outcome::indeterminate:
      return "indeterminate";
  }
  return "?";
}

ClassificationResult run_classifier(const Sample& sample, const RuleSet& rules) {
  ClassificationResult result;
  const TreeNode* node = rules.tree.get();
  while (node) {
    if (const auto* guard = std::get_if<GuardNode>(&node->node)) {
      bool value = false;
      if (const auto* flag_test = std::get_if<FlagTest>(&guard->condition)) {
        Tri tri = sample.flags.get(flag_test->flag);
        if (tri == Tri::unknown) {
          result.outcome = ClassificationResult::Outcome::indeterminate;
          result.reason = std::string(flag_name(flag_test->flag));
          return result;
        }
        value = tri == Tri::yes;
        result.trace.push_back(
            {TraceEntry::Kind::guard, std::string(flag_name(flag_test->flag)), value});
      } else {
        const auto& constraint = std::get<LinearConstraint>(guard->condition);
        try {
          value = evaluate_constraint(sample, constraint, rules.registry);
        } catch (const IndeterminateValueError& e) {
          result.outcome = ClassificationResult::Outcome::indeterminate;
          result.reason = e.value_name;
          return result;
        }
        result.trace.push_back(
            {TraceEntry::Kind::guard, render_constraint(constraint), value});
      }
      node = value ? guard->on_true.get() : guard->on_false.get();
      continue;
    }
    if (const auto* rock = std::get_if<RockLeaf>(&node->node)) {
      result.outcome = ClassificationResult::Outcome::classified;
      result.rock_type = rock->rock_type;
      return result;
    }
    if (const auto* oos = std::get_if<OutOfScopeLeaf>(&node->node)) {
      result.outcome = ClassificationResult::Outcome::out_of_scope;
      result.branch = oos->branch;
      return result;
    }
    const auto& dispatch = std::get<DiagramLeaf>(node->node);
    const Diagram* diagram = rules.diagram(dispatch.diagram);
    if (!diagram) {
      result.outcome = ClassificationResult::Outcome::indeterminate;
      result.reason = "undeclared diagram '" + dispatch.diagram + "'";
      return result;
    }
    std::array<Rational, 3> values;
    try {
      values = axis_values(*diagram, sample, rules.registry);
    } catch (const IndeterminateValueError& e) {
      result.outcome = ClassificationResult::Outcome::indeterminate;
      result.reason = e.value_name;
      return result;
    }
    if (values[0] + values[1] + values[2] == 0) {
      result.outcome = ClassificationResult::Outcome::indeterminate;
      result.reason = "zero " + diagram->group + " axis total";
      return result;
    }
    for (const auto& field : diagram->fields) {
      bool in = point_in_field(field, diagram->axes, values);
      result.trace.push_back(
          {TraceEntry::Kind::field, diagram->name + ":" + field.name, in});
      if (in) {
        result.outcome = ClassificationResult::Outcome::classified;
        result.rock_type = field.name;
        return result;
      }
    }
    result.outcome = ClassificationResult::Outcome::indeterminate;
    result.reason =
        "no field of diagram '" + diagram->name + "' matched (unverified rule file?)";
    return result;
  }
  result.outcome = ClassificationResult::Outcome::indeterminate;
  result.reason = "empty rule tree";
  return result;
}

std::optional<std::string> replay_trace(const RuleSet& rules,
                                        const std::vector<TraceEntry>& trace) {
  const TreeNode* node = rules.tree.get();
  std::size_t i = 0;
  while (node) {
    if (const auto* guard = std::get_if<GuardNode>(&node->node)) {
      while (i < trace.size() && trace[i].kind != TraceEntry::Kind::guard) ++i;
      if (i >= trace.size()) return std::nullopt;
      node = trace[i].value ? guard->on_true.get() : guard->on_false.get();
      ++i;
      continue;
    }
    if (const auto* rock = std::get_if<RockLeaf>(&node->node)) {
      return "rock:" + rock->rock_type;
    }
    if (const auto* oos = std::get_if<OutOfScopeLeaf>(&node->node)) {
      return "oos:" + oos->branch;
    }
    return "diagram:" + std::get<DiagramLeaf>(node->node).diagram;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Predicate compilation
// ---------------------------------------------------------------------------

UnknownRockTypeError::UnknownRockTypeError(std::string_view rock_type)
    : std::runtime_error("unknown rock type '" + std::string(rock_type) + "'") {}

// The negation of an equality generally splits into two strict alternatives;
// when the left side is a nonnegative combination of VPC values bounded by 0,
// the lower alternative is empty over the domain and `expr > 0` suffices
// (which keeps e.g. hornblende = 0 exact on the opposite branch).
std::vector<LinearConstraint> negate_constraint(const LinearConstraint& c) {
  LinearConstraint flipped = c;
  switch (c.cmp) {
    case Cmp::lt:
      flipped.cmp = Cmp::ge;
      return {flipped};
    case Cmp::le:
      flipped.cmp = Cmp::gt;
      return {flipped};
    case Cmp::ge:
      flipped.cmp = Cmp::lt;
      return {flipped};
    case Cmp::gt:
      flipped.cmp = Cmp::le;
      return {flipped};
    case Cmp::eq:
      break;
  }
  bool nonneg_vs_zero = !c.relative && c.rhs == 0;
  for (const auto& [var, coeff] : c.terms) {
    if (coeff <= 0) nonneg_vs_zero = false;
  }
  if (nonneg_vs_zero) {
    flipped.cmp = Cmp::gt;
    return {flipped};
  }
  LinearConstraint below = c, above = c;
  below.cmp = Cmp::lt;
  above.cmp = Cmp::gt;
  return {below, above};
}

namespace {

bool contains_literal(const std::vector<QualLiteral>& quals, const QualLiteral& q) {
  return std::find(quals.begin(), quals.end(), q) != quals.end();
}

bool contains_constraint(const std::vector<LinearConstraint>& cons,
                         const LinearConstraint& c) {
  return std::find(cons.begin(), cons.end(), c) != cons.end();
}

// True when the field still holds at the cone apex (all axis values zero);
// such fields need the explicit positive-total dispatch precondition inlined,
// otherwise their closed form would admit degenerate compositions that the
// classifier never dispatches.
bool field_holds_at_apex(const DiagramField& field) {
  for (const auto& c : field.constraints) {
    Rational rhs_at_zero = c.relative ? Rational(0) : c.rhs;
    if (!compare(Rational(0), c.cmp, rhs_at_zero)) return false;
  }
  return true;
}

struct CompileContext {
  const RuleSet& rules;
  std::string_view target;
  std::vector<Conjunct>& out;
};

void compile_walk(CompileContext& ctx, const TreeNode* node,
                  std::vector<QualLiteral>& quals, std::vector<LinearConstraint>& cons) {
  if (!node) return;
  if (const auto* guard = std::get_if<GuardNode>(&node->node)) {
    if (const auto* flag_test = std::get_if<FlagTest>(&guard->condition)) {
      for (bool branch_true : {true, false}) {
        QualLiteral lit{flag_test->flag, !branch_true};
        bool fresh = !contains_literal(quals, lit);
        if (fresh) quals.push_back(lit);
        compile_walk(ctx, branch_true ? guard->on_true.get() : guard->on_false.get(),
                     quals, cons);
        if (fresh) quals.pop_back();
      }
      return;
    }
    const auto& constraint = std::get<LinearConstraint>(guard->condition);
    {
      bool fresh = !contains_constraint(cons, constraint);
      if (fresh) cons.push_back(constraint);
      compile_walk(ctx, guard->on_true.get(), quals, cons);
      if (fresh) cons.pop_back();
    }
    for (const auto& negated : negate_constraint(constraint)) {
      bool fresh = !contains_constraint(cons, negated);
      if (fresh) cons.push_back(negated);
      compile_walk(ctx, guard->on_false.get(), quals, cons);
      if (fresh) cons.pop_back();
    }
    return;
  }
  if (const auto* rock = std::get_if<RockLeaf>(&node->node)) {
    if (rock->rock_type == ctx.target) ctx.out.push_back({quals, cons});
    return;
  }
  if (const auto* dispatch = std::get_if<DiagramLeaf>(&node->node)) {
    const Diagram* diagram = ctx.rules.diagram(dispatch->diagram);
    if (!diagram) return;
    for (const auto& field : diagram->fields) {
      if (field.name != ctx.target) continue;
      Conjunct conjunct{quals, cons};
      if (field_holds_at_apex(field)) {
        LinearConstraint positive_total;
        positive_total.terms[diagram->group] = 1;
        positive_total.cmp = Cmp::gt;
        positive_total.rhs = 0;
        if (!contains_constraint(conjunct.constraints, positive_total)) {
          conjunct.constraints.push_back(std::move(positive_total));
        }
      }
      for (const auto& c : field.constraints) {
        if (!contains_constraint(conjunct.constraints, c)) {
          conjunct.constraints.push_back(c);
        }
      }
      ctx.out.push_back(std::move(conjunct));
    }
  }
}

std::string conjunct_key(const Conjunct& c);

}  // namespace

CompiledPredicate compile_predicate(const RuleSet& rules, std::string_view rock_type) {
  auto known = rules.rock_types();
  if (!std::binary_search(known.begin(), known.end(), std::string(rock_type))) {
    throw UnknownRockTypeError(rock_type);
  }
  CompiledPredicate predicate;
  predicate.rock_type = rock_type;
  std::vector<QualLiteral> quals;
  std::vector<LinearConstraint> cons;
  CompileContext ctx{rules, rock_type, predicate.dnf};
  compile_walk(ctx, rules.tree.get(), quals, cons);
  return predicate;
}

// ---------------------------------------------------------------------------
// Canonicalization
// ---------------------------------------------------------------------------

namespace {

std::string constraint_key(const LinearConstraint& c) {
  std::ostringstream os;
  os << (c.relative ? "r" : "a") << "|" << c.group << "|";
  for (const auto& [var, coeff] : c.terms) os << var << ":" << to_ratio_string(coeff) << ",";
  os << "|" << cmp_symbol(c.cmp) << "|" << to_ratio_string(c.rhs);
  return os.str();
}

std::string conjunct_key(const Conjunct& c) {
  std::ostringstream os;
  for (const auto& q : c.qualitative) {
    os << (q.negated ? "!" : "") << flag_name(q.flag) << "&";
  }
  os << "#";
  for (const auto& lc : c.constraints) os << constraint_key(lc) << "&";
  return os.str();
}

}  // namespace

void CompiledPredicate::canonicalize() {
  for (auto& conjunct : dnf) {
    std::sort(conjunct.qualitative.begin(), conjunct.qualitative.end(),
              [](const QualLiteral& a, const QualLiteral& b) {
                if (a.negated != b.negated) return !a.negated;
                return a.flag < b.flag;
              });
    std::sort(conjunct.constraints.begin(), conjunct.constraints.end(),
              [](const LinearConstraint& a, const LinearConstraint& b) {
                if (a.relative != b.relative) return !a.relative;
                return constraint_key(a) < constraint_key(b);
              });
  }
  std::sort(dnf.begin(), dnf.end(), [](const Conjunct& a, const Conjunct& b) {
    return conjunct_key(a) < conjunct_key(b);
  });
}

// ---------------------------------------------------------------------------
// Predicate evaluation (Kleene three-valued)
// ---------------------------------------------------------------------------

std::optional<bool> evaluate_predicate(const CompiledPredicate& predicate,
                                       const Sample& sample,
                                       const SpeciesRegistry& registry) {
  bool any_unknown = false;
  for (const auto& conjunct : predicate.dnf) {
    bool conjunct_unknown = false;
    bool conjunct_false = false;
    for (const auto& q : conjunct.qualitative) {
      Tri tri = sample.flags.get(q.flag);
      if (tri == Tri::unknown) {
        conjunct_unknown = true;
      } else if ((tri == Tri::yes) == q.negated) {
        conjunct_false = true;
        break;
      }
    }
    if (!conjunct_false) {
      for (const auto& c : conjunct.constraints) {
        try {
          if (!evaluate_constraint(sample, c, registry)) {
            conjunct_false = true;
            break;
          }
        } catch (const IndeterminateValueError&) {
          conjunct_unknown = true;
        }
      }
    }
    if (conjunct_false) continue;
    if (conjunct_unknown) {
      any_unknown = true;
      continue;
    }
    return true;
  }
  if (any_unknown) return std::nullopt;
  return false;
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

std::string render_predicate_text(const CompiledPredicate& predicate) {
  std::ostringstream os;
  os << predicate.rock_type << "(x) =def";
  if (predicate.dnf.empty()) {
    os << " false\n";
    return os.str();
  }
  bool first_conjunct = true;
  for (const auto& conjunct : predicate.dnf) {
    os << (first_conjunct ? "\n" : "or\n");
    first_conjunct = false;

    std::vector<std::string> parts;
    std::vector<std::string> negated;
    std::string positives;
    for (const auto& q : conjunct.qualitative) {
      if (q.negated) {
        negated.push_back(std::string(flag_name(q.flag)) + "(x)");
      } else {
        if (!positives.empty()) positives += " and ";
        positives += std::string(flag_name(q.flag)) + "(x)";
      }
    }
    if (!positives.empty()) parts.push_back(positives);
    if (!negated.empty()) {
      std::string group = "not (";
      for (std::size_t i = 0; i < negated.size(); ++i) {
        if (i) group += " or ";
        group += negated[i];
      }
      group += ")";
      parts.push_back(group);
    }
    std::string absolutes, relatives;
    for (const auto& c : conjunct.constraints) {
      std::string& bucket = c.relative ? relatives : absolutes;
      if (!bucket.empty()) bucket += " and ";
      bucket += render_constraint(c);
    }
    if (!absolutes.empty()) parts.push_back(absolutes);
    if (!relatives.empty()) parts.push_back(relatives);
    if (parts.empty()) parts.push_back("true");

    for (std::size_t i = 0; i < parts.size(); ++i) {
      os << "  " << (i ? "and " : "") << parts[i] << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Text parsing (inverse of render_predicate_text)
// ---------------------------------------------------------------------------

namespace {

struct PredicateParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& message) {
    throw std::runtime_error("predicate text: " + message + " at offset " +
                             std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  bool peek_symbol(std::string_view sym) {
    skip_ws();
    return text.substr(pos, sym.size()) == sym;
  }

  bool accept_symbol(std::string_view sym) {
    if (!peek_symbol(sym)) return false;
    pos += sym.size();
    return true;
  }

  void expect_symbol(std::string_view sym) {
    if (!accept_symbol(sym)) fail("expected '" + std::string(sym) + "'");
  }

  std::optional<std::string> peek_ident() {
    skip_ws();
    std::size_t p = pos;
    if (p >= text.size()) return std::nullopt;
    char c = text[p];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return std::nullopt;
    std::size_t start = p;
    while (p < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[p])) || text[p] == '_')) {
      ++p;
    }
    return std::string(text.substr(start, p - start));
  }

  std::string expect_ident() {
    auto id = peek_ident();
    if (!id) fail("expected identifier");
    pos += id->size();
    return *id;
  }

  bool accept_keyword(std::string_view kw) {
    auto id = peek_ident();
    if (!id || *id != kw) return false;
    pos += id->size();
    return true;
  }

  Rational expect_number() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && text[pos] == '-') ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos < text.size() && (text[pos] == '.' || text[pos] == '/')) {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    if (pos == start) fail("expected number");
    auto q = try_parse_rational(text.substr(start, pos - start));
    if (!q) fail("bad rational literal");
    return *q;
  }

  bool peek_number() {
    skip_ws();
    if (pos >= text.size()) return false;
    char c = text[pos];
    return std::isdigit(static_cast<unsigned char>(c)) ||
           (c == '-' && pos + 1 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[pos + 1])));
  }

  // flagname(x)  or  VPC_var(x)
  std::string expect_applied(std::string* out_ident) {
    std::string id = expect_ident();
    expect_symbol("(");
    if (expect_ident() != "x") fail("expected 'x'");
    expect_symbol(")");
    *out_ident = id;
    return id;
  }

  Cmp expect_cmp() {
    for (std::string_view sym : {"<=", ">=", "<", ">", "="}) {
      if (accept_symbol(sym)) return *cmp_from_symbol(sym);
    }
    fail("expected comparator");
  }

  // [coeff '*'] VPC_var(x)
  std::pair<std::string, Rational> expect_term(bool allow_sign) {
    Rational coeff(1);
    if (peek_number()) {
      coeff = expect_number();
      expect_symbol("*");
    } else if (allow_sign && accept_symbol("-")) {
      coeff = -1;
      if (peek_number()) {
        coeff = -expect_number();
        expect_symbol("*");
      }
    }
    std::string id;
    expect_applied(&id);
    if (id.rfind("VPC_", 0) != 0) fail("expected a VPC_ variable");
    return {id.substr(4), coeff};
  }

  LinearConstraint expect_linear() {
    LinearConstraint c;
    auto [var, coeff] = expect_term(true);
    c.terms[var] += coeff;
    while (true) {
      skip_ws();
      if (accept_symbol("+")) {
        auto [v, a] = expect_term(false);
        c.terms[v] += a;
      } else if (peek_symbol("-")) {
        // binary minus only when a term follows; comparators handled below
        ++pos;
        auto [v, a] = expect_term(false);
        c.terms[v] -= a;
      } else {
        break;
      }
    }
    c.cmp = expect_cmp();
    if (peek_number()) {
      Rational value = expect_number();
      if (accept_symbol("*")) {
        std::string id;
        expect_applied(&id);
        if (id.rfind("VPC_", 0) != 0) fail("expected a VPC_ group");
        c.relative = true;
        c.group = id.substr(4);
        c.rhs = value;
      } else {
        c.relative = false;
        c.rhs = value;
      }
    } else {
      std::string id;
      expect_applied(&id);
      if (id.rfind("VPC_", 0) != 0) fail("expected a VPC_ group");
      c.relative = true;
      c.group = id.substr(4);
      c.rhs = 1;
    }
    return c;
  }

  void parse_atom(Conjunct& conjunct) {
    skip_ws();
    auto id = peek_ident();
    if (id && *id == "not") {
      pos += id->size();
      expect_symbol("(");
      while (true) {
        std::string flag_id;
        expect_applied(&flag_id);
        auto flag = flag_from_name(flag_id);
        if (!flag) fail("unknown flag '" + flag_id + "'");
        conjunct.qualitative.push_back({*flag, true});
        if (accept_symbol(")")) break;
        if (!accept_keyword("or")) fail("expected 'or' or ')'");
      }
      return;
    }
    if (id && !id->empty() && id->rfind("VPC_", 0) != 0 && flag_from_name(*id)) {
      std::string flag_id;
      expect_applied(&flag_id);
      conjunct.qualitative.push_back({*flag_from_name(flag_id), false});
      return;
    }
    if (id && *id == "true") {
      pos += id->size();
      return;
    }
    conjunct.constraints.push_back(expect_linear());
  }

  CompiledPredicate parse() {
    CompiledPredicate predicate;
    predicate.rock_type = expect_ident();
    expect_symbol("(");
    if (expect_ident() != "x") fail("expected 'x'");
    expect_symbol(")");
    expect_symbol("=def");
    if (accept_keyword("false")) {
      if (!eof()) fail("trailing input");
      return predicate;
    }
    while (true) {
      Conjunct conjunct;
      parse_atom(conjunct);
      while (accept_keyword("and")) parse_atom(conjunct);
      predicate.dnf.push_back(std::move(conjunct));
      if (eof()) break;
      if (!accept_keyword("or")) fail("expected 'or' or end of input");
    }
    return predicate;
  }
};

}  // namespace

CompiledPredicate parse_predicate_text(const std::string& text) {
  PredicateParser parser{text};
  return parser.parse();
}

}  // namespace petro::classify
