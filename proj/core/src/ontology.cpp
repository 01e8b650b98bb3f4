#include "petro/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace petro::onto {

// ---------------------------------------------------------------------------
// Glossary input
// ---------------------------------------------------------------------------

GlossaryFormatError::GlossaryFormatError(std::string message, std::size_t line_)
    : std::runtime_error("glossary line " + std::to_string(line_) + ": " + message),
      line(line_) {}

namespace {

using nlohmann::json;

std::string normalize_glossary_term(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    if (c == ' ' || c == '\t') {
      if (!out.empty() && out.back() != '_') out += '_';
    } else if (static_cast<unsigned char>(c) < 0x80) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      out += c;  // non-ASCII (e.g. Cyrillic) passes through untouched
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

}  // namespace

std::vector<GlossaryEntry> load_glossary_jsonl(const std::string& text) {
  std::vector<GlossaryEntry> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) {
      trimmed.pop_back();
    }
    if (trimmed.empty()) continue;
    json j;
    try {
      j = json::parse(trimmed);
    } catch (const json::parse_error& e) {
      throw GlossaryFormatError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    GlossaryEntry entry;
    auto terms = j.find("terms");
    if (terms == j.end() || !terms->is_array() || terms->empty()) {
      throw GlossaryFormatError("entry needs a non-empty 'terms' array", line_no);
    }
    for (const auto& t : *terms) {
      TermRef ref;
      if (t.is_string()) {
        ref.term = normalize_glossary_term(t.get<std::string>());
      } else if (t.is_object()) {
        ref.term = normalize_glossary_term(t.value("term", ""));
        ref.lang = t.value("lang", "");
      } else {
        throw GlossaryFormatError("terms must be strings or {term, lang} objects", line_no);
      }
      if (ref.term.empty()) throw GlossaryFormatError("empty term", line_no);
      entry.terms.push_back(std::move(ref));
    }
    entry.definition = j.value("definition", "");
    if (auto it = j.find("comments"); it != j.end()) {
      for (const auto& c : *it) entry.comments.push_back(c.get<std::string>());
    }
    if (auto it = j.find("references"); it != j.end()) {
      for (const auto& r : *it) entry.references.push_back(r.get<std::string>());
    }
    entry.origin = j.value("origin", "");
    entry.formal_definition = j.value("formal_definition", "");
    entries.push_back(std::move(entry));
  }
  return entries;
}

PrefixTable load_prefixes_json(const std::string& text) {
  json j = json::parse(text);
  PrefixTable table;
  for (const auto& [prefix, iri] : j.items()) {
    table[prefix] = iri.get<std::string>();
  }
  return table;
}

// ---------------------------------------------------------------------------
// Class expressions
// ---------------------------------------------------------------------------

namespace {

struct ExprParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& message) {
    throw ClassExprParseError("class expression: " + message + " at offset " +
                              std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  std::optional<std::string> peek_word() {
    skip_ws();
    std::size_t p = pos;
    if (p >= text.size()) return std::nullopt;
    if (!(std::isalpha(static_cast<unsigned char>(text[p])) || text[p] == '_' ||
          static_cast<unsigned char>(text[p]) >= 0x80)) {
      return std::nullopt;
    }
    std::size_t start = p;
    while (p < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[p])) || text[p] == '_' ||
            text[p] == ':' || static_cast<unsigned char>(text[p]) >= 0x80)) {
      ++p;
    }
    return std::string(text.substr(start, p - start));
  }

  bool accept_word(std::string_view w) {
    auto word = peek_word();
    if (!word || *word != w) return false;
    pos += word->size();
    return true;
  }

  bool accept_char(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  ClassExprPtr parse_expr() {
    auto left = parse_and();
    if (!accept_word("or")) return left;
    auto node = std::make_shared<ClassExpr>();
    node->kind = ClassExpr::Kind::union_;
    node->args.push_back(std::move(left));
    do {
      node->args.push_back(parse_and());
    } while (accept_word("or"));
    return node;
  }

  ClassExprPtr parse_and() {
    auto left = parse_not();
    if (!accept_word("and")) return left;
    auto node = std::make_shared<ClassExpr>();
    node->kind = ClassExpr::Kind::intersection;
    node->args.push_back(std::move(left));
    do {
      node->args.push_back(parse_not());
    } while (accept_word("and"));
    return node;
  }

  ClassExprPtr parse_not() {
    if (accept_word("not")) {
      auto node = std::make_shared<ClassExpr>();
      node->kind = ClassExpr::Kind::complement;
      node->args.push_back(parse_not());
      return node;
    }
    return parse_restriction();
  }

  ClassExprPtr parse_restriction() {
    if (accept_char('(')) {
      auto inner = parse_expr();
      if (!accept_char(')')) fail("expected ')'");
      return inner;
    }
    auto word = peek_word();
    if (!word) fail("expected a name or '('");
    pos += word->size();
    if (accept_word("only")) {
      auto node = std::make_shared<ClassExpr>();
      node->kind = ClassExpr::Kind::only;
      node->name = *word;
      node->args.push_back(parse_not());
      return node;
    }
    auto node = std::make_shared<ClassExpr>();
    node->kind = ClassExpr::Kind::named;
    node->name = *word;
    return node;
  }

  ClassExprPtr parse() {
    auto expr = parse_expr();
    skip_ws();
    if (pos != text.size()) fail("trailing input");
    return expr;
  }
};

int precedence(ClassExpr::Kind kind) {
  switch (kind) {
    case ClassExpr::Kind::union_:
      return 0;
    case ClassExpr::Kind::intersection:
      return 1;
    case ClassExpr::Kind::complement:
    case ClassExpr::Kind::only:
      return 2;
    case ClassExpr::Kind::named:
      return 3;
  }
  return 3;
}

void render_manchester_inner(const ClassExpr& expr, int parent_prec, std::string& out) {
  int prec = precedence(expr.kind);
  bool parens = prec < parent_prec;
  if (parens) out += "(";
  switch (expr.kind) {
    case ClassExpr::Kind::named:
      out += expr.name;
      break;
    case ClassExpr::Kind::intersection:
    case ClassExpr::Kind::union_: {
      const char* op = expr.kind == ClassExpr::Kind::intersection ? " and " : " or ";
      for (std::size_t i = 0; i < expr.args.size(); ++i) {
        if (i) out += op;
        render_manchester_inner(*expr.args[i], prec + 1, out);
      }
      break;
    }
    case ClassExpr::Kind::complement:
      out += "not ";
      render_manchester_inner(*expr.args.front(), prec + 1, out);
      break;
    case ClassExpr::Kind::only:
      out += expr.name + " only ";
      render_manchester_inner(*expr.args.front(), prec + 1, out);
      break;
  }
  if (parens) out += ")";
}

}  // namespace

ClassExprPtr parse_class_expr(std::string_view text) {
  ExprParser parser{text};
  return parser.parse();
}

std::string render_manchester(const ClassExpr& expr) {
  std::string out;
  render_manchester_inner(expr, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// build_glossary
// ---------------------------------------------------------------------------

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

void append_annotation(OntologyDoc& doc, const std::string& cls, std::string_view prop,
                       const std::string& value) {
  if (!value.empty()) doc.annotations[cls].emplace_back(std::string(prop), value);
}

}  // namespace

OntologyDoc build_glossary(const std::vector<GlossaryEntry>& entries, PrefixTable prefixes,
                           std::string default_prefix) {
  OntologyDoc doc;
  doc.prefixes = std::move(prefixes);
  doc.default_prefix = std::move(default_prefix);

  std::vector<std::string> terms;
  std::map<std::string, std::size_t> term_index;
  auto intern = [&](const std::string& term) {
    auto [it, inserted] = term_index.emplace(term, terms.size());
    if (inserted) terms.push_back(term);
    return it->second;
  };

  for (const auto& entry : entries) {
    for (const auto& ref : entry.terms) intern(ref.term);
  }
  UnionFind components(terms.size());
  for (const auto& entry : entries) {
    std::size_t first = intern(entry.terms.front().term);
    for (const auto& ref : entry.terms) components.unite(first, intern(ref.term));
  }

  doc.classes.insert(terms.begin(), terms.end());

  std::map<std::size_t, std::vector<std::string>> by_root;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    by_root[components.find(i)].push_back(terms[i]);
  }
  for (auto& [root, members] : by_root) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    doc.cliques.push_back(std::move(members));
  }
  std::sort(doc.cliques.begin(), doc.cliques.end());

  for (const auto& entry : entries) {
    const std::string& cls = entry.terms.front().term;
    append_annotation(doc, cls, kDefinitionProp, entry.definition);
    for (const auto& c : entry.comments) append_annotation(doc, cls, kCommentProp, c);
    for (const auto& r : entry.references) append_annotation(doc, cls, kReferenceProp, r);
    append_annotation(doc, cls, kOriginProp, entry.origin);
    if (!entry.formal_definition.empty()) {
      doc.definitions[cls] = parse_class_expr(entry.formal_definition);
    }
  }
  return doc;
}

// ---------------------------------------------------------------------------
// build_rules_ontology
// ---------------------------------------------------------------------------

namespace {

ClassExprPtr named(std::string name) {
  auto node = std::make_shared<ClassExpr>();
  node->kind = ClassExpr::Kind::named;
  node->name = std::move(name);
  return node;
}

// Qualitative part of a conjunct as a class expression: positives intersected
// with the complement of the union of negated flags (the paper's
// "plutonic and not (pyroclastic or ...)" shape).
ClassExprPtr conjunct_class_expr(const classify::Conjunct& conjunct) {
  std::vector<ClassExprPtr> parts;
  std::vector<ClassExprPtr> negated;
  for (const auto& q : conjunct.qualitative) {
    if (q.negated) {
      negated.push_back(named(std::string(flag_name(q.flag))));
    } else {
      parts.push_back(named(std::string(flag_name(q.flag))));
    }
  }
  if (!negated.empty()) {
    ClassExprPtr inner;
    if (negated.size() == 1) {
      inner = negated.front();
    } else {
      auto u = std::make_shared<ClassExpr>();
      u->kind = ClassExpr::Kind::union_;
      u->args = std::move(negated);
      inner = u;
    }
    auto c = std::make_shared<ClassExpr>();
    c->kind = ClassExpr::Kind::complement;
    c->args.push_back(std::move(inner));
    parts.push_back(std::move(c));
  }
  if (parts.empty()) return nullptr;
  if (parts.size() == 1) return parts.front();
  auto node = std::make_shared<ClassExpr>();
  node->kind = ClassExpr::Kind::intersection;
  node->args = std::move(parts);
  return node;
}

ClassExprPtr predicate_class_expr(const classify::CompiledPredicate& predicate) {
  std::vector<ClassExprPtr> conjuncts;
  for (const auto& c : predicate.dnf) {
    auto expr = conjunct_class_expr(c);
    if (expr) conjuncts.push_back(std::move(expr));
  }
  if (conjuncts.empty()) return nullptr;
  if (conjuncts.size() == 1) return conjuncts.front();
  auto node = std::make_shared<ClassExpr>();
  node->kind = ClassExpr::Kind::union_;
  node->args = std::move(conjuncts);
  return node;
}

}  // namespace

OntologyDoc build_rules_ontology(const classify::RuleSet& rules, PrefixTable prefixes,
                                 std::string default_prefix) {
  OntologyDoc doc;
  doc.prefixes = std::move(prefixes);
  doc.default_prefix = std::move(default_prefix);

  for (const auto& rock_type : rules.rock_types()) {
    classify::CompiledPredicate predicate = classify::compile_predicate(rules, rock_type);
    doc.classes.insert(rock_type);
    for (const auto& conjunct : predicate.dnf) {
      for (const auto& q : conjunct.qualitative) {
        doc.classes.insert(std::string(flag_name(q.flag)));
      }
    }
    doc.linear_definitions[rock_type] = std::move(predicate);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Functional syntax export
// ---------------------------------------------------------------------------

UnresolvablePrefixError::UnresolvablePrefixError(std::string_view name)
    : std::runtime_error("no declared namespace prefix resolves '" + std::string(name) +
                         "'") {}

namespace {

std::string resolve_name(const OntologyDoc& doc, const std::string& name) {
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    std::string prefix = name.substr(0, colon);
    if (!doc.prefixes.count(prefix)) throw UnresolvablePrefixError(name);
    return name;
  }
  if (!doc.prefixes.count(doc.default_prefix)) throw UnresolvablePrefixError(name);
  return doc.default_prefix + ":" + name;
}

// Newlines are escaped so that every axiom stays on one line.
std::string escape_literal(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
    } else {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
  }
  return out;
}

void render_functional_expr(const OntologyDoc& doc, const ClassExpr& expr,
                            std::string& out) {
  switch (expr.kind) {
    case ClassExpr::Kind::named:
      out += resolve_name(doc, expr.name);
      break;
    case ClassExpr::Kind::intersection:
    case ClassExpr::Kind::union_: {
      out += expr.kind == ClassExpr::Kind::intersection ? "ObjectIntersectionOf("
                                                        : "ObjectUnionOf(";
      for (std::size_t i = 0; i < expr.args.size(); ++i) {
        if (i) out += " ";
        render_functional_expr(doc, *expr.args[i], out);
      }
      out += ")";
      break;
    }
    case ClassExpr::Kind::complement:
      out += "ObjectComplementOf(";
      render_functional_expr(doc, *expr.args.front(), out);
      out += ")";
      break;
    case ClassExpr::Kind::only:
      out += "ObjectAllValuesFrom(" + resolve_name(doc, expr.name) + " ";
      render_functional_expr(doc, *expr.args.front(), out);
      out += ")";
      break;
  }
}

std::vector<std::string> used_annotation_properties(const OntologyDoc& doc) {
  std::set<std::string> props;
  for (const auto& [cls, notes] : doc.annotations) {
    for (const auto& [prop, value] : notes) props.insert(prop);
  }
  if (!doc.linear_definitions.empty()) props.insert(std::string(kLinearDefinitionProp));
  return {props.begin(), props.end()};
}

}  // namespace

std::string export_functional(const OntologyDoc& doc) {
  std::ostringstream os;
  for (const auto& [prefix, iri] : doc.prefixes) {
    os << "Prefix(" << prefix << ":=<" << iri << ">)\n";
  }
  os << "Ontology(\n";

  for (const auto& prop : used_annotation_properties(doc)) {
    os << "Declaration(AnnotationProperty(" << resolve_name(doc, prop) << "))\n";
  }
  std::vector<std::string> classes(doc.classes.begin(), doc.classes.end());
  std::vector<std::string> resolved;
  resolved.reserve(classes.size());
  for (const auto& cls : classes) resolved.push_back(resolve_name(doc, cls));
  std::sort(resolved.begin(), resolved.end());
  for (const auto& iri : resolved) os << "Declaration(Class(" << iri << "))\n";

  for (const auto& clique : doc.cliques) {
    os << "EquivalentClasses(";
    for (std::size_t i = 0; i < clique.size(); ++i) {
      if (i) os << " ";
      os << resolve_name(doc, clique[i]);
    }
    os << ")\n";
  }
  for (const auto& [cls, expr] : doc.definitions) {
    std::string rendered;
    render_functional_expr(doc, *expr, rendered);
    os << "EquivalentClasses(" << resolve_name(doc, cls) << " " << rendered << ")\n";
  }
  for (const auto& [rock_type, predicate] : doc.linear_definitions) {
    if (auto expr = predicate_class_expr(predicate)) {
      std::string rendered;
      render_functional_expr(doc, *expr, rendered);
      os << "SubClassOf(" << resolve_name(doc, rock_type) << " " << rendered << ")\n";
    }
  }
  for (const auto& [cls, notes] : doc.annotations) {
    auto sorted = notes;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [prop, value] : sorted) {
      os << "AnnotationAssertion(" << resolve_name(doc, prop) << " "
         << resolve_name(doc, cls) << " \"" << escape_literal(value) << "\")\n";
    }
  }
  for (const auto& [rock_type, predicate] : doc.linear_definitions) {
    os << "AnnotationAssertion(" << resolve_name(doc, std::string(kLinearDefinitionProp))
       << " " << resolve_name(doc, rock_type) << " \""
       << escape_literal(classify::render_predicate_text(predicate)) << "\")\n";
  }
  os << ")\n";
  return os.str();
}

std::string export_manchester(const OntologyDoc& doc) {
  std::ostringstream os;
  for (const auto& [prefix, iri] : doc.prefixes) {
    os << "Prefix: " << prefix << ": <" << iri << ">\n";
  }
  os << "\n";
  for (const auto& cls : doc.classes) {
    os << "Class: " << resolve_name(doc, cls) << "\n";
    if (auto it = doc.definitions.find(cls); it != doc.definitions.end()) {
      os << "  EquivalentTo: " << render_manchester(*it->second) << "\n";
    }
    if (auto it = doc.linear_definitions.find(cls); it != doc.linear_definitions.end()) {
      if (auto expr = predicate_class_expr(it->second)) {
        os << "  SubClassOf: " << render_manchester(*expr) << "\n";
      }
      std::istringstream formula(classify::render_predicate_text(it->second));
      std::string line;
      os << "  // linear definition:\n";
      while (std::getline(formula, line)) os << "  //   " << line << "\n";
    }
    if (auto it = doc.annotations.find(cls); it != doc.annotations.end()) {
      for (const auto& [prop, value] : it->second) {
        os << "  Annotations: " << prop << " \"" << escape_literal(value) << "\"\n";
      }
    }
    os << "\n";
  }
  for (const auto& clique : doc.cliques) {
    os << "EquivalentClasses: ";
    for (std::size_t i = 0; i < clique.size(); ++i) {
      if (i) os << ", ";
      os << clique[i];
    }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Minimal functional-syntax reader
// ---------------------------------------------------------------------------

namespace {

std::string strip_prefix(const std::string& iri) {
  auto colon = iri.find(':');
  return colon == std::string::npos ? iri : iri.substr(colon + 1);
}

std::string unescape_literal(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;
      out += s[i] == 'n' ? '\n' : s[i];
    } else {
      out += s[i];
    }
  }
  return out;
}

}  // namespace

ImportedOntology read_functional(const std::string& text) {
  ImportedOntology imported;
  std::map<std::string, std::size_t> term_index;
  std::vector<std::string> terms;
  std::vector<std::pair<std::size_t, std::size_t>> links;
  auto intern = [&](const std::string& term) {
    auto [it, inserted] = term_index.emplace(term, terms.size());
    if (inserted) terms.push_back(term);
    return it->second;
  };

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("Declaration(Class(", 0) == 0) {
      auto inner = line.substr(18, line.size() - 18 - 2);
      imported.classes.insert(strip_prefix(inner));
      continue;
    }
    if (line.rfind("EquivalentClasses(", 0) == 0) {
      auto inner = line.substr(18, line.size() - 18 - 1);
      if (inner.find('(') != std::string::npos) continue;  // definition axiom
      std::istringstream args(inner);
      std::string arg;
      std::optional<std::size_t> first;
      while (args >> arg) {
        std::size_t idx = intern(strip_prefix(arg));
        if (!first) {
          first = idx;
        } else {
          links.emplace_back(*first, idx);
        }
      }
      continue;
    }
    if (line.rfind("AnnotationAssertion(", 0) == 0) {
      auto inner = line.substr(20, line.size() - 20 - 1);
      std::istringstream args(inner);
      std::string prop, subject;
      args >> prop >> subject;
      auto quote = inner.find('"');
      if (quote == std::string::npos || inner.size() < quote + 2) continue;
      std::string literal = inner.substr(quote + 1, inner.size() - quote - 2);
      imported.annotations[strip_prefix(subject)].emplace_back(strip_prefix(prop),
                                                               unescape_literal(literal));
      continue;
    }
  }

  UnionFind components(terms.size());
  for (const auto& [a, b] : links) components.unite(a, b);
  std::map<std::size_t, std::vector<std::string>> by_root;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    by_root[components.find(i)].push_back(terms[i]);
  }
  for (auto& [root, members] : by_root) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    imported.cliques.push_back(std::move(members));
  }
  std::sort(imported.cliques.begin(), imported.cliques.end());
  return imported;
}

}  // namespace petro::onto
