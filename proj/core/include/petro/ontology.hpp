#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "petro/classify.hpp"

namespace petro::onto {

// ---------------------------------------------------------------------------
// Glossary input
// ---------------------------------------------------------------------------

struct TermRef {
  std::string term;  // normalized: compound words underscore-joined
  std::string lang;  // optional language tag, explicit rather than inferred
};

struct GlossaryEntry {
  std::vector<TermRef> terms;  // non-empty; all synonyms of one another
  std::string definition;
  std::vector<std::string> comments;
  std::vector<std::string> references;
  std::string origin;
  std::string formal_definition;  // optional class expression (Manchester subset)
};

struct GlossaryFormatError : std::runtime_error {
  GlossaryFormatError(std::string message, std::size_t line);
  std::size_t line;
};

// JSON lines, one entry per line:
// {"terms": ["harzburgite", {"term": "гарцбургит", "lang": "ru"}],
//  "definition": "...", "comments": [...], "references": [...],
//  "origin": "...", "formal_definition": "..."}
std::vector<GlossaryEntry> load_glossary_jsonl(const std::string& text);

// prefix -> namespace IRI; every exported name resolves under exactly one.
using PrefixTable = std::map<std::string, std::string>;
PrefixTable load_prefixes_json(const std::string& text);

// ---------------------------------------------------------------------------
// Class expressions (Manchester subset: and / or / not / only)
// ---------------------------------------------------------------------------

struct ClassExpr;
using ClassExprPtr = std::shared_ptr<const ClassExpr>;

struct ClassExpr {
  enum class Kind : std::uint8_t { named, intersection, union_, complement, only };
  Kind kind = Kind::named;
  std::string name;      // named: class; only: property
  std::vector<ClassExprPtr> args;
};

struct ClassExprParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ClassExprPtr parse_class_expr(std::string_view text);
std::string render_manchester(const ClassExpr& expr);

// ---------------------------------------------------------------------------
// Ontology document
// ---------------------------------------------------------------------------

struct OntologyDoc {
  PrefixTable prefixes;
  std::string default_prefix;  // prefix under which plain terms resolve

  std::set<std::string> classes;  // plain terms
  // Synonym equivalence cliques: the connected components (size >= 2) of the
  // pairwise co-occurrence graph, each sorted, the list sorted as well.
  std::vector<std::vector<std::string>> cliques;
  // class -> (property, literal) annotation assertions, in insertion order
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> annotations;
  // class -> defining class expression (abessedite-style)
  std::map<std::string, ClassExprPtr> definitions;
  // rock type -> compiled predicate; the qualitative part exports as a class
  // expression, the full three-part formula as a structured annotation
  // (standard OWL 2 data ranges cannot express the linear part).
  std::map<std::string, classify::CompiledPredicate> linear_definitions;
};

struct UnresolvablePrefixError : std::runtime_error {
  explicit UnresolvablePrefixError(std::string_view name);
};

// One class per distinct term; one equivalence clique per connected component
// of the synonym graph; definition/comment/reference strings become
// annotations on the entry's first term.
OntologyDoc build_glossary(const std::vector<GlossaryEntry>& entries,
                           PrefixTable prefixes, std::string default_prefix = "dic");

// Classes, flag classes and definition axioms for every rock type of a rule
// set, with the linear formulas carried as annotations.
OntologyDoc build_rules_ontology(const classify::RuleSet& rules, PrefixTable prefixes,
                                 std::string default_prefix = "dic");

// Deterministic OWL 2 Functional Syntax text: prefix declarations, sorted
// declarations, equivalence axioms, annotation assertions.
std::string export_functional(const OntologyDoc& doc);

// Human-readable Manchester-style companion.
std::string export_manchester(const OntologyDoc& doc);

// Minimal reader for re-import checks: reconstructs the class set, the clique
// structure and the annotation assertions from functional-syntax text.
struct ImportedOntology {
  std::set<std::string> classes;
  std::vector<std::vector<std::string>> cliques;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> annotations;
};
ImportedOntology read_functional(const std::string& text);

// Annotation property names used by the exporter.
inline constexpr std::string_view kDefinitionProp = "definition";
inline constexpr std::string_view kCommentProp = "comment";
inline constexpr std::string_view kReferenceProp = "reference";
inline constexpr std::string_view kOriginProp = "origin";
inline constexpr std::string_view kLinearDefinitionProp = "linear_definition";

}  // namespace petro::onto
