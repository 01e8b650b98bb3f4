#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "petro/diagnostics.hpp"
#include "petro/rational.hpp"

namespace petro::cnl {

// ---------------------------------------------------------------------------
// Facts
// ---------------------------------------------------------------------------

struct Name {
  std::string value;
  bool operator==(const Name&) const = default;
  auto operator<=>(const Name&) const = default;
};

struct Term {
  std::string value;
  bool operator==(const Term&) const = default;
  auto operator<=>(const Term&) const = default;
};

// Object of a triple: another name, a class term (for is_a), a string
// literal, or a rational literal.
using FactObject = std::variant<Name, Term, std::string, Rational>;

struct Fact {
  std::string subject;    // proper name
  std::string predicate;  // term, or reserved "is_a" / "part_of"
  FactObject object;

  bool operator==(const Fact&) const = default;
};

inline constexpr std::string_view kIsA = "is_a";
inline constexpr std::string_view kPartOf = "part_of";

class FactGraph {
 public:
  void add(Fact fact);

  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }
  const std::vector<Fact>& facts() const { return facts_; }

  // Indices of facts whose subject or object mentions `name`.
  const std::vector<std::size_t>& mentioning(const std::string& name) const;

  // Line-oriented triple export: one fact per line, string literals quoted,
  // names and terms bare, numbers in decimal (ratio when no finite decimal).
  std::string to_triples() const;

 private:
  std::vector<Fact> facts_;
  std::map<std::string, std::vector<std::size_t>> index_;
};

// ---------------------------------------------------------------------------
// Sentences
// ---------------------------------------------------------------------------

struct Classification {  // "SAM32994 is a sample."
  std::string name, term;
  bool operator==(const Classification&) const = default;
};
struct StringAttribute {  // "A title of PUB5633 is \"...\"."
  std::string term, name, value;
  bool operator==(const StringAttribute&) const = default;
};
struct NumberAttribute {  // "A value of WPC469812 is 73.95."
  std::string term, name;
  Rational value;
  bool operator==(const NumberAttribute&) const = default;
};
struct NameAttribute {  // "A gathering_place of SAM32994 is PLC32994."
  std::string term, name, object;
  bool operator==(const NameAttribute&) const = default;
};
struct Relation {  // "PUB5633 describes SAM32994."
  std::string subject, verb, object;
  bool operator==(const Relation&) const = default;
};
struct PartOf {  // "PLC32994 is a part of Iceland."
  std::string subject, object;
  bool operator==(const PartOf&) const = default;
};

using SentenceAst = std::variant<Classification, StringAttribute, NumberAttribute,
                                 NameAttribute, Relation, PartOf>;

// Transitive verbs are an open lexicon; a sentence with an unknown verb in
// verb position still parses as a Relation but carries a warning.
class Lexicon {
 public:
  Lexicon() : verbs_{"describes", "includes"} {}
  explicit Lexicon(std::set<std::string> verbs) : verbs_(std::move(verbs)) {}

  bool is_verb(std::string_view term) const;
  void add_verb(std::string verb) { verbs_.insert(std::move(verb)); }
  const std::set<std::string>& verbs() const { return verbs_; }

 private:
  std::set<std::string> verbs_;
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct SyntaxError : std::runtime_error {
  SyntaxError(std::string message, int col, std::vector<std::string> attempted);
  int col;  // 1-based column within the sentence
  std::vector<std::string> attempted;
};

struct NameError : std::runtime_error {
  NameError(std::string message, int col);
  int col;
};

struct UnserializableFactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Parsing and generation
// ---------------------------------------------------------------------------

// Parses one period-terminated sentence. First match over the fixed template
// set; the grammar is unambiguous. Unknown-verb warnings are appended to
// `warnings` when given.
SentenceAst parse_sentence(std::string_view line, const Lexicon& lexicon = Lexicon(),
                           std::vector<std::string>* warnings = nullptr);

struct ParsedDocument {
  FactGraph graph;
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;
  bool ok() const { return errors.empty(); }
};

// Parses a whole document: sentences separated by whitespace, several per
// line allowed, '#'-prefixed comment lines ignored. Parsing continues past
// errors and reports all of them with positions.
ParsedDocument parse_document(std::string_view text, const Lexicon& lexicon = Lexicon());

Fact ast_to_fact(const SentenceAst& ast);

// Canonical template sentence for a fact. Right inverse of parse_sentence:
// parse_sentence(generate(f)) yields exactly f. Throws UnserializableFactError
// for string literals with control characters and for rational literals with
// no finite decimal expansion (CNL numbers are decimal).
std::string generate(const Fact& fact, const Lexicon& lexicon = Lexicon());

// JSON forms used by the CLI (--json).
std::string facts_to_json(const FactGraph& graph);
FactGraph facts_from_json(const std::string& text);

}  // namespace petro::cnl
