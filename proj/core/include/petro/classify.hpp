#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "petro/model.hpp"
#include "petro/rational.hpp"

namespace petro::classify {

// ---------------------------------------------------------------------------
// Linear constraints
// ---------------------------------------------------------------------------

enum class Cmp : std::uint8_t { lt, le, eq, ge, gt };

std::string_view cmp_symbol(Cmp c);
std::optional<Cmp> cmp_from_symbol(std::string_view s);

// sum(terms) cmp rhs, with rhs either an absolute constant or, when
// `relative` is set, a coefficient of the owning diagram's axis total
// (e.g. Ol >= 0.4 * OOC). Relative constraints always carry the diagram
// group in `group`; they are homogeneous, so field membership is invariant
// under uniform positive scaling of the axes.
struct LinearConstraint {
  std::map<std::string, Rational> terms;
  Cmp cmp = Cmp::le;
  Rational rhs;
  bool relative = false;
  std::string group;  // derived group naming the axis total, when relative

  bool operator==(const LinearConstraint&) const = default;
};

// Human form, e.g. "VPC_Ol(x) >= 0.4*VPC_OOC(x)" or "VPC_carbonates(x) <= 50".
std::string render_constraint(const LinearConstraint& c);

// Negation as positive-form constraints. Inequalities flip their comparator;
// an equality splits into two strict alternatives, except that a nonnegative
// combination tested against 0 negates to the single `> 0` form.
std::vector<LinearConstraint> negate_constraint(const LinearConstraint& c);

// Exact rational comparison, no epsilon. Relative constraints resolve the
// axis total through the group's derived VPC.
bool evaluate_constraint(const Sample& sample, const LinearConstraint& c,
                         const SpeciesRegistry& registry = SpeciesRegistry::standard());

// ---------------------------------------------------------------------------
// Diagrams
// ---------------------------------------------------------------------------

struct DiagramField {
  std::string name;
  std::vector<LinearConstraint> constraints;  // conjunction
  bool reconstructed = false;  // field geometry inferred, not printed verbatim
};

struct Diagram {
  std::string name;   // e.g. "OOC"
  std::string group;  // derived group equal to the axis sum
  std::array<std::string, 3> axes;
  std::vector<DiagramField> fields;
  std::string stamp;  // verification stamp, empty when unverified
};

// Membership of a raw axis-value triple in a field (total = sum of values).
bool point_in_field(const DiagramField& field, const std::array<std::string, 3>& axes,
                    const std::array<Rational, 3>& values);

// First field containing the triple, in file order; nullptr when none.
// Uniqueness is guaranteed on diagrams carrying a valid verification stamp.
const DiagramField* locate_field_values(const Diagram& diagram,
                                        const std::array<Rational, 3>& values);

struct DegenerateCompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoFieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Locates the diagram field for a sample's axis values. Throws
// DegenerateCompositionError when the axis total is zero and NoFieldError
// when no field matches (only possible on unverified diagrams).
std::string locate_field(const Diagram& diagram, const Sample& sample,
                         const SpeciesRegistry& registry = SpeciesRegistry::standard());

// ---------------------------------------------------------------------------
// Rule tree
// ---------------------------------------------------------------------------

struct FlagTest {
  Flag flag;
  bool operator==(const FlagTest&) const = default;
};
using GuardCondition = std::variant<FlagTest, LinearConstraint>;

struct TreeNode;
using TreeNodePtr = std::unique_ptr<TreeNode>;

struct GuardNode {
  GuardCondition condition;
  TreeNodePtr on_true;
  TreeNodePtr on_false;
};
struct RockLeaf {
  std::string rock_type;
};
struct DiagramLeaf {
  std::string diagram;
};
struct OutOfScopeLeaf {
  std::string branch;
};

struct TreeNode {
  std::variant<GuardNode, RockLeaf, DiagramLeaf, OutOfScopeLeaf> node;
};

struct RuleSet {
  std::string name;
  SpeciesRegistry registry;
  std::vector<Diagram> diagrams;
  TreeNodePtr tree;

  const Diagram* diagram(std::string_view name) const;
  std::vector<std::string> rock_types() const;  // sorted, deduplicated
};

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

struct TraceEntry {
  enum class Kind : std::uint8_t { guard, field };
  Kind kind = Kind::guard;
  std::string label;
  bool value = false;
};

struct ClassificationResult {
  enum class Outcome : std::uint8_t { classified, out_of_scope, indeterminate };
  Outcome outcome = Outcome::indeterminate;
  std::string rock_type;  // when classified
  std::string branch;     // when out of scope
  std::string reason;     // blocking flag or missing datum, when indeterminate
  std::vector<TraceEntry> trace;
};

std::string_view outcome_name(ClassificationResult::Outcome o);

// Walks the tree from the root. Guards reading an unknown flag or an
// indeterminate value stop the walk with an indeterminate outcome; branches
// the rule set does not elaborate yield out_of_scope. The caller is expected
// to have run validate_sample.
ClassificationResult run_classifier(const Sample& sample, const RuleSet& rules);

// Replays a trace's guard values through the tree; returns the leaf label
// reached ("rock:<diagram field or leaf>", "diagram:<name>", "oos:<branch>").
std::optional<std::string> replay_trace(const RuleSet& rules,
                                        const std::vector<TraceEntry>& trace);

// ---------------------------------------------------------------------------
// Compiled predicates
// ---------------------------------------------------------------------------

struct QualLiteral {
  Flag flag;
  bool negated = false;
  bool operator==(const QualLiteral&) const = default;
};

struct Conjunct {
  std::vector<QualLiteral> qualitative;
  std::vector<LinearConstraint> constraints;
  bool operator==(const Conjunct&) const = default;
};

// Closed-form rock type definition: a disjunction of conjunctions extracted
// from root-to-leaf paths, diagram dispatch inlined.
struct CompiledPredicate {
  std::string rock_type;
  std::vector<Conjunct> dnf;

  void canonicalize();  // stable order for literal-set comparison
  bool operator==(const CompiledPredicate&) const = default;
};

struct UnknownRockTypeError : std::runtime_error {
  explicit UnknownRockTypeError(std::string_view rock_type);
};

CompiledPredicate compile_predicate(const RuleSet& rules, std::string_view rock_type);

// Three-valued evaluation (Kleene): nullopt when an unknown flag or an
// indeterminate value blocks the verdict.
std::optional<bool> evaluate_predicate(
    const CompiledPredicate& predicate, const Sample& sample,
    const SpeciesRegistry& registry = SpeciesRegistry::standard());

// Text rendering in the three-part layout (qualitative line, absolute lines,
// relative lines); parse_predicate_text is its inverse.
std::string render_predicate_text(const CompiledPredicate& predicate);
CompiledPredicate parse_predicate_text(const std::string& text);

std::string predicate_to_json(const CompiledPredicate& predicate);
CompiledPredicate predicate_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Rule file I/O
// ---------------------------------------------------------------------------

struct RuleLoadError : std::runtime_error {
  RuleLoadError(std::string message, std::string path);
  std::string path;  // JSON-pointer-style location
};

RuleSet load_rules(const std::string& text);
RuleSet load_rules_file(const std::string& path);

// Content hash of a diagram's geometry; changes whenever any field
// constraint changes.
std::string diagram_stamp(const Diagram& diagram);
bool stamp_valid(const Diagram& diagram);

// Rewrites the rule file text with freshly computed stamps (layout preserved
// via ordered round-trip). Only called after verification succeeds.
std::string stamp_rules_text(const std::string& text);

}  // namespace petro::classify
