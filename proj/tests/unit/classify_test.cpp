#include <doctest.h>

#include <set>

#include "petro/classify.hpp"
#include "test_support.hpp"

using namespace petro;
using namespace petro::classify;

namespace {

RuleSet& shipped_rules() {
  static RuleSet rules = load_rules_file(test::data_path("rules/ultramafic.json"));
  return rules;
}

LinearConstraint make_constraint(std::map<std::string, Rational> terms, Cmp cmp,
                                 Rational rhs, bool relative = false,
                                 std::string group = "") {
  LinearConstraint c;
  c.terms = std::move(terms);
  c.cmp = cmp;
  c.rhs = std::move(rhs);
  c.relative = relative;
  c.group = std::move(group);
  return c;
}

LinearConstraint rel(std::string var, Cmp cmp, Rational rhs, std::string group) {
  return make_constraint({{std::move(var), 1}}, cmp, std::move(rhs), true,
                         std::move(group));
}

LinearConstraint abs1(std::string var, Cmp cmp, Rational rhs) {
  return make_constraint({{std::move(var), 1}}, cmp, std::move(rhs));
}

}  // namespace

TEST_CASE("evaluate_constraint substitutes the harzburgite relative bounds") {
  Sample s = test::ooc_sample(70, 25, 1);  // OOC = 96
  CHECK(evaluate_constraint(s, rel("Ol", Cmp::ge, Rational(2, 5), "OOC")));   // 70 >= 38.4
  CHECK(evaluate_constraint(s, rel("Ol", Cmp::le, Rational(9, 10), "OOC")));  // 70 <= 86.4
  CHECK(evaluate_constraint(s, rel("Cpx", Cmp::lt, Rational(1, 20), "OOC"))); // 1 < 4.8
}

TEST_CASE("strict comparators are exact at the boundary") {
  Sample s = test::ooc_sample(50, 45, 5);  // OOC = 100, Cpx on the 5% line
  CHECK_FALSE(evaluate_constraint(s, rel("Cpx", Cmp::lt, Rational(1, 20), "OOC")));
  CHECK(evaluate_constraint(s, rel("Cpx", Cmp::le, Rational(1, 20), "OOC")));
}

TEST_CASE("absolute constraints compare against plain bounds") {
  Sample s = test::ooc_sample(70, 25, 1);
  CHECK(evaluate_constraint(s, abs1("M", Cmp::ge, 90)));
  CHECK(evaluate_constraint(s, abs1("carbonates", Cmp::le, 50)));
  CHECK(evaluate_constraint(s, abs1("hornblende", Cmp::eq, 0)));
}

TEST_CASE("locate_field finds the harzburgite field") {
  const Diagram* ooc = shipped_rules().diagram("OOC");
  REQUIRE(ooc);
  CHECK(locate_field(*ooc, test::ooc_sample(70, 25, 1)) == "harzburgite");
}

TEST_CASE("locate_field agrees with a brute-force membership oracle") {
  const Diagram* ooc = shipped_rules().diagram("OOC");
  Sample dunite = test::ooc_sample(95, 3, 2);
  CHECK(locate_field(*ooc, dunite) == "dunite");

  std::array<Rational, 3> point{95, 3, 2};
  int members = 0;
  for (const auto& field : ooc->fields) {
    if (point_in_field(field, ooc->axes, point)) {
      ++members;
      CHECK(field.name == "dunite");
    }
  }
  CHECK(members == 1);
}

TEST_CASE("locate_field rejects a zero axis total") {
  const Diagram* ooc = shipped_rules().diagram("OOC");
  CHECK_THROWS_AS(locate_field(*ooc, test::ooc_sample(0, 0, 0)),
                  DegenerateCompositionError);
}

TEST_CASE("boundary ownership: the 5% pyroxene line belongs to lherzolite") {
  const Diagram* ooc = shipped_rules().diagram("OOC");
  CHECK(locate_field(*ooc, test::ooc_sample(50, 45, 5)) == "lherzolite");
}

TEST_CASE("the classifier walks the sample to harzburgite with a full trace") {
  ClassificationResult result =
      run_classifier(test::ooc_sample(70, 25, 1), shipped_rules());
  CHECK(result.outcome == ClassificationResult::Outcome::classified);
  CHECK(result.rock_type == "harzburgite");
  // 12 tree guards plus the field tests up to the harzburgite hit
  int guards = 0, fields = 0;
  for (const auto& entry : result.trace) {
    (entry.kind == TraceEntry::Kind::guard ? guards : fields) += 1;
  }
  CHECK(guards == 12);
  CHECK(fields == 2);  // dunite miss, harzburgite hit
  CHECK(result.trace.back().label == "OOC:harzburgite");
  CHECK(result.trace.back().value);
}

TEST_CASE("nonzero hornblende dispatches to the OPH diagram") {
  Sample s = test::ooc_sample(69, 25, 1);
  s.composition.entries["hornblende"] = 5;
  ClassificationResult result = run_classifier(s, shipped_rules());
  CHECK(result.outcome == ClassificationResult::Outcome::classified);
  CHECK(result.rock_type == "pyroxene_hornblende_peridotite");
  for (const auto& entry : result.trace) {
    if (entry.kind == TraceEntry::Kind::field) {
      CHECK(entry.label.rfind("OPH:", 0) == 0);
    }
  }
}

TEST_CASE("exclusion flags leave the ultramafic branch") {
  Sample s = test::ooc_sample(70, 25, 1);
  s.flags.set(Flag::pyroclastic, Tri::yes);
  ClassificationResult result = run_classifier(s, shipped_rules());
  CHECK(result.outcome == ClassificationResult::Outcome::out_of_scope);
  CHECK(result.branch == "pyroclastic");
}

TEST_CASE("an unknown flag blocks classification") {
  Sample s = test::ooc_sample(70, 25, 1);
  s.flags.set(Flag::plutonic, Tri::unknown);
  ClassificationResult result = run_classifier(s, shipped_rules());
  CHECK(result.outcome == ClassificationResult::Outcome::indeterminate);
  CHECK(result.reason == "plutonic");
}

TEST_CASE("strict absent species block classification with the missing datum") {
  Sample s = test::ooc_sample(70, 25, 1);
  s.composition.absent_is_unknown = true;
  ClassificationResult result = run_classifier(s, shipped_rules());
  CHECK(result.outcome == ClassificationResult::Outcome::indeterminate);
  CHECK(result.reason == "carbonates");
}

TEST_CASE("replaying a trace reaches the reported leaf") {
  const RuleSet& rules = shipped_rules();
  std::vector<Sample> samples = {test::ooc_sample(70, 25, 1),
                                 test::ooc_sample(95, 3, 2),
                                 test::oph_sample(20, 50, 30)};
  Sample pyro = test::ooc_sample(70, 25, 1);
  pyro.flags.set(Flag::kimberlite, Tri::yes);
  samples.push_back(pyro);
  for (const auto& sample : samples) {
    ClassificationResult result = run_classifier(sample, rules);
    auto leaf = replay_trace(rules, result.trace);
    REQUIRE(leaf.has_value());
    switch (result.outcome) {
      case ClassificationResult::Outcome::classified:
        CHECK(*leaf == "diagram:" + result.trace.back().label.substr(
                            0, result.trace.back().label.find(':')));
        break;
      case ClassificationResult::Outcome::out_of_scope:
        CHECK(*leaf == "oos:" + result.branch);
        break;
      case ClassificationResult::Outcome::indeterminate:
        break;
    }
  }
}

TEST_CASE("the compiled harzburgite predicate is the printed formula") {
  CompiledPredicate predicate = compile_predicate(shipped_rules(), "harzburgite");
  REQUIRE(predicate.dnf.size() == 1);
  predicate.canonicalize();

  CompiledPredicate expected;
  expected.rock_type = "harzburgite";
  Conjunct conjunct;
  conjunct.qualitative = {
      {Flag::plutonic, false},   {Flag::pyroclastic, true}, {Flag::kimberlite, true},
      {Flag::lamproite, true},   {Flag::lamprophyre, true}, {Flag::charnockite, true},
  };
  conjunct.constraints = {
      abs1("carbonates", Cmp::le, 50),
      abs1("melilite", Cmp::le, 10),
      abs1("M", Cmp::ge, 90),
      abs1("kalsilite", Cmp::eq, 0),
      abs1("leucite", Cmp::eq, 0),
      abs1("hornblende", Cmp::eq, 0),
      rel("Ol", Cmp::ge, Rational(2, 5), "OOC"),
      rel("Ol", Cmp::le, Rational(9, 10), "OOC"),
      rel("Cpx", Cmp::lt, Rational(1, 20), "OOC"),
  };
  expected.dnf.push_back(std::move(conjunct));
  expected.canonicalize();
  CHECK(predicate == expected);
}

TEST_CASE("dunite shares the harzburgite prefix with its own field tail") {
  CompiledPredicate harzburgite = compile_predicate(shipped_rules(), "harzburgite");
  CompiledPredicate dunite = compile_predicate(shipped_rules(), "dunite");
  REQUIRE(dunite.dnf.size() == 1);
  REQUIRE(harzburgite.dnf.size() == 1);
  CHECK(dunite.dnf[0].qualitative == harzburgite.dnf[0].qualitative);
  // identical absolute guards, then the reconstructed dunite field
  REQUIRE(dunite.dnf[0].constraints.size() == 7);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(dunite.dnf[0].constraints[i] == harzburgite.dnf[0].constraints[i]);
  }
  CHECK(dunite.dnf[0].constraints.back() == rel("Ol", Cmp::gt, Rational(9, 10), "OOC"));
}

TEST_CASE("unknown rock types are rejected") {
  CHECK_THROWS_AS(compile_predicate(shipped_rules(), "granite"), UnknownRockTypeError);
}

TEST_CASE("negating guards flips comparators and splits equalities") {
  auto flipped = negate_constraint(abs1("carbonates", Cmp::le, 50));
  REQUIRE(flipped.size() == 1);
  CHECK(flipped[0].cmp == Cmp::gt);

  // nonnegative combination against zero: single strict form
  auto nonneg = negate_constraint(abs1("hornblende", Cmp::eq, 0));
  REQUIRE(nonneg.size() == 1);
  CHECK(nonneg[0].cmp == Cmp::gt);

  // general equality: two-sided split
  auto split = negate_constraint(abs1("Ol", Cmp::eq, 40));
  REQUIRE(split.size() == 2);
  CHECK(split[0].cmp == Cmp::lt);
  CHECK(split[1].cmp == Cmp::gt);

  auto mixed = negate_constraint(
      make_constraint({{"Px", 1}, {"hornblende", -1}}, Cmp::eq, 0));
  CHECK(mixed.size() == 2);
}

TEST_CASE("compiled predicates agree with the classifier on fixtures") {
  const RuleSet& rules = shipped_rules();
  CompiledPredicate harz = compile_predicate(rules, "harzburgite");
  CompiledPredicate dun = compile_predicate(rules, "dunite");

  Sample in_harz = test::ooc_sample(70, 25, 1);
  CHECK(evaluate_predicate(harz, in_harz) == std::optional<bool>(true));
  CHECK(evaluate_predicate(dun, in_harz) == std::optional<bool>(false));

  Sample unknown_flag = test::ooc_sample(70, 25, 1);
  unknown_flag.flags.set(Flag::plutonic, Tri::unknown);
  CHECK(evaluate_predicate(harz, unknown_flag) == std::nullopt);

  Sample excluded = test::ooc_sample(70, 25, 1);
  excluded.flags.set(Flag::charnockite, Tri::yes);
  CHECK(evaluate_predicate(harz, excluded) == std::optional<bool>(false));
}

TEST_CASE("predicate text rendering round trips") {
  for (const char* type : {"harzburgite", "dunite", "lherzolite", "hornblendite",
                           "pyroxene_hornblende_peridotite"}) {
    CompiledPredicate predicate = compile_predicate(shipped_rules(), type);
    predicate.canonicalize();
    CompiledPredicate back = parse_predicate_text(render_predicate_text(predicate));
    back.canonicalize();
    CAPTURE(type);
    CHECK(back == predicate);
  }
}

TEST_CASE("predicate JSON round trips") {
  CompiledPredicate predicate = compile_predicate(shipped_rules(), "harzburgite");
  CompiledPredicate back = predicate_from_json(predicate_to_json(predicate));
  CHECK(back == predicate);
}

TEST_CASE("field location is invariant under uniform scaling") {
  const RuleSet& rules = shipped_rules();
  test::Rng rng(777);
  for (const auto& diagram : rules.diagrams) {
    for (int i = 0; i < 200; ++i) {
      std::array<Rational, 3> point{test::random_rational(rng), test::random_rational(rng),
                                    test::random_rational(rng)};
      if (point[0] + point[1] + point[2] == 0) continue;
      const DiagramField* base = locate_field_values(diagram, point);
      REQUIRE(base != nullptr);
      for (Rational lambda : {Rational(1, 3), Rational(2), Rational(1000)}) {
        std::array<Rational, 3> scaled{point[0] * lambda, point[1] * lambda,
                                       point[2] * lambda};
        CHECK(locate_field_values(diagram, scaled) == base);
      }
    }
  }
}

TEST_CASE("rule files validate their structure") {
  CHECK_THROWS_AS(load_rules("not json"), RuleLoadError);
  CHECK_THROWS_AS(load_rules("{}"), RuleLoadError);  // missing tree
  // undeclared species in a guard
  const char* bad_species = R"({
    "tree": {"if": {"constraint": {"terms": {"quartzite_x": "1"}, "cmp": "<=", "rhs": "5"}},
             "then": {"out_of_scope": "a"}, "else": {"out_of_scope": "b"}}
  })";
  try {
    load_rules(bad_species);
    FAIL("expected RuleLoadError");
  } catch (const RuleLoadError& e) {
    CHECK(e.path.find("quartzite_x") != std::string::npos);
  }
  // relative constraint outside a diagram
  const char* bad_relative = R"({
    "tree": {"if": {"constraint": {"terms": {"Ol": "1"}, "cmp": "<=", "rhs": "0.5",
                                   "relative": true}},
             "then": {"out_of_scope": "a"}, "else": {"out_of_scope": "b"}}
  })";
  CHECK_THROWS_AS(load_rules(bad_relative), RuleLoadError);
  // axes must sum to the declared group
  const char* bad_axes = R"({
    "diagrams": [{"name": "D", "group": "OOC", "axes": ["Ol", "Opx", "hornblende"],
                  "fields": [{"name": "f", "constraints":
                    [{"terms": {"Ol": "1"}, "cmp": ">=", "rhs": "0", "relative": true}]}]}],
    "tree": {"diagram": "D"}
  })";
  CHECK_THROWS_AS(load_rules(bad_axes), RuleLoadError);
}

TEST_CASE("the shipped rule file carries valid stamps") {
  for (const auto& diagram : shipped_rules().diagrams) {
    CHECK(stamp_valid(diagram));
  }
}

TEST_CASE("stamps change when any field constraint changes") {
  RuleSet rules = load_rules_file(test::data_path("rules/ultramafic.json"));
  Diagram mutated = rules.diagrams[0];
  std::string before = diagram_stamp(mutated);
  mutated.fields[0].constraints[0].rhs = Rational(17, 20);
  CHECK(diagram_stamp(mutated) != before);
  CHECK_FALSE(stamp_valid(mutated));
}
