#include <doctest.h>

#include <algorithm>

#include "petro/verify.hpp"
#include "test_support.hpp"

using namespace petro;
using namespace petro::classify;
using namespace petro::verify;

namespace {

RuleSet& shipped_rules() {
  static RuleSet rules = load_rules_file(test::data_path("rules/ultramafic.json"));
  return rules;
}

const std::array<std::string, 3> kOocAxes = {"Ol", "Opx", "Cpx"};

LinearConstraint ooc_bound(std::string var, Cmp cmp, Rational rhs) {
  LinearConstraint c;
  c.terms[std::move(var)] = 1;
  c.cmp = cmp;
  c.rhs = std::move(rhs);
  return c;
}

Diagram mutated_dunite_bound(Rational bound) {
  Diagram d = *shipped_rules().diagram("OOC");
  REQUIRE(d.fields[0].name == "dunite");
  d.fields[0].constraints[0].rhs = std::move(bound);
  return d;
}

Diagram mutated_harzburgite_upper(Rational bound) {
  Diagram d = *shipped_rules().diagram("OOC");
  REQUIRE(d.fields[1].name == "harzburgite");
  REQUIRE(d.fields[1].constraints[1].cmp == Cmp::le);
  d.fields[1].constraints[1].rhs = std::move(bound);
  return d;
}

// exact membership over the normalized grid point
bool in_any_field(const Diagram& diagram, const std::array<Rational, 3>& point,
                  int* count = nullptr) {
  int n = 0;
  for (const auto& field : diagram.fields) {
    if (point_in_field(field, diagram.axes, point)) ++n;
  }
  if (count) *count = n;
  return n > 0;
}

}  // namespace

TEST_CASE("contradictory bounds are infeasible") {
  ConstraintSystem system{kOocAxes,
                          {ooc_bound("Ol", Cmp::ge, 40), ooc_bound("Ol", Cmp::le, 30)}};
  CHECK(!feasible(system));
}

TEST_CASE("a satisfiable bound yields an exact witness") {
  ConstraintSystem system{kOocAxes, {ooc_bound("Ol", Cmp::ge, 90)}};
  auto witness = feasible(system);
  REQUIRE(witness.has_value());
  CHECK((*witness)[0] >= 90);
  CHECK((*witness)[0] + (*witness)[1] + (*witness)[2] == 100);
  CHECK((*witness)[1] >= 0);
  CHECK((*witness)[2] >= 0);
}

TEST_CASE("an empty open interval is infeasible") {
  ConstraintSystem system{kOocAxes,
                          {ooc_bound("Ol", Cmp::gt, 90), ooc_bound("Ol", Cmp::lt, 90)}};
  CHECK(!feasible(system));
}

TEST_CASE("strictness at the simplex corner is decided exactly") {
  CHECK(!feasible({kOocAxes, {ooc_bound("Ol", Cmp::gt, 100)}}));
  auto witness = feasible({kOocAxes, {ooc_bound("Ol", Cmp::ge, 100)}});
  REQUIRE(witness.has_value());
  CHECK((*witness)[0] == 100);
}

TEST_CASE("tiny open intervals still produce exact witnesses") {
  ConstraintSystem system{
      kOocAxes, {ooc_bound("Ol", Cmp::gt, 0), ooc_bound("Ol", Cmp::lt, Rational(1, 1000000))}};
  auto witness = feasible(system);
  REQUIRE(witness.has_value());
  CHECK((*witness)[0] > 0);
  CHECK((*witness)[0] < Rational(1, 1000000));
}

TEST_CASE("equality constraints are eliminated by substitution") {
  LinearConstraint eq;
  eq.terms = {{"Ol", 1}, {"Opx", -1}};
  eq.cmp = Cmp::eq;
  eq.rhs = 0;
  ConstraintSystem system{kOocAxes, {eq, ooc_bound("Ol", Cmp::ge, 40)}};
  auto witness = feasible(system);
  REQUIRE(witness.has_value());
  CHECK((*witness)[0] == (*witness)[1]);
  CHECK((*witness)[0] >= 40);
}

TEST_CASE("the shipped OOC diagram is pairwise disjoint") {
  VerificationReport report;
  check_disjoint(*shipped_rules().diagram("OOC"), report);
  CHECK(report.disjoint_ok);
  CHECK(report.violations.empty());
  CHECK(report.infeasible_fields.empty());
}

TEST_CASE("the shipped diagrams cover their triangles") {
  for (const auto& diagram : shipped_rules().diagrams) {
    VerificationReport report = verify_diagram(diagram);
    CAPTURE(diagram.name);
    CHECK(report.ok());
  }
}

TEST_CASE("loosening the dunite bound produces a re-checkable overlap witness") {
  Diagram mutated = mutated_dunite_bound(Rational(17, 20));  // 0.9 -> 0.85
  VerificationReport report;
  check_disjoint(mutated, report);
  CHECK_FALSE(report.disjoint_ok);
  REQUIRE(!report.violations.empty());
  bool found = false;
  for (const auto& v : report.violations) {
    if ((v.field_a == "dunite" && v.field_b == "harzburgite") ||
        (v.field_a == "harzburgite" && v.field_b == "dunite")) {
      found = true;
      const DiagramField* dunite = nullptr;
      const DiagramField* harzburgite = nullptr;
      for (const auto& f : mutated.fields) {
        if (f.name == "dunite") dunite = &f;
        if (f.name == "harzburgite") harzburgite = &f;
      }
      CHECK(point_in_field(*dunite, mutated.axes, v.witness));
      CHECK(point_in_field(*harzburgite, mutated.axes, v.witness));
      Rational total = v.witness[0] + v.witness[1] + v.witness[2];
      CHECK(v.witness[0] > total * Rational(17, 20));
      CHECK(v.witness[0] <= total * Rational(9, 10));
    }
  }
  CHECK(found);
}

TEST_CASE("a single-field diagram is vacuously disjoint") {
  Diagram d;
  d.name = "single";
  d.group = "OOC";
  d.axes = kOocAxes;
  DiagramField field;
  field.name = "everything";
  field.constraints.push_back(ooc_bound("Ol", Cmp::ge, 0));
  d.fields.push_back(field);
  VerificationReport report;
  check_disjoint(d, report);
  CHECK(report.disjoint_ok);
}

TEST_CASE("tightening the harzburgite bound opens a re-checkable gap") {
  Diagram mutated = mutated_harzburgite_upper(Rational(4, 5));  // 0.9 -> 0.8
  VerificationReport report;
  report.diagram = mutated.name;
  check_coverage(mutated, report);
  CHECK_FALSE(report.coverage_ok);
  REQUIRE(!report.gaps.empty());
  for (const auto& gap : report.gaps) {
    int members = 0;
    in_any_field(mutated, gap.witness, &members);
    CHECK(members == 0);
    CHECK(gap.witness[0] >= 0);
    CHECK(gap.witness[1] >= 0);
    CHECK(gap.witness[2] >= 0);
    CHECK(gap.witness[0] + gap.witness[1] + gap.witness[2] == 100);
  }
  // the gap sits strictly between the tightened bound and dunite
  Rational fraction = report.gaps[0].witness[0] / 100;
  CHECK(fraction > Rational(4, 5));
  CHECK(fraction <= Rational(9, 10));
}

TEST_CASE("a diagram with zero fields reports a gap witness") {
  Diagram d;
  d.name = "empty";
  d.group = "OOC";
  d.axes = kOocAxes;
  VerificationReport report;
  check_coverage(d, report);
  CHECK_FALSE(report.coverage_ok);
  REQUIRE(report.gaps.size() == 1);
  const auto& w = report.gaps[0].witness;
  CHECK(w[0] + w[1] + w[2] == 100);
  CHECK(w[0] >= 0);
}

TEST_CASE("checker verdicts agree with a step-1/200 grid") {
  // 0.5-percent grid over the simplex: membership counts must match the
  // checker's partition verdict point for point
  auto grid_check = [](const Diagram& diagram, bool expect_partition) {
    bool all_exactly_one = true;
    for (int i = 0; i <= 200 && all_exactly_one; ++i) {
      for (int j = 0; i + j <= 200; ++j) {
        std::array<Rational, 3> point{Rational(i, 2), Rational(j, 2),
                                      Rational(200 - i - j, 2)};
        int members = 0;
        in_any_field(diagram, point, &members);
        if (members != 1) {
          all_exactly_one = false;
          break;
        }
      }
    }
    CHECK(all_exactly_one == expect_partition);
  };
  grid_check(*shipped_rules().diagram("OOC"), true);
  grid_check(*shipped_rules().diagram("OPH"), true);
  grid_check(mutated_dunite_bound(Rational(17, 20)), false);   // grid finds an overlap
  grid_check(mutated_harzburgite_upper(Rational(4, 5)), false);  // grid finds a gap
}

TEST_CASE("verdicts are independent of field and constraint order") {
  Diagram base = *shipped_rules().diagram("OOC");
  Diagram shuffled = base;
  std::reverse(shuffled.fields.begin(), shuffled.fields.end());
  for (auto& field : shuffled.fields) {
    std::reverse(field.constraints.begin(), field.constraints.end());
  }
  VerificationReport a = verify_diagram(base);
  VerificationReport b = verify_diagram(shuffled);
  CHECK(a.disjoint_ok == b.disjoint_ok);
  CHECK(a.coverage_ok == b.coverage_ok);

  Diagram bad = mutated_dunite_bound(Rational(17, 20));
  Diagram bad_shuffled = bad;
  std::reverse(bad_shuffled.fields.begin(), bad_shuffled.fields.end());
  CHECK(verify_diagram(bad).disjoint_ok == verify_diagram(bad_shuffled).disjoint_ok);
}

TEST_CASE("the case-split ceiling trips as CaseExplosion") {
  VerifyOptions options;
  options.case_ceiling = 10;
  VerificationReport report;
  CHECK_THROWS_AS(check_coverage(*shipped_rules().diagram("OPH"), report, options),
                  CaseExplosionError);
  try {
    VerificationReport again;
    check_coverage(*shipped_rules().diagram("OPH"), again, options);
  } catch (const CaseExplosionError& e) {
    CHECK(e.explored > e.ceiling);
    CHECK(e.ceiling == 10);
  }
}

TEST_CASE("report JSON serializes witnesses exactly") {
  VerificationReport report = verify_diagram(mutated_dunite_bound(Rational(17, 20)));
  std::string json = report_to_json({report});
  CHECK(json.find("\"disjointness\": \"violated\"") != std::string::npos);
  CHECK(json.find("witness") != std::string::npos);
}
