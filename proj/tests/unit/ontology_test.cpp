#include <doctest.h>

#include <fstream>
#include <sstream>

#include "petro/ontology.hpp"
#include "test_support.hpp"

using namespace petro;
using namespace petro::onto;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

PrefixTable fixture_prefixes() {
  return load_prefixes_json(slurp(test::data_path("fixtures/glossary/prefixes.json")));
}

GlossaryEntry entry(std::vector<std::string> terms) {
  GlossaryEntry e;
  for (auto& t : terms) e.terms.push_back({std::move(t), ""});
  return e;
}

}  // namespace

TEST_CASE("overlapping titles merge into one equivalence clique") {
  auto doc = build_glossary({entry({"a", "b"}), entry({"b", "c"})}, fixture_prefixes());
  CHECK(doc.classes.size() == 3);
  REQUIRE(doc.cliques.size() == 1);
  CHECK(doc.cliques[0] == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("a singleton entry produces a class and no axiom") {
  auto doc = build_glossary({entry({"abessedite"})}, fixture_prefixes());
  CHECK(doc.classes.size() == 1);
  CHECK(doc.cliques.empty());
}

TEST_CASE("the fixture glossary matches the brute-force components oracle") {
  auto entries =
      load_glossary_jsonl(slurp(test::data_path("fixtures/glossary/igneous-terms.jsonl")));
  REQUIRE(entries.size() == 10);
  auto doc = build_glossary(entries, fixture_prefixes());
  CHECK(doc.classes.size() == 17);

  std::vector<std::vector<std::string>> raw;
  for (const auto& e : entries) {
    std::vector<std::string> terms;
    for (const auto& t : e.terms) terms.push_back(t.term);
    raw.push_back(std::move(terms));
  }
  CHECK(doc.cliques == test::brute_force_cliques(raw));
  CHECK(doc.cliques.size() == 7);
}

TEST_CASE("randomized glossaries match the oracle") {
  test::Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> entry_count(1, 40);
    std::uniform_int_distribution<int> term_count(1, 4);
    std::uniform_int_distribution<int> term_pick(0, 60);
    std::vector<GlossaryEntry> entries;
    std::vector<std::vector<std::string>> raw;
    int n = entry_count(rng);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> terms;
      int k = term_count(rng);
      for (int t = 0; t < k; ++t) terms.push_back("t" + std::to_string(term_pick(rng)));
      raw.push_back(terms);
      entries.push_back(entry(std::move(terms)));
    }
    auto doc = build_glossary(entries, fixture_prefixes());
    CHECK(doc.cliques == test::brute_force_cliques(raw));
  }
}

TEST_CASE("glossary terms normalize compound words") {
  auto entries = load_glossary_jsonl(R"({"terms": ["Olivine  Rock", "olivinite"]})");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].terms[0].term == "olivine_rock");
}

TEST_CASE("glossary format errors carry the line number") {
  try {
    load_glossary_jsonl("{\"terms\": [\"a\"]}\nnot json\n");
    FAIL("expected GlossaryFormatError");
  } catch (const GlossaryFormatError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(load_glossary_jsonl(R"({"terms": []})"), GlossaryFormatError);
}

TEST_CASE("the abessedite definition renders like the paper's formula") {
  auto expr = parse_class_expr(
      "peridotite and minerals_mixture and contains_mineral only "
      "(olivin or hornblende or phlogopite)");
  CHECK(render_manchester(*expr) ==
        "peridotite and minerals_mixture and contains_mineral only "
        "(olivin or hornblende or phlogopite)");
  auto doc = build_glossary(
      load_glossary_jsonl(slurp(test::data_path("fixtures/glossary/igneous-terms.jsonl"))),
      fixture_prefixes());
  std::string functional = export_functional(doc);
  CHECK(functional.find(
            "EquivalentClasses(dic:abessedite ObjectIntersectionOf(dic:peridotite "
            "dic:minerals_mixture ObjectAllValuesFrom(dic:contains_mineral "
            "ObjectUnionOf(dic:olivin dic:hornblende dic:phlogopite))))") !=
        std::string::npos);
}

TEST_CASE("class expression parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_class_expr("a and"), ClassExprParseError);
  CHECK_THROWS_AS(parse_class_expr("(a or b"), ClassExprParseError);
  CHECK_THROWS_AS(parse_class_expr(""), ClassExprParseError);
}

TEST_CASE("a minimal clique exports both declarations and the axiom") {
  auto doc = build_glossary({entry({"a", "b"})}, fixture_prefixes());
  std::string functional = export_functional(doc);
  CHECK(functional.find("Declaration(Class(dic:a))") != std::string::npos);
  CHECK(functional.find("Declaration(Class(dic:b))") != std::string::npos);
  CHECK(functional.find("EquivalentClasses(dic:a dic:b)") != std::string::npos);
}

TEST_CASE("export is deterministic") {
  auto entries =
      load_glossary_jsonl(slurp(test::data_path("fixtures/glossary/igneous-terms.jsonl")));
  auto doc = build_glossary(entries, fixture_prefixes());
  CHECK(export_functional(doc) == export_functional(doc));
}

TEST_CASE("re-import reconstructs the class set and cliques") {
  auto entries =
      load_glossary_jsonl(slurp(test::data_path("fixtures/glossary/igneous-terms.jsonl")));
  auto doc = build_glossary(entries, fixture_prefixes());
  ImportedOntology imported = read_functional(export_functional(doc));
  CHECK(imported.classes == doc.classes);
  CHECK(imported.cliques == doc.cliques);
}

TEST_CASE("annotations survive the export/import round trip") {
  auto entries = load_glossary_jsonl(
      R"({"terms": ["harzburgite"], "definition": "An ultramafic rock with \"quotes\".", "origin": "Harzburg"})");
  auto doc = build_glossary(entries, fixture_prefixes());
  ImportedOntology imported = read_functional(export_functional(doc));
  REQUIRE(imported.annotations.count("harzburgite"));
  const auto& notes = imported.annotations.at("harzburgite");
  bool definition_found = false;
  for (const auto& [prop, value] : notes) {
    if (prop == "definition") {
      definition_found = true;
      CHECK(value == "An ultramafic rock with \"quotes\".");
    }
  }
  CHECK(definition_found);
}

TEST_CASE("compiled predicates export with a faithful linear annotation") {
  auto rules = classify::load_rules_file(test::data_path("rules/ultramafic.json"));
  auto doc = build_rules_ontology(rules, fixture_prefixes());
  std::string functional = export_functional(doc);
  CHECK(functional.find("SubClassOf(dic:harzburgite ObjectIntersectionOf(dic:plutonic "
                        "ObjectComplementOf(ObjectUnionOf(dic:pyroclastic dic:kimberlite "
                        "dic:lamproite dic:lamprophyre dic:charnockite))))") !=
        std::string::npos);

  ImportedOntology imported = read_functional(functional);
  for (const auto& [rock_type, predicate] : doc.linear_definitions) {
    REQUIRE(imported.annotations.count(rock_type));
    std::string annotation;
    for (const auto& [prop, value] : imported.annotations.at(rock_type)) {
      if (prop == kLinearDefinitionProp) annotation = value;
    }
    REQUIRE(!annotation.empty());
    classify::CompiledPredicate reparsed = classify::parse_predicate_text(annotation);
    classify::CompiledPredicate expected = predicate;
    reparsed.canonicalize();
    expected.canonicalize();
    CAPTURE(rock_type);
    CHECK(reparsed == expected);
  }
}

TEST_CASE("undeclared prefixes are an export error") {
  auto doc = build_glossary({entry({"a"})}, PrefixTable{{"dic", "//x#"}});
  doc.default_prefix = "nope";
  CHECK_THROWS_AS(export_functional(doc), UnresolvablePrefixError);

  auto doc2 = build_glossary({entry({"gwr:term"})}, PrefixTable{{"dic", "//x#"}});
  CHECK_THROWS_AS(export_functional(doc2), UnresolvablePrefixError);
}

TEST_CASE("the manchester companion renders definitions readably") {
  auto entries =
      load_glossary_jsonl(slurp(test::data_path("fixtures/glossary/igneous-terms.jsonl")));
  auto doc = build_glossary(entries, fixture_prefixes());
  std::string manchester = export_manchester(doc);
  CHECK(manchester.find("Class: dic:abessedite") != std::string::npos);
  CHECK(manchester.find("EquivalentTo: peridotite and minerals_mixture and "
                        "contains_mineral only (olivin or hornblende or phlogopite)") !=
        std::string::npos);
}
