#include <doctest.h>

#include "petro/cnl.hpp"
#include "test_support.hpp"

using namespace petro;
using namespace petro::cnl;

namespace {

// List 1, verbatim: 9 lines, 13 sentences (four lines carry two sentences).
const char* kList1 = R"(PUB5633 is a publication.
A title of PUB5633 is "A CONTRIBUTION TO THE GEOLOGY OF THE K...".
SAM32994 is a sample. SAM32994 is a rhyolite.
PUB5633 describes SAM32994.
PLC32994 is a place. PLC32994 is a part of Iceland.
A gathering_place of SAM32994 is PLC32994.
SUB469812 is a substance. SAM32994 includes SUB469812.
WPC469812 is a weight_percent. A value of WPC469812 is 73.95.
A component of WPC469812 is SUB469812.
)";

}  // namespace

TEST_CASE("each sentence template parses") {
  CHECK(parse_sentence("SAM32994 is a sample.") ==
        SentenceAst{Classification{"SAM32994", "sample"}});
  CHECK(parse_sentence("A value of WPC469812 is 73.95.") ==
        SentenceAst{NumberAttribute{"value", "WPC469812", Rational(7395, 100)}});
  CHECK(parse_sentence("PLC32994 is a part of Iceland.") ==
        SentenceAst{PartOf{"PLC32994", "Iceland"}});
  CHECK(parse_sentence("PUB5633 describes SAM32994.") ==
        SentenceAst{Relation{"PUB5633", "describes", "SAM32994"}});
  CHECK(parse_sentence("A title of PUB5633 is \"A CONTRIBUTION TO THE GEOLOGY OF THE "
                       "K...\".") ==
        SentenceAst{StringAttribute{"title", "PUB5633",
                                    "A CONTRIBUTION TO THE GEOLOGY OF THE K..."}});
  CHECK(parse_sentence("A gathering_place of SAM32994 is PLC32994.") ==
        SentenceAst{NameAttribute{"gathering_place", "SAM32994", "PLC32994"}});
}

TEST_CASE("subject position requires a proper name") {
  CHECK_THROWS_AS(parse_sentence("sample is a SAM32994."), SyntaxError);
}

TEST_CASE("malformed proper names raise NameError with a column") {
  try {
    parse_sentence("SAM_32 is a sample.");
    FAIL("expected NameError");
  } catch (const NameError& e) {
    CHECK(e.col == 1);
  }
}

TEST_CASE("syntax errors carry the attempted template set") {
  try {
    parse_sentence("SAM1 is.");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(!e.attempted.empty());
  }
}

TEST_CASE("numbers keep their exact decimal value") {
  auto ast = parse_sentence("A value of WPC1 is -0.05.");
  const auto& attr = std::get<NumberAttribute>(ast);
  CHECK(attr.value == Rational(-1, 20));
}

TEST_CASE("string escapes") {
  auto ast = parse_sentence(R"(A title of PUB1 is "say \"hi\" \\ there".)");
  CHECK(std::get<StringAttribute>(ast).value == R"(say "hi" \ there)");
}

TEST_CASE("unknown verbs parse as relations with a warning") {
  std::vector<std::string> warnings;
  auto ast = parse_sentence("SAM1 frobs SAM2.", Lexicon(), &warnings);
  CHECK(std::get<Relation>(ast).verb == "frobs");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("frobs") != std::string::npos);
}

TEST_CASE("a declared verb cannot fill an attribute slot") {
  CHECK_THROWS_AS(parse_sentence("A describes of SAM1 is SAM2."), SyntaxError);
}

TEST_CASE("the grammar accepts every List 1 sentence verbatim") {
  auto doc = parse_document(kList1);
  CHECK(doc.errors.empty());
  CHECK(doc.warnings.empty());
  // 13 sentences on 9 lines; four lines carry two sentences each
  CHECK(doc.graph.size() == 13);
}

TEST_CASE("parse_document yields facts in document order") {
  auto doc = parse_document("SAM1 is a sample. SAM2 is a basalt.\nSAM1 includes SUB1.");
  REQUIRE(doc.graph.size() == 3);
  CHECK(doc.graph.facts()[0].subject == "SAM1");
  CHECK(doc.graph.facts()[1].subject == "SAM2");
  CHECK(doc.graph.facts()[2].predicate == "includes");
}

TEST_CASE("empty text gives an empty graph") {
  auto doc = parse_document("");
  CHECK(doc.graph.empty());
  CHECK(doc.errors.empty());
  CHECK(parse_document("   \n\n  ").graph.empty());
}

TEST_CASE("comment lines are ignored") {
  auto doc = parse_document("# proba export, publication 5633\nSAM1 is a sample.\n");
  CHECK(doc.errors.empty());
  CHECK(doc.graph.size() == 1);
}

TEST_CASE("parsing continues past errors and reports all with positions") {
  const char* text =
      "SAM1 is a sample.\n"
      "SAM2 is a basalt.\n"
      "sample is a SAM3.\n"
      "SAM4 is a dacite.\n"
      "SAM5 is a rhyolite.\n";
  auto doc = parse_document(text);
  CHECK(doc.graph.size() == 4);
  REQUIRE(doc.errors.size() == 1);
  CHECK(doc.errors[0].line == 3);
}

TEST_CASE("a missing terminal period is reported") {
  auto doc = parse_document("SAM1 is a sample");
  CHECK(doc.graph.empty());
  REQUIRE(doc.errors.size() == 1);
  CHECK(doc.errors[0].text.find("'.'") != std::string::npos);
}

TEST_CASE("generate emits the canonical template sentences") {
  CHECK(generate({"PUB5633", std::string(kIsA), Term{"publication"}}) ==
        "PUB5633 is a publication.");
  CHECK(generate({"WPC469812", "value", Rational(7395, 100)}) ==
        "A value of WPC469812 is 73.95.");
  CHECK(generate({"SAM32994", "includes", Name{"SUB469812"}}) ==
        "SAM32994 includes SUB469812.");
  CHECK(generate({"PLC32994", std::string(kPartOf), Name{"Iceland"}}) ==
        "PLC32994 is a part of Iceland.");
  CHECK(generate({"SAM32994", "gathering_place", Name{"PLC32994"}}) ==
        "A gathering_place of SAM32994 is PLC32994.");
}

TEST_CASE("generate rejects unserializable literals") {
  CHECK_THROWS_AS(generate({"SAM1", "title", std::string("line\nbreak")}),
                  UnserializableFactError);
  CHECK_THROWS_AS(generate({"SAM1", "value", Rational(1, 3)}), UnserializableFactError);
  CHECK_THROWS_AS(generate({"not_a_name", std::string(kIsA), Term{"sample"}}),
                  UnserializableFactError);
}

TEST_CASE("round trip: parse(generate(fact)) == fact") {
  Lexicon lexicon;
  test::Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    cnl::Fact fact = test::random_fact(rng, lexicon);
    std::string sentence = generate(fact, lexicon);
    CAPTURE(sentence);
    cnl::Fact back = ast_to_fact(parse_sentence(sentence, lexicon));
    CHECK(back == fact);
  }
}

TEST_CASE("normalizing round trip: generate(parse(sentence)) == sentence") {
  Lexicon lexicon;
  test::Rng rng(4242);
  for (int i = 0; i < 200; ++i) {
    std::string sentence = generate(test::random_fact(rng, lexicon), lexicon);
    std::string again = generate(ast_to_fact(parse_sentence(sentence, lexicon)), lexicon);
    CHECK(test::normalize_ws(again) == test::normalize_ws(sentence));
  }
}

TEST_CASE("fact graph index stays consistent") {
  FactGraph graph;
  graph.add({"SAM1", std::string(kIsA), Term{"sample"}});
  graph.add({"PUB1", "describes", Name{"SAM1"}});
  graph.add({"SAM1", "includes", Name{"SUB1"}});
  CHECK(graph.mentioning("SAM1").size() == 3);
  CHECK(graph.mentioning("SUB1").size() == 1);
  CHECK(graph.mentioning("PUB1").size() == 1);
  CHECK(graph.mentioning("SAM99").empty());
}

TEST_CASE("triple export quotes literals") {
  FactGraph graph;
  graph.add({"SAM1", std::string(kIsA), Term{"sample"}});
  graph.add({"PUB1", "title", std::string("a \"b\"")});
  graph.add({"WPC1", "value", Rational(1, 2)});
  CHECK(graph.to_triples() ==
        "SAM1 is_a sample\n"
        "PUB1 title \"a \\\"b\\\"\"\n"
        "WPC1 value 0.5\n");
}

TEST_CASE("facts JSON round trips") {
  auto doc = parse_document(kList1);
  FactGraph back = facts_from_json(facts_to_json(doc.graph));
  REQUIRE(back.size() == doc.graph.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back.facts()[i] == doc.graph.facts()[i]);
  }
}
