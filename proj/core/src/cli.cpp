#include "petro/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "petro/classify.hpp"
#include "petro/cnl.hpp"
#include "petro/ingest.hpp"
#include "petro/model.hpp"
#include "petro/ontology.hpp"
#include "petro/verify.hpp"

#ifndef PETROFACTS_VERSION
#define PETROFACTS_VERSION "0.0.0"
#endif

namespace petro::cli {

namespace fs = std::filesystem;

namespace {

struct Failure {
  Diagnostic diagnostic;
};

[[noreturn]] void fail(std::string text, std::string file = "") {
  throw Failure{{Severity::error, std::move(file), 0, 0, std::move(text)}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("file not found", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write file", path);
  out << content;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

struct IngestOptions {
  std::string tables_dir;
  std::string mapping_path;
  std::string out_dir;
};

void cmd_ingest(const IngestOptions& opt, std::ostream& out, CommandOutcome& outcome) {
  ingest::MappingConfig config = ingest::load_mapping(read_file(opt.mapping_path));
  if (!fs::is_directory(opt.tables_dir)) fail("not a directory", opt.tables_dir);
  ingest::TabularSource source = ingest::load_table_dir(opt.tables_dir);
  auto documents = ingest::map_rows(source, config);
  fs::create_directories(opt.out_dir);
  for (const auto& [name, text] : documents) {
    write_file((fs::path(opt.out_dir) / (name + ".cnl")).string(), text);
  }
  out << "wrote " << documents.size() << " CNL document(s) to " << opt.out_dir << "\n";
  (void)outcome;
}

// ---------------------------------------------------------------------------
// parse
// ---------------------------------------------------------------------------

struct ParseOptions {
  std::vector<std::string> files;
  bool json = false;
  std::string out_path;
};

void cmd_parse(const ParseOptions& opt, std::ostream& out, CommandOutcome& outcome) {
  cnl::FactGraph all;
  for (const auto& path : opt.files) {
    std::string text = read_file(path);
    cnl::ParsedDocument doc = cnl::parse_document(text);
    for (auto diagnostic : doc.errors) {
      diagnostic.file = path;
      outcome.diagnostics.push_back(std::move(diagnostic));
    }
    for (auto diagnostic : doc.warnings) {
      diagnostic.file = path;
      outcome.diagnostics.push_back(std::move(diagnostic));
    }
    for (const auto& fact : doc.graph.facts()) all.add(fact);
  }
  std::string rendered = opt.json ? cnl::facts_to_json(all) : all.to_triples();
  if (!opt.out_path.empty()) {
    write_file(opt.out_path, rendered);
  } else {
    out << rendered;
  }
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

struct ClassifyOptions {
  std::string rules_path;
  std::string samples_path;
  bool json = false;
  bool unverified = false;
  bool strict = false;
  bool trace = false;
};

nlohmann::json result_json(const Sample& sample,
                           const classify::ClassificationResult& result) {
  nlohmann::json j;
  j["id"] = sample.id;
  j["outcome"] = std::string(classify::outcome_name(result.outcome));
  switch (result.outcome) {
    case classify::ClassificationResult::Outcome::classified:
      j["rock_type"] = result.rock_type;
      break;
    case classify::ClassificationResult::Outcome::out_of_scope:
      j["branch"] = result.branch;
      break;
    case classify::ClassificationResult::Outcome::indeterminate:
      j["reason"] = result.reason;
      break;
  }
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& entry : result.trace) {
    trace.push_back(
        {{"kind", entry.kind == classify::TraceEntry::Kind::guard ? "guard" : "field"},
         {"label", entry.label},
         {"value", entry.value}});
  }
  j["trace"] = trace;
  return j;
}

void cmd_classify(const ClassifyOptions& opt, std::ostream& out, CommandOutcome& outcome) {
  classify::RuleSet rules = classify::load_rules_file(opt.rules_path);
  if (!opt.unverified) {
    for (const auto& diagram : rules.diagrams) {
      if (!classify::stamp_valid(diagram)) {
        fail("diagram '" + diagram.name +
                 "' has no valid verification stamp; run `petro verify --stamp` or pass "
                 "--unverified",
             opt.rules_path);
      }
    }
  }
  std::vector<Sample> samples = load_samples_json(read_file(opt.samples_path), opt.strict);

  nlohmann::json results = nlohmann::json::array();
  std::ostringstream table;
  table << std::left << std::setw(16) << "SAMPLE" << std::setw(16) << "OUTCOME"
        << "DETAIL\n";
  for (const auto& sample : samples) {
    auto violations = validate_sample(sample, rules.registry);
    if (!violations.empty()) {
      for (const auto& v : violations) {
        outcome.diagnostics.push_back({Severity::error, opt.samples_path, 0, 0,
                                       "sample '" + sample.id + "': " + v.field + ": " +
                                           v.message});
      }
      continue;
    }
    classify::ClassificationResult result = classify::run_classifier(sample, rules);
    if (opt.json) {
      results.push_back(result_json(sample, result));
    } else {
      std::string detail;
      switch (result.outcome) {
        case classify::ClassificationResult::Outcome::classified:
          detail = result.rock_type;
          break;
        case classify::ClassificationResult::Outcome::out_of_scope:
          detail = result.branch;
          break;
        case classify::ClassificationResult::Outcome::indeterminate:
          detail = result.reason;
          break;
      }
      table << std::left << std::setw(16) << sample.id << std::setw(16)
            << classify::outcome_name(result.outcome) << detail << "\n";
      if (opt.trace) {
        for (const auto& entry : result.trace) {
          table << "    " << (entry.value ? "+ " : "- ") << entry.label << "\n";
        }
      }
    }
  }
  if (opt.json) {
    out << results.dump(2) << "\n";
  } else {
    out << table.str();
  }
}

// ---------------------------------------------------------------------------
// compile
// ---------------------------------------------------------------------------

struct CompileOptions {
  std::string rules_path;
  std::string rock_type;
  bool json = false;
};

void cmd_compile(const CompileOptions& opt, std::ostream& out, CommandOutcome& outcome) {
  classify::RuleSet rules = classify::load_rules_file(opt.rules_path);
  classify::CompiledPredicate predicate = classify::compile_predicate(rules, opt.rock_type);
  if (opt.json) {
    out << classify::predicate_to_json(predicate) << "\n";
  } else {
    out << classify::render_predicate_text(predicate);
  }
  (void)outcome;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyCmdOptions {
  std::string rules_path;
  std::string report_path;
  bool stamp = false;
  std::uint64_t case_ceiling = 1'000'000;
};

void cmd_verify(const VerifyCmdOptions& opt, std::ostream& out, CommandOutcome& outcome) {
  std::string text = read_file(opt.rules_path);
  classify::RuleSet rules = classify::load_rules(text);
  if (rules.diagrams.empty()) fail("rule file declares no diagrams", opt.rules_path);

  verify::VerifyOptions options;
  options.case_ceiling = opt.case_ceiling;
  std::vector<verify::VerificationReport> reports;
  bool all_ok = true;
  for (const auto& diagram : rules.diagrams) {
    verify::VerificationReport report = verify::verify_diagram(diagram, options);
    out << "diagram " << report.diagram << ": disjointness: "
        << (report.disjoint_ok ? "ok" : "violated")
        << " / coverage: " << (report.coverage_ok ? "ok" : "gaps") << "\n";
    for (const auto& name : report.infeasible_fields) {
      out << "  infeasible field: " << name << "\n";
    }
    for (const auto& v : report.violations) {
      out << "  overlap " << v.field_a << " & " << v.field_b << " at ("
          << to_ratio_string(v.witness[0]) << ", " << to_ratio_string(v.witness[1]) << ", "
          << to_ratio_string(v.witness[2]) << ")\n";
    }
    for (const auto& g : report.gaps) {
      out << "  uncovered point (" << to_ratio_string(g.witness[0]) << ", "
          << to_ratio_string(g.witness[1]) << ", " << to_ratio_string(g.witness[2])
          << ")\n";
    }
    out << "  stamp " << report.stamp << ", cases explored " << report.cases_explored
        << "\n";
    all_ok = all_ok && report.ok();
    reports.push_back(std::move(report));
  }
  if (!opt.report_path.empty()) {
    write_file(opt.report_path, verify::report_to_json(reports));
  }
  if (opt.stamp) {
    if (!all_ok) fail("refusing to stamp: verification failed", opt.rules_path);
    write_file(opt.rules_path, classify::stamp_rules_text(text));
    out << "stamped " << opt.rules_path << "\n";
  }
  if (!all_ok) {
    outcome.diagnostics.push_back({Severity::error, opt.rules_path, 0, 0,
                                   "partition properties do not hold"});
  }
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

struct ExportOptions {
  std::string glossary_path;
  std::string rules_path;
  std::string prefixes_path;
  std::string out_path;
  std::string manchester_path;
  std::string default_prefix = "dic";
};

void cmd_export(const ExportOptions& opt, std::ostream& out, CommandOutcome& outcome) {
  onto::PrefixTable prefixes;
  if (!opt.prefixes_path.empty()) {
    prefixes = onto::load_prefixes_json(read_file(opt.prefixes_path));
  } else {
    prefixes[opt.default_prefix] = "//earth.jscc.ru/ontologies/dic.owl#";
  }

  onto::OntologyDoc doc;
  if (!opt.glossary_path.empty()) {
    auto entries = onto::load_glossary_jsonl(read_file(opt.glossary_path));
    doc = onto::build_glossary(entries, prefixes, opt.default_prefix);
    out << "glossary: " << doc.classes.size() << " classes, " << doc.cliques.size()
        << " equivalence clique(s)\n";
  } else {
    classify::RuleSet rules = classify::load_rules_file(opt.rules_path);
    doc = onto::build_rules_ontology(rules, prefixes, opt.default_prefix);
    out << "rule set: " << doc.linear_definitions.size() << " rock type definition(s)\n";
  }
  std::string functional = onto::export_functional(doc);
  if (!opt.out_path.empty()) {
    write_file(opt.out_path, functional);
  } else {
    out << functional;
  }
  if (!opt.manchester_path.empty()) {
    write_file(opt.manchester_path, onto::export_manchester(doc));
  }
  (void)outcome;
}

}  // namespace

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

CommandOutcome run(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CommandOutcome outcome;

  CLI::App app{"petrological sample facts, classification and ontology export"};
  app.set_version_flag("--version", std::string("petro ") + PETROFACTS_VERSION);
  app.require_subcommand(1);

  IngestOptions ingest_opt;
  auto* ingest_cmd =
      app.add_subcommand("ingest", "convert tabular CSV data to CNL documents");
  ingest_cmd->add_option("--tables", ingest_opt.tables_dir, "directory of *.csv tables")
      ->required();
  ingest_cmd->add_option("--mapping", ingest_opt.mapping_path, "mapping config JSON")
      ->required();
  ingest_cmd->add_option("--out", ingest_opt.out_dir, "output directory")->required();

  ParseOptions parse_opt;
  auto* parse_cmd = app.add_subcommand("parse", "parse CNL documents into triples");
  parse_cmd->add_option("files", parse_opt.files, "CNL files")->required();
  parse_cmd->add_flag("--json", parse_opt.json, "emit facts as JSON");
  parse_cmd->add_option("--out", parse_opt.out_path, "write output to a file");

  ClassifyOptions classify_opt;
  auto* classify_cmd = app.add_subcommand("classify", "classify samples with a rule file");
  classify_cmd->add_option("--rules", classify_opt.rules_path, "rule file JSON")
      ->required();
  classify_cmd->add_option("--samples", classify_opt.samples_path, "samples JSON")
      ->required();
  classify_cmd->add_flag("--json", classify_opt.json, "emit results as JSON");
  classify_cmd->add_flag("--unverified", classify_opt.unverified,
                         "accept rule files without a valid verification stamp");
  classify_cmd->add_flag("--strict", classify_opt.strict,
                         "treat absent species as unknown; reject binary floats");
  classify_cmd->add_flag("--trace", classify_opt.trace, "print guard traces");

  CompileOptions compile_opt;
  auto* compile_cmd =
      app.add_subcommand("compile", "compile a rock type's closed-form predicate");
  compile_cmd->add_option("--rules", compile_opt.rules_path, "rule file JSON")->required();
  compile_cmd->add_option("rock_type", compile_opt.rock_type, "rock type name")
      ->required();
  compile_cmd->add_flag("--json", compile_opt.json, "emit the predicate as JSON");

  VerifyCmdOptions verify_opt;
  auto* verify_cmd =
      app.add_subcommand("verify", "check diagram disjointness and coverage");
  verify_cmd->add_option("--rules", verify_opt.rules_path, "rule file JSON")->required();
  verify_cmd->add_option("--report", verify_opt.report_path, "write a JSON report");
  verify_cmd->add_flag("--stamp", verify_opt.stamp,
                       "embed verification stamps into the rule file");
  verify_cmd->add_option("--case-ceiling", verify_opt.case_ceiling,
                         "coverage case-split ceiling");

  ExportOptions export_opt;
  auto* export_cmd =
      app.add_subcommand("export", "export a glossary or rule file as an OWL ontology");
  auto* glossary_opt_ptr =
      export_cmd->add_option("--glossary", export_opt.glossary_path, "glossary JSON lines");
  export_cmd->add_option("--rules", export_opt.rules_path, "rule file JSON")
      ->excludes(glossary_opt_ptr);
  export_cmd->add_option("--prefixes", export_opt.prefixes_path, "prefix table JSON");
  export_cmd->add_option("--out", export_opt.out_path, "output .ofn path");
  export_cmd->add_option("--manchester", export_opt.manchester_path,
                         "also write a Manchester-style companion file");
  export_cmd->add_option("--prefix", export_opt.default_prefix,
                         "default namespace prefix for plain terms");

  std::vector<std::string> argv = args;
  try {
    std::vector<const char*> cargv;
    cargv.push_back("petro");
    for (const auto& a : argv) cargv.push_back(a.c_str());
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    outcome.exit_code = code == 0 ? 0 : 2;
    return outcome;
  }

  try {
    if (*ingest_cmd) {
      cmd_ingest(ingest_opt, out, outcome);
    } else if (*parse_cmd) {
      cmd_parse(parse_opt, out, outcome);
    } else if (*classify_cmd) {
      cmd_classify(classify_opt, out, outcome);
    } else if (*compile_cmd) {
      cmd_compile(compile_opt, out, outcome);
    } else if (*verify_cmd) {
      cmd_verify(verify_opt, out, outcome);
    } else if (*export_cmd) {
      if (export_opt.glossary_path.empty() && export_opt.rules_path.empty()) {
        fail("export needs --glossary or --rules");
      }
      cmd_export(export_opt, out, outcome);
    }
  } catch (const Failure& f) {
    outcome.diagnostics.push_back(f.diagnostic);
  } catch (const std::exception& e) {
    outcome.diagnostics.push_back({Severity::error, "", 0, 0, e.what()});
  }

  for (const auto& diagnostic : outcome.diagnostics) {
    err << diagnostic.to_string() << "\n";
  }
  bool any_error = std::any_of(
      outcome.diagnostics.begin(), outcome.diagnostics.end(),
      [](const Diagnostic& d) { return d.severity == Severity::error; });
  if (outcome.exit_code == 0 && any_error) outcome.exit_code = 1;
  return outcome;
}

}  // namespace petro::cli
