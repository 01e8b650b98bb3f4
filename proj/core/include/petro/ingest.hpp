#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace petro::ingest {

// ---------------------------------------------------------------------------
// Tabular source (CSV)
// ---------------------------------------------------------------------------

struct CsvError : std::runtime_error {
  CsvError(std::string message, int line);
  int line;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // each row has header arity

  std::optional<std::size_t> column(std::string_view name) const;
};

// RFC 4180: comma separator, '"' quoting with "" escape, CRLF tolerated.
// First record is the header; every row is checked against its arity.
Table read_csv(std::string_view text);

struct TabularSource {
  std::map<std::string, Table> tables;  // table name -> table
};

// Loads every *.csv in a directory; the table name is the file stem.
TabularSource load_table_dir(const std::string& dir);

// ---------------------------------------------------------------------------
// Mapping configuration
// ---------------------------------------------------------------------------

struct ConfigError : std::runtime_error {
  ConfigError(std::string message, std::string path);
  std::string path;  // JSON-pointer-style location of the offending entry
};

struct MappingError : std::runtime_error {
  MappingError(std::string message, std::string table, std::size_t row, std::string rule);
  std::string table;
  std::size_t row;  // 1-based data row number
  std::string rule;
};

// Un-normalized multi-value cells fail loudly; splitting them heuristically
// is upstream work, not ingest's job.
struct UnnormalizedDataError : MappingError {
  using MappingError::MappingError;
};

struct UndeclaredPrefixError : std::runtime_error {
  explicit UndeclaredPrefixError(std::string_view prefix);
};

struct EntityDecl {
  std::string id;      // local handle used by emit rules
  std::string prefix;  // minting prefix, unique across the whole config
  std::string class_term;
};

struct RefSpec {
  std::string column;      // foreign key column in this table
  std::string references;  // referenced table name
};

struct EmitRule {
  enum class Kind : std::uint8_t {
    entity_class,      // "<entity> is a <class>."
    classification,    // "<entity> is a <cell-as-term>."
    string_attribute,  // "A <term> of <entity> is \"<cell>\"."
    number_attribute,  // "A <term> of <entity> is <cell-as-number>."
    name_attribute,    // "A <term> of <entity> is <other-entity>."  (no cell)
    relation,          // "<referenced-row-name> <verb> <entity>."
    part_of_chain,     // aux entity + part-of parent + name attribute
  };
  Kind kind;
  std::string entity;          // entity handle the rule is about
  std::string column;          // source column, when the rule consumes one
  std::string term;            // attribute term
  std::string verb;            // relation verb
  RefSpec ref;                 // relation subject reference
  std::string object_entity;   // name_attribute object handle
  std::string aux_prefix;      // part_of_chain place prefix
  std::string aux_class;       // part_of_chain place class
};

struct TableMapping {
  std::string name;
  std::string id_column;
  std::optional<RefSpec> owner;  // absent exactly for the split root table
  std::vector<EntityDecl> entities;
  std::vector<EmitRule> emit;
};

struct MappingConfig {
  std::vector<TableMapping> tables;
  std::string root_table;  // owns documents (the publication table)
  std::set<std::string> global_names;  // declared well-known proper names
  std::uint64_t synthetic_id_base = 1'000'000;

  const TableMapping* table(std::string_view name) const;
  // prefix -> declaring table (uniqueness enforced at load)
  std::map<std::string, std::string> declared_prefixes() const;
};

MappingConfig load_mapping(const std::string& text);
MappingConfig load_mapping_file(const std::string& path);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// prefix + decimal digits, no padding; deterministic and injective per
// prefix. The prefix must be declared in the config.
std::string mint_name(const MappingConfig& config, std::string_view prefix,
                      std::uint64_t id);

// One CNL document per root-table row (publication), keyed by its proper
// name. Sentence order: publication facts, then per-sample blocks with their
// dependent rows, in source row order. Deterministic: identical source and
// config yield byte-identical documents.
std::map<std::string, std::string> map_rows(const TabularSource& source,
                                            const MappingConfig& config);

}  // namespace petro::ingest
