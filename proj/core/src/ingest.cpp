#include "petro/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "petro/cnl.hpp"
#include "petro/model.hpp"

namespace petro::ingest {

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

CsvError::CsvError(std::string message, int line_)
    : std::runtime_error("csv line " + std::to_string(line_) + ": " + message),
      line(line_) {}

Table read_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  int line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
        if (c == '\n') ++line;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_started) {
          in_quotes = true;
          field_started = true;
        } else {
          throw CsvError("quote inside unquoted field", line);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
        break;
    }
  }
  if (in_quotes) throw CsvError("unterminated quoted field", line);
  if (field_started || !record.empty()) end_record();

  if (records.empty()) throw CsvError("missing header row", 1);
  Table table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw CsvError("row has " + std::to_string(records[r].size()) +
                         " fields, header has " + std::to_string(table.header.size()),
                     static_cast<int>(r + 1));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

TabularSource load_table_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  TabularSource source;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    source.tables[path.stem().string()] = read_csv(buffer.str());
  }
  return source;
}

// ---------------------------------------------------------------------------
// Mapping configuration
// ---------------------------------------------------------------------------

ConfigError::ConfigError(std::string message, std::string path_)
    : std::runtime_error(message + " (at " + path_ + ")"), path(std::move(path_)) {}

MappingError::MappingError(std::string message, std::string table_, std::size_t row_,
                           std::string rule_)
    : std::runtime_error("table '" + table_ + "' row " + std::to_string(row_) + " (" +
                         rule_ + "): " + message),
      table(std::move(table_)),
      row(row_),
      rule(std::move(rule_)) {}

UndeclaredPrefixError::UndeclaredPrefixError(std::string_view prefix)
    : std::runtime_error("undeclared prefix '" + std::string(prefix) + "'") {}

const TableMapping* MappingConfig::table(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::map<std::string, std::string> MappingConfig::declared_prefixes() const {
  std::map<std::string, std::string> prefixes;
  for (const auto& t : tables) {
    for (const auto& e : t.entities) prefixes.emplace(e.prefix, t.name);
    for (const auto& rule : t.emit) {
      if (rule.kind == EmitRule::Kind::part_of_chain) {
        prefixes.emplace(rule.aux_prefix, t.name);
      }
    }
  }
  return prefixes;
}

namespace {

using nlohmann::json;

bool is_prefix_token(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

EmitRule::Kind rule_kind(const std::string& name, const std::string& path) {
  if (name == "entity_class") return EmitRule::Kind::entity_class;
  if (name == "classification") return EmitRule::Kind::classification;
  if (name == "string_attribute") return EmitRule::Kind::string_attribute;
  if (name == "number_attribute") return EmitRule::Kind::number_attribute;
  if (name == "name_attribute") return EmitRule::Kind::name_attribute;
  if (name == "relation") return EmitRule::Kind::relation;
  if (name == "part_of_chain") return EmitRule::Kind::part_of_chain;
  throw ConfigError("unknown emission rule '" + name + "'", path);
}

void require_entity(const TableMapping& table, const std::string& handle,
                    const std::string& path) {
  for (const auto& e : table.entities) {
    if (e.id == handle) return;
  }
  throw ConfigError("undeclared entity handle '" + handle + "'", path);
}

}  // namespace

MappingConfig load_mapping(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), "/");
  }
  if (!j.is_object()) throw ConfigError("mapping config must be a JSON object", "/");

  MappingConfig config;
  if (auto names = j.find("global_names"); names != j.end()) {
    for (const auto& n : *names) config.global_names.insert(n.get<std::string>());
  }
  config.synthetic_id_base = j.value("synthetic_id_base", std::uint64_t{1'000'000});

  auto tables = j.find("tables");
  if (tables == j.end() || !tables->is_array() || tables->empty()) {
    throw ConfigError("mapping needs a non-empty 'tables' array", "/tables");
  }

  std::set<std::string> prefixes_seen;
  for (std::size_t ti = 0; ti < tables->size(); ++ti) {
    const auto& tj = (*tables)[ti];
    std::string tpath = "/tables/" + std::to_string(ti);
    TableMapping table;
    table.name = tj.value("name", "");
    if (table.name.empty()) throw ConfigError("table needs a name", tpath + "/name");
    if (config.table(table.name)) {
      throw ConfigError("duplicate table '" + table.name + "'", tpath + "/name");
    }
    table.id_column = tj.value("id_column", "");
    if (table.id_column.empty()) {
      throw ConfigError("table needs an id_column", tpath + "/id_column");
    }
    if (auto owner = tj.find("owner"); owner != tj.end()) {
      RefSpec ref;
      ref.column = owner->value("column", "");
      ref.references = owner->value("references", "");
      if (ref.column.empty() || ref.references.empty()) {
        throw ConfigError("owner needs 'column' and 'references'", tpath + "/owner");
      }
      table.owner = ref;
    }

    auto entities = tj.find("entities");
    if (entities == tj.end() || !entities->is_array() || entities->empty()) {
      throw ConfigError("table needs a non-empty 'entities' array", tpath + "/entities");
    }
    for (std::size_t ei = 0; ei < entities->size(); ++ei) {
      const auto& ej = (*entities)[ei];
      std::string epath = tpath + "/entities/" + std::to_string(ei);
      EntityDecl decl;
      decl.id = ej.value("id", "");
      decl.prefix = ej.value("prefix", "");
      decl.class_term = ej.value("class", "");
      if (decl.id.empty()) throw ConfigError("entity needs an id", epath + "/id");
      if (!is_prefix_token(decl.prefix)) {
        throw ConfigError("prefix must be an uppercase token", epath + "/prefix");
      }
      if (!prefixes_seen.insert(decl.prefix).second) {
        throw ConfigError("duplicate prefix '" + decl.prefix + "'", epath + "/prefix");
      }
      if (!petro::is_term(decl.class_term)) {
        throw ConfigError("entity class must be a term", epath + "/class");
      }
      table.entities.push_back(std::move(decl));
    }

    auto emit = tj.find("emit");
    if (emit == tj.end() || !emit->is_array() || emit->empty()) {
      throw ConfigError("table needs a non-empty 'emit' array", tpath + "/emit");
    }
    for (std::size_t ri = 0; ri < emit->size(); ++ri) {
      const auto& rj = (*emit)[ri];
      std::string rpath = tpath + "/emit/" + std::to_string(ri);
      EmitRule rule;
      rule.kind = rule_kind(rj.value("rule", ""), rpath + "/rule");
      rule.entity = rj.value("entity", "");
      require_entity(table, rule.entity, rpath + "/entity");
      rule.column = rj.value("column", "");
      rule.term = rj.value("term", "");
      rule.verb = rj.value("verb", "");
      rule.object_entity = rj.value("object_entity", "");
      rule.aux_prefix = rj.value("aux_prefix", "");
      rule.aux_class = rj.value("aux_class", "");
      if (auto ref = rj.find("ref"); ref != rj.end()) {
        rule.ref.column = ref->value("column", "");
        rule.ref.references = ref->value("references", "");
      }
      switch (rule.kind) {
        case EmitRule::Kind::entity_class:
          break;
        case EmitRule::Kind::classification:
          if (rule.column.empty()) throw ConfigError("classification needs 'column'", rpath);
          break;
        case EmitRule::Kind::string_attribute:
        case EmitRule::Kind::number_attribute:
          if (rule.column.empty() || !petro::is_term(rule.term)) {
            throw ConfigError("attribute rule needs 'column' and a valid 'term'", rpath);
          }
          break;
        case EmitRule::Kind::name_attribute:
          if (!petro::is_term(rule.term) || rule.object_entity.empty()) {
            throw ConfigError("name_attribute needs a 'term' and 'object_entity'", rpath);
          }
          require_entity(table, rule.object_entity, rpath + "/object_entity");
          break;
        case EmitRule::Kind::relation:
          if (!petro::is_term(rule.verb)) {
            throw ConfigError("relation needs a valid 'verb'", rpath + "/verb");
          }
          if (rule.ref.column.empty() || rule.ref.references.empty()) {
            throw ConfigError("relation needs ref.column and ref.references", rpath + "/ref");
          }
          break;
        case EmitRule::Kind::part_of_chain:
          if (rule.column.empty() || !petro::is_term(rule.term) ||
              !petro::is_term(rule.aux_class) || !is_prefix_token(rule.aux_prefix)) {
            throw ConfigError(
                "part_of_chain needs 'column', 'term', 'aux_class' and an uppercase "
                "'aux_prefix'",
                rpath);
          }
          if (!prefixes_seen.insert(rule.aux_prefix).second) {
            throw ConfigError("duplicate prefix '" + rule.aux_prefix + "'",
                              rpath + "/aux_prefix");
          }
          break;
      }
      table.emit.push_back(std::move(rule));
    }
    config.tables.push_back(std::move(table));
  }

  // referenced tables exist; exactly one ownerless root
  for (std::size_t ti = 0; ti < config.tables.size(); ++ti) {
    const auto& table = config.tables[ti];
    std::string tpath = "/tables/" + std::to_string(ti);
    if (table.owner && !config.table(table.owner->references)) {
      throw ConfigError("owner references unmapped table '" + table.owner->references + "'",
                        tpath + "/owner/references");
    }
    for (std::size_t ri = 0; ri < table.emit.size(); ++ri) {
      const auto& rule = table.emit[ri];
      if (rule.kind == EmitRule::Kind::relation && !config.table(rule.ref.references)) {
        throw ConfigError("relation references unmapped table '" + rule.ref.references + "'",
                          tpath + "/emit/" + std::to_string(ri) + "/ref/references");
      }
    }
  }
  std::vector<std::string> roots;
  for (const auto& table : config.tables) {
    if (!table.owner) roots.push_back(table.name);
  }
  if (roots.size() != 1) {
    throw ConfigError("exactly one table must have no owner (the document split root); found " +
                          std::to_string(roots.size()),
                      "/tables");
  }
  config.root_table = roots.front();

  // owner chains terminate at the root
  for (const auto& table : config.tables) {
    const TableMapping* cursor = &table;
    std::size_t hops = 0;
    while (cursor->owner) {
      cursor = config.table(cursor->owner->references);
      if (++hops > config.tables.size()) {
        throw ConfigError("owner chain of table '" + table.name + "' does not terminate",
                          "/tables");
      }
    }
  }
  return config;
}

MappingConfig load_mapping_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mapping file '" + path + "'", "/");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_mapping(buffer.str());
}

// ---------------------------------------------------------------------------
// Minting
// ---------------------------------------------------------------------------

std::string mint_name(const MappingConfig& config, std::string_view prefix,
                      std::uint64_t id) {
  auto declared = config.declared_prefixes();
  if (!declared.count(std::string(prefix))) throw UndeclaredPrefixError(prefix);
  return std::string(prefix) + std::to_string(id);
}

// ---------------------------------------------------------------------------
// map_rows
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// compound-term normalization: spaces to '_', ASCII lowercased
std::string normalize_term(std::string_view raw) {
  std::string out;
  for (char c : trim(raw)) {
    if (c == ' ' || c == '\t') {
      if (!out.empty() && out.back() != '_') out += '_';
    } else {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::string normalize_global_name(std::string_view raw) {
  std::string out;
  for (char c : trim(raw)) {
    out += (c == ' ' || c == '\t') ? '_' : c;
  }
  return out;
}

struct Emitter {
  const TabularSource& source;
  const MappingConfig& config;
  cnl::Lexicon lexicon;

  // table -> (id -> row index); ids parsed once up front
  std::map<std::string, std::map<std::uint64_t, std::size_t>> row_ids;
  std::map<std::string, std::vector<std::uint64_t>> ids_by_row;

  // first-appearance synthetic ids for unlisted part-of parents
  std::map<std::string, std::uint64_t> interned;
  std::uint64_t next_synthetic;

  explicit Emitter(const TabularSource& src, const MappingConfig& cfg)
      : source(src), config(cfg), next_synthetic(cfg.synthetic_id_base) {
    for (const auto& table : config.tables) {
      for (const auto& rule : table.emit) {
        if (rule.kind == EmitRule::Kind::relation) lexicon.add_verb(rule.verb);
      }
    }
  }

  const Table& table_data(const std::string& name) const {
    auto it = source.tables.find(name);
    if (it == source.tables.end()) {
      throw MappingError("table missing from source", name, 0, "input");
    }
    return it->second;
  }

  std::string cell(const TableMapping& mapping, std::size_t row_index,
                   const std::string& column, const std::string& rule) const {
    const Table& data = table_data(mapping.name);
    auto col = data.column(column);
    if (!col) {
      throw MappingError("column '" + column + "' not in table", mapping.name,
                         row_index + 1, rule);
    }
    return trim(data.rows[row_index][*col]);
  }

  void check_atomic(const std::string& value, const TableMapping& mapping,
                    std::size_t row_index, const std::string& rule) const {
    if (value.find(';') != std::string::npos || value.find('|') != std::string::npos) {
      throw UnnormalizedDataError("cell encodes multiple values: '" + value + "'",
                                  mapping.name, row_index + 1, rule);
    }
  }

  void index_rows() {
    for (const auto& mapping : config.tables) {
      const Table& data = table_data(mapping.name);
      auto col = data.column(mapping.id_column);
      if (!col) {
        throw MappingError("id column '" + mapping.id_column + "' not in table",
                           mapping.name, 0, "id");
      }
      auto& ids = row_ids[mapping.name];
      auto& by_row = ids_by_row[mapping.name];
      for (std::size_t r = 0; r < data.rows.size(); ++r) {
        std::uint64_t id = parse_id(trim(data.rows[r][*col]), mapping.name, r, "id");
        if (!ids.emplace(id, r).second) {
          throw MappingError("duplicate id " + std::to_string(id), mapping.name, r + 1,
                             "id");
        }
        by_row.push_back(id);
      }
    }
  }

  std::uint64_t parse_id(const std::string& value, const std::string& table,
                         std::size_t row_index, const std::string& rule) const {
    if (value.empty()) {
      throw MappingError("empty id cell", table, row_index + 1, rule);
    }
    std::uint64_t id = 0;
    for (char c : value) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw MappingError("id '" + value + "' is not a natural number", table,
                           row_index + 1, rule);
      }
      id = id * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return id;
  }

  std::string entity_name(const TableMapping& mapping, const std::string& handle,
                          std::uint64_t id) const {
    for (const auto& e : mapping.entities) {
      if (e.id == handle) return e.prefix + std::to_string(id);
    }
    throw UndeclaredPrefixError(handle);
  }

  const EntityDecl& entity_decl(const TableMapping& mapping,
                                const std::string& handle) const {
    for (const auto& e : mapping.entities) {
      if (e.id == handle) return e;
    }
    throw UndeclaredPrefixError(handle);
  }

  // resolves a row's owning root-table row id, following owner chains
  std::uint64_t root_id(const TableMapping& mapping, std::size_t row_index) {
    if (!mapping.owner) return ids_by_row[mapping.name][row_index];
    std::string fk = cell(mapping, row_index, mapping.owner->column, "owner");
    if (fk.empty()) {
      throw MappingError("split key '" + mapping.owner->column + "' is empty",
                         mapping.name, row_index + 1, "owner");
    }
    check_atomic(fk, mapping, row_index, "owner");
    std::uint64_t id = parse_id(fk, mapping.name, row_index, "owner");
    const auto& parent_ids = row_ids[mapping.owner->references];
    auto it = parent_ids.find(id);
    if (it == parent_ids.end()) {
      throw MappingError("owner id " + std::to_string(id) + " not found in table '" +
                             mapping.owner->references + "'",
                         mapping.name, row_index + 1, "owner");
    }
    return root_id(*config.table(mapping.owner->references), it->second);
  }

  std::string parent_place_name(const std::string& raw, const EmitRule& rule) {
    std::string normalized = normalize_global_name(raw);
    if (config.global_names.count(normalized) && is_global_name(normalized)) {
      return normalized;
    }
    auto it = interned.find(normalized);
    if (it == interned.end()) {
      it = interned.emplace(normalized, next_synthetic++).first;
    }
    return rule.aux_prefix + std::to_string(it->second);
  }

  void emit_row(const TableMapping& mapping, std::size_t row_index, std::ostream& os) {
    std::uint64_t id = ids_by_row[mapping.name][row_index];
    for (const auto& rule : mapping.emit) {
      switch (rule.kind) {
        case EmitRule::Kind::entity_class: {
          const EntityDecl& decl = entity_decl(mapping, rule.entity);
          emit_fact(os, {entity_name(mapping, rule.entity, id), std::string(cnl::kIsA),
                         cnl::Term{decl.class_term}});
          break;
        }
        case EmitRule::Kind::classification: {
          std::string value = cell(mapping, row_index, rule.column, "classification");
          if (value.empty()) break;
          check_atomic(value, mapping, row_index, "classification");
          std::string term = normalize_term(value);
          if (!petro::is_term(term)) {
            throw MappingError("cell '" + value + "' is not a class term", mapping.name,
                               row_index + 1, "classification");
          }
          emit_fact(os, {entity_name(mapping, rule.entity, id), std::string(cnl::kIsA),
                         cnl::Term{term}});
          break;
        }
        case EmitRule::Kind::string_attribute: {
          std::string value = cell(mapping, row_index, rule.column, "string_attribute");
          if (value.empty()) break;
          emit_fact(os, {entity_name(mapping, rule.entity, id), rule.term, value});
          break;
        }
        case EmitRule::Kind::number_attribute: {
          std::string value = cell(mapping, row_index, rule.column, "number_attribute");
          if (value.empty()) break;
          check_atomic(value, mapping, row_index, "number_attribute");
          auto number = try_parse_rational(value);
          if (!number) {
            throw MappingError("cell '" + value + "' is not a number", mapping.name,
                               row_index + 1, "number_attribute");
          }
          emit_fact(os, {entity_name(mapping, rule.entity, id), rule.term, *number});
          break;
        }
        case EmitRule::Kind::name_attribute: {
          emit_fact(os, {entity_name(mapping, rule.entity, id), rule.term,
                         cnl::Name{entity_name(mapping, rule.object_entity, id)}});
          break;
        }
        case EmitRule::Kind::relation: {
          std::string fk = cell(mapping, row_index, rule.ref.column, "relation");
          if (fk.empty()) break;
          check_atomic(fk, mapping, row_index, "relation");
          std::uint64_t ref_id = parse_id(fk, mapping.name, row_index, "relation");
          const TableMapping* ref_table = config.table(rule.ref.references);
          const auto& ref_ids = row_ids[ref_table->name];
          if (!ref_ids.count(ref_id)) {
            throw MappingError("foreign key " + std::to_string(ref_id) +
                                   " not found in table '" + ref_table->name + "'",
                               mapping.name, row_index + 1, "relation");
          }
          std::string subject = ref_table->entities.front().prefix + std::to_string(ref_id);
          emit_fact(os, {subject, rule.verb,
                         cnl::Name{entity_name(mapping, rule.entity, id)}});
          break;
        }
        case EmitRule::Kind::part_of_chain: {
          std::string value = cell(mapping, row_index, rule.column, "part_of_chain");
          if (value.empty()) break;
          check_atomic(value, mapping, row_index, "part_of_chain");
          std::string aux = rule.aux_prefix + std::to_string(id);
          std::string parent = parent_place_name(value, rule);
          emit_fact(os, {aux, std::string(cnl::kIsA), cnl::Term{rule.aux_class}});
          emit_fact(os, {aux, std::string(cnl::kPartOf), cnl::Name{parent}});
          emit_fact(os, {entity_name(mapping, rule.entity, id), rule.term, cnl::Name{aux}});
          break;
        }
      }
    }
  }

  void emit_fact(std::ostream& os, const cnl::Fact& fact) {
    os << cnl::generate(fact, lexicon) << "\n";
  }

  // children grouped under their parent row, tables in config order
  void emit_children(const std::string& parent_table, std::uint64_t parent_id,
                     std::ostream& os) {
    for (const auto& mapping : config.tables) {
      if (!mapping.owner || mapping.owner->references != parent_table) continue;
      const Table& data = table_data(mapping.name);
      auto col = data.column(mapping.owner->column);
      if (!col) {
        throw MappingError("owner column '" + mapping.owner->column + "' not in table",
                           mapping.name, 0, "owner");
      }
      for (std::size_t r = 0; r < data.rows.size(); ++r) {
        std::string fk = trim(data.rows[r][*col]);
        if (fk.empty()) {
          throw MappingError("split key '" + mapping.owner->column + "' is empty",
                             mapping.name, r + 1, "owner");
        }
        check_atomic(fk, mapping, r, "owner");
        if (parse_id(fk, mapping.name, r, "owner") != parent_id) continue;
        emit_row(mapping, r, os);
        emit_children(mapping.name, ids_by_row[mapping.name][r], os);
      }
    }
  }
};

}  // namespace

std::map<std::string, std::string> map_rows(const TabularSource& source,
                                            const MappingConfig& config) {
  Emitter emitter(source, config);
  emitter.index_rows();

  const TableMapping* root = config.table(config.root_table);
  const Table& root_data = emitter.table_data(root->name);

  // Resolve every row's owner up front so broken split keys fail loudly even
  // for rows that would otherwise emit nothing.
  for (const auto& mapping : config.tables) {
    const Table& data = emitter.table_data(mapping.name);
    for (std::size_t r = 0; r < data.rows.size(); ++r) emitter.root_id(mapping, r);
  }

  std::map<std::string, std::string> documents;
  for (std::size_t r = 0; r < root_data.rows.size(); ++r) {
    std::uint64_t id = emitter.ids_by_row[root->name][r];
    std::string doc_name = root->entities.front().prefix + std::to_string(id);
    std::ostringstream os;
    emitter.emit_row(*root, r, os);
    emitter.emit_children(root->name, id, os);
    documents[doc_name] = os.str();
  }
  return documents;
}

}  // namespace petro::ingest
