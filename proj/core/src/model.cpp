#include "petro/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace petro {

namespace {

constexpr std::array<std::string_view, kFlagCount> kFlagNames = {
    "pyroclastic", "kimberlite", "lamproite", "lamprophyre",
    "charnockite", "plutonic",   "volcanic",
};

const std::vector<std::string> kStandardSpecies = {
    // primary species
    "Ol", "Opx", "Cpx", "hornblende", "garnet", "spinel", "biotite",
    "melilite", "kalsilite", "leucite", "carbonates",
    // QAPF group axes
    "Q", "A", "P", "F"};

}  // namespace

std::string_view flag_name(Flag f) { return kFlagNames[static_cast<std::size_t>(f)]; }

std::optional<Flag> flag_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFlagCount; ++i) {
    if (kFlagNames[i] == name) return static_cast<Flag>(i);
  }
  return std::nullopt;
}

const std::array<Flag, kFlagCount>& all_flags() {
  static const std::array<Flag, kFlagCount> flags = [] {
    std::array<Flag, kFlagCount> a{};
    for (std::size_t i = 0; i < kFlagCount; ++i) a[i] = static_cast<Flag>(i);
    return a;
  }();
  return flags;
}

const SpeciesRegistry& SpeciesRegistry::standard() {
  static const SpeciesRegistry registry{kStandardSpecies};
  return registry;
}

SpeciesRegistry::SpeciesRegistry(std::vector<std::string> species)
    : species_(std::move(species)) {}

bool SpeciesRegistry::contains(std::string_view name) const {
  return std::find(species_.begin(), species_.end(), name) != species_.end();
}

void SpeciesRegistry::add(std::string name) {
  if (!contains(name)) species_.push_back(std::move(name));
}

std::string_view group_name(DerivedGroup g) {
  switch (g) {
    case DerivedGroup::Px:
      return "Px";
    case DerivedGroup::OOC:
      return "OOC";
    case DerivedGroup::OPH:
      return "OPH";
    case DerivedGroup::M:
      return "M";
  }
  return "";
}

std::optional<DerivedGroup> group_from_name(std::string_view name) {
  if (name == "Px") return DerivedGroup::Px;
  if (name == "OOC") return DerivedGroup::OOC;
  if (name == "OPH") return DerivedGroup::OPH;
  if (name == "M") return DerivedGroup::M;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Names and terms
// ---------------------------------------------------------------------------

bool is_local_name(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] >= 'A' && s[i] <= 'Z') ++i;
  if (i == 0 || i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  }
  return true;
}

bool is_global_name(std::string_view s) {
  if (s.empty()) return false;
  bool start_of_word = true;
  for (char c : s) {
    if (start_of_word) {
      if (!(c >= 'A' && c <= 'Z')) return false;
      start_of_word = false;
    } else if (c == '_') {
      start_of_word = true;
    } else if (!std::isalpha(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return !start_of_word;
}

bool is_proper_name(std::string_view s) { return is_local_name(s) || is_global_name(s); }

bool is_term(std::string_view s) {
  if (s.empty()) return false;
  bool start_of_word = true;
  for (char c : s) {
    if (start_of_word) {
      if (!(c >= 'a' && c <= 'z')) return false;
      start_of_word = false;
    } else if (c == '_') {
      start_of_word = true;
    } else if (!(c >= 'a' && c <= 'z')) {
      return false;
    }
  }
  return !start_of_word;
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

UnknownSpeciesError::UnknownSpeciesError(std::string_view s)
    : std::runtime_error("unknown species '" + std::string(s) + "'"), species(s) {}

IndeterminateValueError::IndeterminateValueError(std::string_view v)
    : std::runtime_error("indeterminate value for '" + std::string(v) + "'"),
      value_name(v) {}

// ---------------------------------------------------------------------------
// VPC
// ---------------------------------------------------------------------------

Rational vpc(const Sample& sample, std::string_view species,
             const SpeciesRegistry& registry) {
  if (!registry.contains(species)) throw UnknownSpeciesError(species);
  auto it = sample.composition.entries.find(std::string(species));
  if (it != sample.composition.entries.end()) return it->second;
  if (sample.composition.absent_is_unknown) throw IndeterminateValueError(species);
  return Rational(0);
}

Rational derived_vpc(const Sample& sample, DerivedGroup group,
                     const SpeciesRegistry& registry) {
  switch (group) {
    case DerivedGroup::Px:
      return vpc(sample, "Opx", registry) + vpc(sample, "Cpx", registry);
    case DerivedGroup::OOC:
      return vpc(sample, "Ol", registry) + vpc(sample, "Opx", registry) +
             vpc(sample, "Cpx", registry);
    case DerivedGroup::OPH:
      return vpc(sample, "Ol", registry) + derived_vpc(sample, DerivedGroup::Px, registry) +
             vpc(sample, "hornblende", registry);
    case DerivedGroup::M:
      return Rational(100) - (vpc(sample, "Q", registry) + vpc(sample, "A", registry) +
                              vpc(sample, "P", registry) + vpc(sample, "F", registry));
  }
  throw UnknownSpeciesError("derived group");
}

Rational vpc_value(const Sample& sample, std::string_view name,
                   const SpeciesRegistry& registry) {
  if (auto group = group_from_name(name)) return derived_vpc(sample, *group, registry);
  return vpc(sample, name, registry);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::vector<Violation> validate_sample(const Sample& sample,
                                       const SpeciesRegistry& registry) {
  std::vector<Violation> report;

  if (!sample.id.empty() && !is_proper_name(sample.id)) {
    report.push_back({"id", "'" + sample.id + "' is not a proper name"});
  }

  Rational total(0);
  for (const auto& [species, value] : sample.composition.entries) {
    if (!registry.contains(species)) {
      report.push_back({species, "undeclared species"});
      continue;
    }
    if (value < 0 || value > 100) {
      report.push_back({species, species + " out of [0,100]"});
      continue;
    }
    total += value;
  }
  if (total > 100) {
    report.push_back(
        {"composition", "species total " + to_display_string(total) + " exceeds 100"});
  }

  if (sample.flags.get(Flag::plutonic) == Tri::yes &&
      sample.flags.get(Flag::volcanic) == Tri::yes) {
    report.push_back({"flags", "plutonic/volcanic conflict"});
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

Rational composition_value(const json& v, const std::string& species, bool strict) {
  if (v.is_string()) {
    auto q = try_parse_rational(v.get<std::string>());
    if (!q) {
      throw SampleFormatError("composition." + species + ": bad rational literal '" +
                              v.get<std::string>() + "'");
    }
    return *q;
  }
  if (v.is_number_integer()) return Rational(BigInt(v.get<std::int64_t>()));
  if (v.is_number_unsigned()) return Rational(BigInt(v.get<std::uint64_t>()));
  if (v.is_number_float()) {
    if (strict) {
      throw SampleFormatError("composition." + species +
                              ": binary floating point rejected in strict mode; "
                              "use a decimal string");
    }
    // Shortest round-trip decimal recovers the intended literal of
    // human-typed values; it is then read exactly.
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v.get<double>());
    return parse_rational(std::string_view(buf, r.ptr - buf));
  }
  throw SampleFormatError("composition." + species + ": expected string or number");
}

Sample sample_from_json(const json& j, bool strict) {
  if (!j.is_object()) throw SampleFormatError("sample: expected an object");
  Sample s;
  s.id = j.value("id", "");
  s.composition.absent_is_unknown = strict;

  if (auto it = j.find("composition"); it != j.end()) {
    if (!it->is_object()) throw SampleFormatError("composition: expected an object");
    for (const auto& [species, value] : it->items()) {
      s.composition.entries[species] = composition_value(value, species, strict);
    }
  }
  if (auto it = j.find("flags"); it != j.end()) {
    if (!it->is_object()) throw SampleFormatError("flags: expected an object");
    for (const auto& [name, value] : it->items()) {
      auto flag = flag_from_name(name);
      if (!flag) throw SampleFormatError("flags: unknown flag '" + name + "'");
      if (value.is_null()) {
        s.flags.set(*flag, Tri::unknown);
      } else if (value.is_boolean()) {
        s.flags.set(*flag, value.get<bool>() ? Tri::yes : Tri::no);
      } else {
        throw SampleFormatError("flags." + name + ": expected true, false or null");
      }
    }
  }
  if (auto it = j.find("metadata"); it != j.end()) {
    if (!it->is_object()) throw SampleFormatError("metadata: expected an object");
    for (const auto& [key, value] : it->items()) {
      if (!value.is_string()) throw SampleFormatError("metadata." + key + ": expected string");
      s.metadata[key] = value.get<std::string>();
    }
  }
  return s;
}

json sample_to_json_obj(const Sample& s) {
  json j;
  j["id"] = s.id;
  json comp = json::object();
  for (const auto& [species, value] : s.composition.entries) {
    comp[species] = to_display_string(value);
  }
  j["composition"] = comp;
  json flags = json::object();
  for (Flag f : all_flags()) {
    switch (s.flags.get(f)) {
      case Tri::yes:
        flags[std::string(flag_name(f))] = true;
        break;
      case Tri::no:
        flags[std::string(flag_name(f))] = false;
        break;
      case Tri::unknown:
        break;  // absent means unknown
    }
  }
  j["flags"] = flags;
  if (!s.metadata.empty()) j["metadata"] = s.metadata;
  return j;
}

}  // namespace

std::vector<Sample> load_samples_json(const std::string& text, bool strict) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SampleFormatError(std::string("invalid JSON: ") + e.what());
  }
  std::vector<Sample> samples;
  if (j.is_array()) {
    for (const auto& item : j) samples.push_back(sample_from_json(item, strict));
  } else {
    samples.push_back(sample_from_json(j, strict));
  }
  return samples;
}

Sample load_sample_json(const std::string& text, bool strict) {
  auto samples = load_samples_json(text, strict);
  if (samples.size() != 1) throw SampleFormatError("expected exactly one sample");
  return samples.front();
}

std::string samples_to_json(const std::vector<Sample>& samples) {
  json arr = json::array();
  for (const auto& s : samples) arr.push_back(sample_to_json_obj(s));
  return arr.dump(2);
}

}  // namespace petro
