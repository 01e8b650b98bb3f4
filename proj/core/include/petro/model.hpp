#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "petro/rational.hpp"

namespace petro {

// ---------------------------------------------------------------------------
// Qualitative flags
// ---------------------------------------------------------------------------

enum class Flag : std::uint8_t {
  pyroclastic,
  kimberlite,
  lamproite,
  lamprophyre,
  charnockite,
  plutonic,
  volcanic,
};
inline constexpr std::size_t kFlagCount = 7;

std::string_view flag_name(Flag f);
std::optional<Flag> flag_from_name(std::string_view name);
const std::array<Flag, kFlagCount>& all_flags();

// `unknown` is distinct from false: a classification guard that reads an
// unknown flag blocks instead of assuming negative evidence.
enum class Tri : std::uint8_t { unknown, yes, no };

struct QualitativeFlags {
  std::array<Tri, kFlagCount> values{};  // all unknown by default

  Tri get(Flag f) const { return values[static_cast<std::size_t>(f)]; }
  void set(Flag f, Tri v) { values[static_cast<std::size_t>(f)] = v; }
  bool operator==(const QualitativeFlags&) const = default;
};

// ---------------------------------------------------------------------------
// Species registry
// ---------------------------------------------------------------------------

// The set of measurable (primary) mineral species plus the QAPF group axes.
// The list is configuration: rule files may extend it, and a rule set may not
// reference an undeclared species.
class SpeciesRegistry {
 public:
  static const SpeciesRegistry& standard();

  SpeciesRegistry() = default;
  explicit SpeciesRegistry(std::vector<std::string> species);

  bool contains(std::string_view name) const;
  void add(std::string name);
  const std::vector<std::string>& species() const { return species_; }

 private:
  std::vector<std::string> species_;
};

// Derived mineral groups with fixed definitions:
//   Px  = Opx + Cpx
//   OOC = Ol + Opx + Cpx
//   OPH = Ol + Px + hornblende
//   M   = 100 - (Q + A + P + F)
enum class DerivedGroup : std::uint8_t { Px, OOC, OPH, M };

std::string_view group_name(DerivedGroup g);
std::optional<DerivedGroup> group_from_name(std::string_view name);

// ---------------------------------------------------------------------------
// Samples
// ---------------------------------------------------------------------------

struct ModalComposition {
  // Species name -> volume percent of the sample. Absent species read as
  // exactly 0 unless absent_is_unknown is set (strict ingestion), in which
  // case reading an absent species raises IndeterminateValueError.
  std::map<std::string, Rational> entries;
  bool absent_is_unknown = false;

  bool operator==(const ModalComposition&) const = default;
};

struct Sample {
  std::string id;
  ModalComposition composition;
  QualitativeFlags flags;
  std::map<std::string, std::string> metadata;
};

// Proper names: an all-uppercase prefix followed by digits (SAM32994), or a
// global name of capitalized words joined by '_' (Iceland, Atlantic_Ocean).
bool is_local_name(std::string_view s);
bool is_global_name(std::string_view s);
bool is_proper_name(std::string_view s);

// Lowercase words optionally joined by '_' (gathering_place).
bool is_term(std::string_view s);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct UnknownSpeciesError : std::runtime_error {
  explicit UnknownSpeciesError(std::string_view species);
  std::string species;
};

struct IndeterminateValueError : std::runtime_error {
  explicit IndeterminateValueError(std::string_view what_value);
  std::string value_name;
};

struct SampleFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Volume percentage content of a primary species. Throws UnknownSpeciesError
// for species not in the registry; IndeterminateValueError when the value is
// absent and the composition is strict.
Rational vpc(const Sample& sample, std::string_view species,
             const SpeciesRegistry& registry = SpeciesRegistry::standard());

Rational derived_vpc(const Sample& sample, DerivedGroup group,
                     const SpeciesRegistry& registry = SpeciesRegistry::standard());

// Resolves either a primary species or a derived group by name.
Rational vpc_value(const Sample& sample, std::string_view name,
                   const SpeciesRegistry& registry = SpeciesRegistry::standard());

struct Violation {
  std::string field;
  std::string message;
};

// Empty report iff all composition and flag invariants hold.
std::vector<Violation> validate_sample(
    const Sample& sample,
    const SpeciesRegistry& registry = SpeciesRegistry::standard());

// ---------------------------------------------------------------------------
// Sample JSON
// ---------------------------------------------------------------------------
// Schema: {"id": string, "composition": {species: decimal-string},
//          "flags": {name: true|false|null}, "metadata": {...}}
// Values are decimal strings ("73.95"), ratio strings ("1/3") or integral
// JSON numbers; non-integral JSON numbers are rejected in strict mode (binary
// floating point cannot carry exact decimals). Strict mode also marks absent
// species as unknown rather than zero.

std::vector<Sample> load_samples_json(const std::string& text, bool strict = false);
Sample load_sample_json(const std::string& text, bool strict = false);
std::string samples_to_json(const std::vector<Sample>& samples);

}  // namespace petro
