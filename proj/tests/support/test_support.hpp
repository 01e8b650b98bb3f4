#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "petro/classify.hpp"
#include "petro/cnl.hpp"
#include "petro/model.hpp"

#ifndef PETRO_DATA_DIR
#define PETRO_DATA_DIR "data"
#endif

namespace petro::test {

inline std::string data_path(const std::string& rel) {
  return std::string(PETRO_DATA_DIR) + "/" + rel;
}

using Rng = std::mt19937_64;

// random nonnegative rational with a power-of-ten-friendly denominator
inline Rational random_rational(Rng& rng, int max_int = 100) {
  static const int denominators[] = {1, 2, 3, 4, 5, 7, 8, 10, 20, 100};
  std::uniform_int_distribution<int> den_pick(0, 9);
  int den = denominators[den_pick(rng)];
  std::uniform_int_distribution<long> num_pick(0, static_cast<long>(max_int) * den);
  return Rational(num_pick(rng), den);
}

// sample with the qualitative profile of the ultramafic plutonic branch
inline Sample plutonic_sample(std::string id) {
  Sample s;
  s.id = std::move(id);
  for (Flag f : all_flags()) s.flags.set(f, Tri::no);
  s.flags.set(Flag::plutonic, Tri::yes);
  return s;
}

inline Sample ooc_sample(const Rational& ol, const Rational& opx, const Rational& cpx) {
  Sample s = plutonic_sample("SAM1");
  s.composition.entries["Ol"] = ol;
  s.composition.entries["Opx"] = opx;
  s.composition.entries["Cpx"] = cpx;
  return s;
}

// triple realized over (Ol, Opx, hornblende); Px comes out as the Opx value
inline Sample oph_sample(const Rational& ol, const Rational& px, const Rational& hbl) {
  Sample s = plutonic_sample("SAM1");
  s.composition.entries["Ol"] = ol;
  s.composition.entries["Opx"] = px;
  s.composition.entries["hornblende"] = hbl;
  return s;
}

// ---------------------------------------------------------------------------
// Random CNL facts
// ---------------------------------------------------------------------------

inline std::string random_local_name(Rng& rng) {
  static const char* prefixes[] = {"SAM", "PUB", "PLC", "SUB", "WPC", "X", "QQ"};
  std::uniform_int_distribution<int> prefix_pick(0, 6);
  std::uniform_int_distribution<int> id_pick(0, 99999);
  return std::string(prefixes[prefix_pick(rng)]) + std::to_string(id_pick(rng));
}

inline std::string random_name(Rng& rng) {
  static const char* globals[] = {"Iceland", "Atlantic_Ocean", "Greenland", "Siberia"};
  std::uniform_int_distribution<int> kind(0, 4);
  if (kind(rng) == 0) {
    std::uniform_int_distribution<int> pick(0, 3);
    return globals[pick(rng)];
  }
  return random_local_name(rng);
}

inline std::string random_cnl_term(Rng& rng) {
  static const char* terms[] = {"sample",       "publication", "place",
                                "substance",    "rhyolite",    "weight_percent",
                                "gathering_place", "title",    "value",
                                "component",    "harzburgite", "rock"};
  std::uniform_int_distribution<int> pick(0, 11);
  return terms[pick(rng)];
}

inline Rational random_decimal(Rng& rng) {
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  static const long dens[] = {1, 10, 100, 1000, 10000};
  std::uniform_int_distribution<int> den(0, 4);
  return Rational(num(rng), dens[den(rng)]);
}

inline std::string random_literal_string(Rng& rng) {
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> chr(0x20, 0x7e);
  std::string out;
  int n = len(rng);
  for (int i = 0; i < n; ++i) out += static_cast<char>(chr(rng));
  return out;
}

inline cnl::Fact random_fact(Rng& rng, const cnl::Lexicon& lexicon) {
  std::uniform_int_distribution<int> kind(0, 5);
  switch (kind(rng)) {
    case 0:
      return {random_name(rng), std::string(cnl::kIsA), cnl::Term{random_cnl_term(rng)}};
    case 1:
      return {random_name(rng), std::string(cnl::kPartOf), cnl::Name{random_name(rng)}};
    case 2:
      return {random_name(rng), "title", random_literal_string(rng)};
    case 3:
      return {random_name(rng), "value", random_decimal(rng)};
    case 4: {
      std::vector<std::string> verbs(lexicon.verbs().begin(), lexicon.verbs().end());
      std::uniform_int_distribution<std::size_t> pick(0, verbs.size() - 1);
      return {random_name(rng), verbs[pick(rng)], cnl::Name{random_name(rng)}};
    }
    default:
      return {random_name(rng), "gathering_place", cnl::Name{random_name(rng)}};
  }
}

inline std::string normalize_ws(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
    } else {
      if (space) out += ' ';
      out += c;
      space = false;
    }
  }
  return out;
}

// brute-force connected components over co-occurring glossary terms
inline std::vector<std::vector<std::string>> brute_force_cliques(
    const std::vector<std::vector<std::string>>& entries) {
  std::vector<std::string> terms;
  auto index_of = [&](const std::string& t) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i] == t) return i;
    }
    terms.push_back(t);
    return terms.size() - 1;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& entry : entries) {
    std::size_t first = index_of(entry.front());
    for (const auto& t : entry) edges.emplace_back(first, index_of(t));
  }
  std::vector<int> component(terms.size(), -1);
  int next = 0;
  for (std::size_t seed = 0; seed < terms.size(); ++seed) {
    if (component[seed] != -1) continue;
    component[seed] = next;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [a, b] : edges) {
        if (component[a] == next && component[b] != next) {
          component[b] = next;
          changed = true;
        } else if (component[b] == next && component[a] != next) {
          component[a] = next;
          changed = true;
        }
      }
    }
    ++next;
  }
  std::vector<std::vector<std::string>> cliques(static_cast<std::size_t>(next));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    cliques[static_cast<std::size_t>(component[i])].push_back(terms[i]);
  }
  std::vector<std::vector<std::string>> result;
  for (auto& clique : cliques) {
    if (clique.size() < 2) continue;
    std::sort(clique.begin(), clique.end());
    result.push_back(std::move(clique));
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace petro::test
