#pragma once

#include <compare>
#include <string>
#include <vector>

#include "qca/rule.hpp"

namespace qca {

// A finite configuration: a bi-infinite word equal to the quiescent symbol
// almost everywhere, stored as (offset, finite word) in canonical trimmed
// form. The all-quiescent configuration is (0, empty).
struct Config {
  int offset = 0;
  std::vector<Symbol> word;

  bool vacuum() const { return word.empty(); }
  int length() const { return static_cast<int>(word.size()); }
  int support_min() const { return offset; }
  int support_max() const { return offset + length() - 1; }  // undefined for vacuum

  // Symbol at an absolute cell index, quiescent outside the stored word.
  Symbol at(int cell, Symbol quiescent) const {
    if (cell < offset || cell >= offset + length()) return quiescent;
    return word[static_cast<std::size_t>(cell - offset)];
  }

  bool operator==(const Config&) const = default;
};

// Deterministic total order: (support length, offset, word lexicographic by
// alphabet index). Used for every sparse-map key and report ordering.
bool config_less(const Config& a, const Config& b);

struct ConfigLess {
  bool operator()(const Config& a, const Config& b) const { return config_less(a, b); }
};

Config canonicalize(int offset, std::vector<Symbol> word, Symbol quiescent);

// d with d_i = c_{i+k}.
Config shift_config(const Config& c, int k);

// Mirror image: cell i of the result holds cell -i of c.
Config reflect_config(const Config& c);

// One synchronous step of the classical global map, canonical output.
Config step(const Rule& rule, const Config& c);

// Text literal "<offset>|<word>"; the all-quiescent configuration is "0|".
Config parse_config_literal(const std::string& text, const Alphabet& alphabet);
std::string config_literal(const Config& c, const Alphabet& alphabet);

}  // namespace qca
