#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qca/errors.hpp"

namespace qca {

// Symbols are stored as indices into Alphabet::symbols; the file characters
// only appear at the I/O boundary. Enumeration order everywhere is the order
// the symbols were listed in the rule file.
using Symbol = std::uint8_t;

struct Alphabet {
  std::string symbols;   // distinct single-character tokens, file order
  Symbol quiescent = 0;  // index of the quiescent symbol

  int size() const { return static_cast<int>(symbols.size()); }
  char chr(Symbol s) const { return symbols[s]; }
  Symbol index_of(char c) const;  // fails with parse_error on unknown char
  bool operator==(const Alphabet&) const = default;
};

// A complete local transition table over a finite neighborhood of offsets.
struct Rule {
  std::string name;
  Alphabet alphabet;
  std::vector<int> neighborhood;  // sorted, distinct
  std::vector<Symbol> table;      // size k^m, indexed base-k in neighborhood order

  int width() const { return static_cast<int>(neighborhood.size()); }
  int min_offset() const { return neighborhood.front(); }
  int max_offset() const { return neighborhood.back(); }

  Symbol apply(std::span<const Symbol> window) const;

  // The spatially reflected automaton (cell i of the image reads cell -i of
  // the argument). Used to reduce left-sided constructions to right-sided ones.
  Rule reflected() const;

  bool operator==(const Rule&) const = default;
};

std::size_t table_index(const Rule& rule, std::span<const Symbol> window);

// Parses and validates the JSON rule format:
//   {"name": str, "alphabet": [chars], "quiescent": char,
//    "neighborhood": [ints], "table": {word: char}}
Rule parse_rule(const std::string& json_text);
Rule parse_rule_file(const std::string& path);

std::string rule_to_json(const Rule& rule);

}  // namespace qca
