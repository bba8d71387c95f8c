#pragma once

#include <random>
#include <string>
#include <vector>

#include "qca/config.hpp"
#include "qca/rule.hpp"
#include "qca/state.hpp"

inline qca::Rule load_rule(const std::string& name) {
  return qca::parse_rule_file(std::string(QCA_RULES_DIR) + "/" + name + ".json");
}

inline qca::Config cfg(const qca::Rule& rule, const std::string& literal) {
  return qca::parse_config_literal(literal, rule.alphabet);
}

inline std::string lit(const qca::Rule& rule, const qca::Config& c) {
  return qca::config_literal(c, rule.alphabet);
}

inline qca::Config random_config(std::mt19937_64& rng, const qca::Alphabet& alphabet, int max_len,
                                 int offset_range) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<int> off_dist(-offset_range, offset_range);
  std::uniform_int_distribution<int> sym_dist(0, alphabet.size() - 1);
  const int len = len_dist(rng);
  std::vector<qca::Symbol> word(static_cast<std::size_t>(len));
  for (auto& s : word) s = static_cast<qca::Symbol>(sym_dist(rng));
  return qca::canonicalize(off_dist(rng), std::move(word), alphabet.quiescent);
}

// A normalized superposition over at most max_terms distinct configurations.
inline qca::Superposition random_superposition(std::mt19937_64& rng, const qca::Alphabet& alphabet,
                                               int max_terms) {
  std::uniform_int_distribution<int> n_dist(1, max_terms);
  std::normal_distribution<double> amp_dist(0.0, 1.0);
  while (true) {
    qca::Superposition s;
    const int n = n_dist(rng);
    for (int i = 0; i < n; ++i)
      s.add(random_config(rng, alphabet, 6, 5), {amp_dist(rng), amp_dist(rng)});
    if (s.zero()) continue;
    return s.normalized();
  }
}
