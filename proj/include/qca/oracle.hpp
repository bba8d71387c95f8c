#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qca/config.hpp"
#include "qca/debruijn.hpp"
#include "qca/rule.hpp"

// Independent brute-force references. Everything here enumerates
// configurations directly and never consults the pair diagram, so it can
// validate the decision procedures on small instances.
namespace qca::oracle {

struct SearchSpace {
  int alphabet_size = 2;
  std::vector<int> neighborhood{0, 1};
  int max_support = 8;     // enumeration bound for the brute checks
  std::int64_t sample = 0;  // 0 = exhaustive table enumeration
  std::uint64_t seed = 1;
};

struct InjectivityResult {
  bool injective = true;
  Config first, second;  // a colliding pair with equal images, when found
};

// Enumerates every canonical configuration of support length <= max_support
// anchored at offset 0 and looks for image collisions across relative shifts
// (images are compared by their word, which quotients out translation).
InjectivityResult brute_injective(const Rule& rule, int max_support);

// Every u with step(u) = c and support length <= max_support, candidate
// offsets constrained by the neighborhood span. For the all-quiescent target
// the candidates are anchored near the origin.
std::vector<Config> brute_preimages(const Rule& rule, const Config& c, int max_support);

// A radius-r local left inverse G (G after F is the identity on every
// configuration of support length <= 2r+4), determined entry by entry from
// consistency; nullopt on conflict.
std::optional<Rule> brute_local_inverse(const Rule& rule, int radius);

struct RulePredicate {
  std::optional<bool> injective_finite;
  std::optional<bool> reversible;
  std::optional<bool> open;
  std::optional<bool> left_closing;
  std::optional<bool> right_closing;

  bool matches(const PropertyReport& rep) const;
};

// All (or a seeded sample of) quiescence-preserving rules over the space
// whose classification matches the predicate. Every match is cross-checked:
// claimed injectivity against brute_injective, claimed collisions against a
// concrete exhibited pair (minimal collisions can outgrow the brute-force
// support bound, e.g. at neighborhood width 4 a rule exists whose shortest
// colliding pair has support length 9).
std::vector<Rule> search_rules(const SearchSpace& space, const RulePredicate& predicate);

}  // namespace qca::oracle
