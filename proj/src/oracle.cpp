#include "qca/oracle.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace qca::oracle {

namespace {

double pow_double(int base, int exp) {
  double v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

// Canonical anchored configurations (offset 0, ends non-quiescent) of word
// length <= max_len, plus the vacuum, in deterministic order: length
// ascending, then lexicographic by symbol index.
template <typename Fn>
void for_each_anchored(const Alphabet& alphabet, int max_len, Fn&& fn) {
  const int k = alphabet.size();
  const Symbol q = alphabet.quiescent;
  fn(Config{});
  std::vector<Symbol> word;
  // Generate by length so enumeration order is (length, lex).
  for (int len = 1; len <= max_len; ++len) {
    auto fixed_len = [&](auto&& self, int remaining) -> void {
      if (remaining == 0) {
        if (word.front() != q && word.back() != q) fn(Config{0, word});
        return;
      }
      for (int s = 0; s < k; ++s) {
        if (word.empty() && s == q) continue;  // anchored: first symbol non-quiescent
        word.push_back(static_cast<Symbol>(s));
        self(self, remaining - 1);
        word.pop_back();
      }
    };
    fixed_len(fixed_len, len);
  }
}

void check_feasible(const Alphabet& alphabet, int max_len) {
  if (pow_double(alphabet.size(), max_len) > 4e6)
    fail(Errc::space_too_large, "brute-force enumeration bound too large");
}

}  // namespace

InjectivityResult brute_injective(const Rule& rule, int max_support) {
  check_feasible(rule.alphabet, max_support);
  InjectivityResult result;
  // Image words seen so far -> (preimage, image offset). Equal image words
  // mean equal images after a shift, and distinct anchored preimages stay
  // distinct after that shift.
  std::map<std::vector<Symbol>, std::pair<Config, int>> seen;
  for_each_anchored(rule.alphabet, max_support, [&](const Config& c) {
    if (!result.injective) return;
    Config image = step(rule, c);
    auto [it, inserted] = seen.try_emplace(image.word, std::pair{c, image.offset});
    if (inserted) return;
    const auto& [other, other_offset] = it->second;
    result.injective = false;
    result.first = other;
    result.second = shift_config(c, image.offset - other_offset);
  });
  return result;
}

std::vector<Config> brute_preimages(const Rule& rule, const Config& c, int max_support) {
  check_feasible(rule.alphabet, max_support);
  const int lo = rule.min_offset(), hi = rule.max_offset();
  const int cmin = c.vacuum() ? 0 : c.support_min();
  const int cmax = c.vacuum() ? 0 : c.support_max();
  const int first_offset = cmax + lo - max_support + 1;
  const int last_offset = cmin + hi;
  std::vector<Config> found;
  if (step(rule, Config{}) == c) found.push_back(Config{});
  for_each_anchored(rule.alphabet, max_support, [&](const Config& anchored) {
    if (anchored.vacuum()) return;
    for (int offset = first_offset; offset <= last_offset; ++offset) {
      Config u = anchored;
      u.offset = offset;
      if (step(rule, u) == c) found.push_back(u);
    }
  });
  std::sort(found.begin(), found.end(), ConfigLess{});
  return found;
}

std::optional<Rule> brute_local_inverse(const Rule& rule, int radius) {
  const int support = 2 * radius + 4;
  check_feasible(rule.alphabet, support);
  const Symbol q = rule.alphabet.quiescent;
  const int width = 2 * radius + 1;

  Rule inverse;
  inverse.name = rule.name + "~inverse";
  inverse.alphabet = rule.alphabet;
  for (int o = -radius; o <= radius; ++o) inverse.neighborhood.push_back(o);

  std::map<std::vector<Symbol>, Symbol> forced;
  bool consistent = true;
  for_each_anchored(rule.alphabet, support, [&](const Config& u) {
    if (!consistent) return;
    Config image = step(rule, u);
    int band_lo, band_hi;
    if (image.vacuum()) {
      if (!u.vacuum()) {
        consistent = false;  // F(u) quiescent but u is not: no left inverse
        return;
      }
      return;
    }
    band_lo = std::min(u.support_min(), image.support_min() - radius);
    band_hi = std::max(u.support_max(), image.support_max() + radius);
    std::vector<Symbol> window(static_cast<std::size_t>(width));
    for (int i = band_lo; i <= band_hi; ++i) {
      for (int j = 0; j < width; ++j)
        window[static_cast<std::size_t>(j)] = image.at(i - radius + j, q);
      auto [it, inserted] = forced.try_emplace(window, u.at(i, q));
      if (!inserted && it->second != u.at(i, q)) {
        consistent = false;
        return;
      }
    }
  });
  if (!consistent) return std::nullopt;

  const std::size_t k = static_cast<std::size_t>(rule.alphabet.size());
  std::size_t entries = 1;
  for (int i = 0; i < width; ++i) entries *= k;
  inverse.table.assign(entries, q);  // unconstrained windows never occur on images
  for (const auto& [window, value] : forced)
    inverse.table[table_index(inverse, window)] = value;

  // The construction forces consistency; re-verify the defining identity.
  bool verified = true;
  for_each_anchored(rule.alphabet, support, [&](const Config& u) {
    if (verified && step(inverse, step(rule, u)) != u) verified = false;
  });
  if (!verified) return std::nullopt;
  return inverse;
}

bool RulePredicate::matches(const PropertyReport& rep) const {
  if (injective_finite && *injective_finite != rep.injective_finite) return false;
  if (reversible && *reversible != rep.reversible) return false;
  if (open && *open != rep.open) return false;
  if (left_closing && *left_closing != rep.left_closing) return false;
  if (right_closing && *right_closing != rep.right_closing) return false;
  return true;
}

std::vector<Rule> search_rules(const SearchSpace& space, const RulePredicate& predicate) {
  static const char* kSymbols = "0123456789abcdefghijklmnopqrstuvwxyz";
  if (space.alphabet_size < 1 || space.alphabet_size > 36)
    throw std::invalid_argument("search space alphabet size out of range");
  Rule proto;
  proto.alphabet.symbols.assign(kSymbols, kSymbols + space.alphabet_size);
  proto.alphabet.quiescent = 0;
  proto.neighborhood = space.neighborhood;
  std::sort(proto.neighborhood.begin(), proto.neighborhood.end());

  const int k = space.alphabet_size;
  const int m = static_cast<int>(space.neighborhood.size());
  const double n_entries = pow_double(k, m);
  if (n_entries > 24) fail(Errc::space_too_large, "rule table too wide to search");
  const double n_tables = pow_double(k, static_cast<int>(n_entries));

  std::vector<std::uint64_t> indices;
  if (space.sample == 0) {
    if (n_tables > 2e6)
      fail(Errc::space_too_large, "table space too large; set a sample count");
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(n_tables); ++i) indices.push_back(i);
  } else {
    std::mt19937_64 rng(space.seed);
    std::set<std::uint64_t> picked;
    std::uniform_int_distribution<std::uint64_t> dist(0, static_cast<std::uint64_t>(n_tables) - 1);
    while (picked.size() < static_cast<std::size_t>(space.sample) &&
           picked.size() < static_cast<std::size_t>(n_tables))
      picked.insert(dist(rng));
    indices.assign(picked.begin(), picked.end());
  }

  std::vector<Rule> matches;
  std::vector<Symbol> allq(static_cast<std::size_t>(m), 0);
  for (std::uint64_t index : indices) {
    Rule rule = proto;
    rule.table.resize(static_cast<std::size_t>(n_entries));
    std::uint64_t rest = index;
    for (std::size_t e = 0; e < rule.table.size(); ++e) {
      rule.table[e] = static_cast<Symbol>(rest % static_cast<std::uint64_t>(k));
      rest /= static_cast<std::uint64_t>(k);
    }
    if (rule.apply(allq) != rule.alphabet.quiescent) continue;  // quiescence-preserving only
    rule.name = "search-" + std::to_string(index);
    PairGraph graph = build_pair_graph(rule);
    PropertyReport rep = classify(graph);
    if (!predicate.matches(rep)) continue;
    // Exact two-way cross-check. A brute collision refutes a claimed
    // injective rule outright; a claimed collision must be exhibited as a
    // concrete pair and re-verified by direct stepping, since the minimal
    // collision can outgrow any fixed brute-force support bound.
    if (rep.injective_finite) {
      InjectivityResult brute = brute_injective(rule, space.max_support);
      if (!brute.injective)
        throw std::logic_error("pair diagram claims injectivity but brute force collided for " +
                               rule.name);
    } else {
      auto witness = injectivity_witness(graph);
      if (!witness || witness->first == witness->second ||
          step(rule, witness->first) != step(rule, witness->second))
        throw std::logic_error("pair diagram claims a collision it cannot exhibit for " +
                               rule.name);
    }
    matches.push_back(std::move(rule));
  }
  return matches;
}

}  // namespace qca::oracle
