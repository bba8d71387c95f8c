#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qca/kernels.hpp"

using namespace qca;

namespace {

kernels::PairShape shape_for(const Rule& rule) {
  // Mirrors the embedding used by build_pair_graph for width-2 rules.
  REQUIRE(rule.width() == 2);
  kernels::PairShape s;
  s.k = rule.alphabet.size();
  s.overlap = 1;
  s.side = s.k;
  s.pref = 1;
  s.out.resize(static_cast<std::size_t>(s.side) * static_cast<std::size_t>(s.k));
  for (int u = 0; u < s.k; ++u)
    for (int a = 0; a < s.k; ++a) {
      Symbol w[] = {static_cast<Symbol>(u), static_cast<Symbol>(a)};
      s.out[static_cast<std::size_t>(u * s.k + a)] = rule.apply(w);
    }
  return s;
}

kernels::PairShape random_shape(int k, int overlap, std::uint64_t seed) {
  kernels::PairShape s;
  s.k = k;
  s.overlap = overlap;
  s.side = 1;
  for (int i = 0; i < overlap; ++i) s.side *= k;
  s.pref = s.side / k;
  std::mt19937_64 rng(seed);
  s.out.resize(static_cast<std::size_t>(s.side) * static_cast<std::size_t>(k));
  for (auto& v : s.out) v = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(k));
  return s;
}

}  // namespace

TEST_CASE("parallel edge construction matches the serial reference") {
  for (const char* name : {"xor", "and"}) {
    auto shape = shape_for(load_rule(name));
    CHECK(kernels::pair_edges_parallel(shape) == kernels::pair_edges_serial(shape));
  }
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto binary = random_shape(2, 6, seed);
    CHECK(kernels::pair_edges_parallel(binary) == kernels::pair_edges_serial(binary));
    auto ternary = random_shape(3, 3, seed);
    CHECK(kernels::pair_edges_parallel(ternary) == kernels::pair_edges_serial(ternary));
  }
}

TEST_CASE("csr rows are sorted and transpose is an involution") {
  auto shape = random_shape(2, 5, 7);
  auto g = kernels::pair_edges(shape);
  for (std::size_t v = 0; v + 1 < g.row.size(); ++v)
    for (std::int64_t e = g.row[v] + 1; e < g.row[v + 1]; ++e)
      CHECK(g.col[static_cast<std::size_t>(e - 1)] < g.col[static_cast<std::size_t>(e)]);
  CHECK(kernels::transpose(kernels::transpose(g)) == g);
}

TEST_CASE("parallel window images match the serial reference") {
  Rule rules[] = {load_rule("xor"), load_rule("shift_neg")};
  for (const Rule& rule : rules) {
    std::vector<int> window;
    for (int i = -4; i <= 5; ++i) window.push_back(i);
    auto serial = kernels::window_images_serial(rule, window);
    auto parallel = kernels::window_images_parallel(rule, window);
    REQUIRE(serial.size() == parallel.size());
    CHECK(serial == parallel);
  }
}
