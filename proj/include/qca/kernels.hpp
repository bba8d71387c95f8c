#pragma once

#include <cstdint>
#include <vector>

#include "qca/config.hpp"
#include "qca/rule.hpp"

// Data-parallel inner loops, each in a serial and an OpenMP flavor producing
// bit-identical results. The serial versions are the reference the tests and
// the benchmark compare against; library entry points pick the OpenMP flavor
// when it is compiled in.
namespace qca::kernels {

// Flattened pair-diagram edge relation. A vertex (u, v) is the integer
// u*side + v; appending the symbol pair (a, b) moves to
// ((u % pref)*k + a, (v % pref)*k + b), and the edge exists iff
// out[u*k + a] == out[v*k + b].
struct PairShape {
  int k = 0;                // alphabet size
  int overlap = 0;          // vertex word length
  std::int64_t side = 0;    // k^overlap
  std::int64_t pref = 0;    // k^(overlap-1)
  std::vector<Symbol> out;  // side*k widened local-function outputs
};

struct Csr {
  std::vector<std::int64_t> row;  // size V+1
  std::vector<std::int32_t> col;  // ascending within each row
  bool operator==(const Csr&) const = default;
};

Csr pair_edges_serial(const PairShape& shape);
Csr pair_edges_parallel(const PairShape& shape);
Csr pair_edges(const PairShape& shape);  // dispatch

Csr transpose(const Csr& g);  // deterministic reverse adjacency

// Image of every window word under one step: entry i is step() of the
// configuration whose window cells spell the base-k digits of i.
std::vector<Config> window_images_serial(const Rule& rule, const std::vector<int>& window);
std::vector<Config> window_images_parallel(const Rule& rule, const std::vector<int>& window);
std::vector<Config> window_images(const Rule& rule, const std::vector<int>& window);

}  // namespace qca::kernels
