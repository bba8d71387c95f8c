#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qca/config.hpp"
#include "qca/kernels.hpp"
#include "qca/rule.hpp"

namespace qca {

// The pair diagram: vertices are pairs (u, v) of equal-length words over the
// alphabet, edges append one symbol to each side under the constraint that the
// two local outputs agree. Bi-infinite paths correspond exactly to pairs of
// configurations with equal images. The diagonal {(u, u)} encodes x = y.
//
// The rule's neighborhood is embedded into its enclosing interval
// [window_lo, window_hi], widened on the right to width >= 2 so that one edge
// consumes one new cell and emits one output cell; vertex words have length
// window width - 1 (for XOR over {0,1} this is the 4-vertex diagram).
struct PairGraph {
  Rule rule;
  int window_lo = 0, window_hi = 0;
  int overlap = 0;              // vertex word length
  std::int64_t side = 0;        // k^overlap distinct words
  std::int64_t vertex_count = 0;
  std::int32_t allq = 0;

  kernels::Csr adj, radj;

  std::vector<std::int32_t> scc_id;
  std::int32_t scc_count = 0;
  std::vector<char> scc_cyclic;  // indexed by scc id

  // Closure flags used by every decision procedure. Reachability from the
  // diagonal equals reachability from the all-quiescent vertex because the
  // diagonal is strongly connected.
  std::vector<char> reach_from_allq, coreach_to_allq, reaches_cycle, reached_from_cycle;

  std::int64_t u_of(std::int32_t v) const { return v / side; }
  std::int64_t v_of(std::int32_t v) const { return v % side; }
  bool diagonal(std::int32_t v) const { return u_of(v) == v_of(v); }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(adj.col.size()); }

  // The words of a vertex, most significant cell first.
  std::vector<Symbol> word_u(std::int32_t v) const;
  std::vector<Symbol> word_v(std::int32_t v) const;
};

inline constexpr std::int64_t kDefaultGraphCap = 1'000'000;

PairGraph build_pair_graph(const Rule& rule, std::int64_t max_vertices = kDefaultGraphCap);

struct PropertyReport {
  bool injective_finite = false;
  bool reversible = false;
  bool left_closing = false;
  bool right_closing = false;
  bool open = false;
  std::int64_t vertex_count = 0;
  int offdiagonal_scc_count = 0;
};

PropertyReport classify(const PairGraph& graph);
PropertyReport classify(const Rule& rule, std::int64_t max_vertices = kDefaultGraphCap);

// When the rule collides on finite configurations, a concrete pair x != y
// with step(x) = step(y), spelled from a diagonal-to-diagonal path through
// an off-diagonal vertex. nullopt iff injective on finite configurations.
std::optional<std::pair<Config, Config>> injectivity_witness(const PairGraph& graph);

// All u with step(u) = c whose support lies within support(c) widened by
// halo cells on each side (for the all-quiescent target: within [-halo,
// halo]). Complete whenever halo covers the confinement bound (see
// default_preimage_halo); sorted in the Config total order.
std::vector<Config> preimages(const Rule& rule, const Config& c, int halo);

// A finite set N_I with: F(x) = F(y) outside `region` implies x = y outside
// region + N_I, valid for every finite region. Computed from the exact
// off-diagonal escape lengths of the pair diagram; requires an open rule.
std::vector<int> inverse_neighborhood(const PairGraph& graph, const std::vector<int>& region);
std::vector<int> inverse_neighborhood(const Rule& rule, const std::vector<int>& region);

// The coarse fallback interval [-(r+r+l), r+r+l] with r the embedding radius
// and l the vertex count; always contains the exact answer.
std::vector<int> rough_inverse_neighborhood(const PairGraph& graph);

// Halo sufficient for preimage completeness under an injective open rule.
int default_preimage_halo(const PairGraph& graph);

struct WitnessPair {
  Config x, y;
  std::vector<int> diff_set;  // cells where the images differ (the finite set A)
  int remote_diff = 0;        // the x/y difference cell farthest from A
  int pump_count = 0;
};

// The pumping construction for non-open injective rules: an off-diagonal
// cycle (v, v') connected to the diagonal spun k times, yielding witnesses
// whose image difference set A is k-independent while the remote x/y
// difference recedes linearly in k. Mirrored when the connection runs out of
// the diagonal instead of in.
WitnessPair pump_witness(const Rule& rule, int k);
WitnessPair pump_witness(const PairGraph& graph, int k);

// One fixed orientation of the construction. into_diagonal follows the
// connection cycle -> diagonal (remote difference recedes to the right);
// otherwise the reflected rule is used and the witness mirrored back
// (remote difference recedes to the left). path_bound limits the length of
// the connecting path searched; nullopt when no anchor exists within it.
std::optional<WitnessPair> pump_witness_oriented(const PairGraph& graph, int k, bool into_diagonal,
                                                 std::int64_t path_bound);

// For open non-reversible rules, where no cycle connects to the diagonal:
// a witness built around an off-diagonal vertex of a bi-infinite path, both
// of its anchoring cycles spun k times. The image difference set sits near
// the two ends; the middle x/y differences recede from it linearly in k.
WitnessPair biinfinite_witness(const PairGraph& graph, int k);

std::string export_dot(const PairGraph& graph);

// Cells where two configurations differ.
std::vector<int> diff_cells(const Config& a, const Config& b, Symbol quiescent);

}  // namespace qca
