#include "qca/debruijn.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qca {

namespace {

// Longest run of consecutive off-diagonal vertices an equal-image path can
// sustain inside a member set; vertex count of the longest path in the
// induced subgraph. The caller guarantees the induced subgraph is acyclic.
int longest_member_path(const PairGraph& g, const std::vector<char>& member) {
  const std::int64_t n = g.vertex_count;
  std::vector<int> len(static_cast<std::size_t>(n), 0);
  std::vector<char> color(static_cast<std::size_t>(n), 0);  // 0 new, 1 open, 2 done
  int best = 0;
  std::vector<std::pair<std::int32_t, std::int64_t>> stack;
  for (std::int64_t r = 0; r < n; ++r) {
    if (!member[static_cast<std::size_t>(r)] || color[static_cast<std::size_t>(r)] == 2) continue;
    stack.emplace_back(static_cast<std::int32_t>(r), g.adj.row[static_cast<std::size_t>(r)]);
    color[static_cast<std::size_t>(r)] = 1;
    while (!stack.empty()) {
      auto& [v, e] = stack.back();
      if (e < g.adj.row[static_cast<std::size_t>(v) + 1]) {
        std::int32_t w = g.adj.col[static_cast<std::size_t>(e++)];
        if (!member[static_cast<std::size_t>(w)]) continue;
        if (color[static_cast<std::size_t>(w)] == 1)
          throw std::logic_error("escape subgraph has a cycle; rule is not open");
        if (color[static_cast<std::size_t>(w)] == 0) {
          color[static_cast<std::size_t>(w)] = 1;
          stack.emplace_back(w, g.adj.row[static_cast<std::size_t>(w)]);
        }
      } else {
        int m = 0;
        for (std::int64_t e2 = g.adj.row[static_cast<std::size_t>(v)];
             e2 < g.adj.row[static_cast<std::size_t>(v) + 1]; ++e2) {
          std::int32_t w = g.adj.col[static_cast<std::size_t>(e2)];
          if (member[static_cast<std::size_t>(w)]) m = std::max(m, len[static_cast<std::size_t>(w)]);
        }
        len[static_cast<std::size_t>(v)] = 1 + m;
        best = std::max(best, len[static_cast<std::size_t>(v)]);
        color[static_cast<std::size_t>(v)] = 2;
        stack.pop_back();
      }
    }
  }
  return best;
}

std::vector<char> closure(const kernels::Csr& g, std::vector<std::int32_t> seeds) {
  std::vector<char> mark(g.row.size() - 1, 0);
  std::deque<std::int32_t> queue;
  for (std::int32_t s : seeds)
    if (!mark[static_cast<std::size_t>(s)]) {
      mark[static_cast<std::size_t>(s)] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    std::int32_t v = queue.front();
    queue.pop_front();
    for (std::int64_t e = g.row[static_cast<std::size_t>(v)]; e < g.row[static_cast<std::size_t>(v) + 1]; ++e) {
      std::int32_t w = g.col[static_cast<std::size_t>(e)];
      if (!mark[static_cast<std::size_t>(w)]) {
        mark[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  return mark;
}

void tarjan_scc(const kernels::Csr& g, std::vector<std::int32_t>& scc_id, std::int32_t& scc_count) {
  const std::int64_t n = static_cast<std::int64_t>(g.row.size()) - 1;
  constexpr std::int32_t kNone = -1;
  std::vector<std::int32_t> index(static_cast<std::size_t>(n), kNone);
  std::vector<std::int32_t> low(static_cast<std::size_t>(n), 0);
  std::vector<char> onstack(static_cast<std::size_t>(n), 0);
  std::vector<std::int32_t> stk;
  std::vector<std::pair<std::int32_t, std::int64_t>> call;
  scc_id.assign(static_cast<std::size_t>(n), kNone);
  scc_count = 0;
  std::int32_t counter = 0;

  for (std::int64_t r = 0; r < n; ++r) {
    if (index[static_cast<std::size_t>(r)] != kNone) continue;
    call.emplace_back(static_cast<std::int32_t>(r), g.row[static_cast<std::size_t>(r)]);
    index[static_cast<std::size_t>(r)] = low[static_cast<std::size_t>(r)] = counter++;
    stk.push_back(static_cast<std::int32_t>(r));
    onstack[static_cast<std::size_t>(r)] = 1;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < g.row[static_cast<std::size_t>(v) + 1]) {
        std::int32_t w = g.col[static_cast<std::size_t>(e++)];
        if (index[static_cast<std::size_t>(w)] == kNone) {
          index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
          stk.push_back(w);
          onstack[static_cast<std::size_t>(w)] = 1;
          call.emplace_back(w, g.row[static_cast<std::size_t>(w)]);
        } else if (onstack[static_cast<std::size_t>(w)]) {
          low[static_cast<std::size_t>(v)] =
              std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
        }
      } else {
        std::int32_t v_done = v;
        call.pop_back();
        if (!call.empty()) {
          std::int32_t parent = call.back().first;
          low[static_cast<std::size_t>(parent)] =
              std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(v_done)]);
        }
        if (low[static_cast<std::size_t>(v_done)] == index[static_cast<std::size_t>(v_done)]) {
          while (true) {
            std::int32_t w = stk.back();
            stk.pop_back();
            onstack[static_cast<std::size_t>(w)] = 0;
            scc_id[static_cast<std::size_t>(w)] = scc_count;
            if (w == v_done) break;
          }
          ++scc_count;
        }
      }
    }
  }
}

bool has_edge(const kernels::Csr& g, std::int32_t src, std::int32_t dst) {
  auto begin = g.col.begin() + static_cast<std::ptrdiff_t>(g.row[static_cast<std::size_t>(src)]);
  auto end = g.col.begin() + static_cast<std::ptrdiff_t>(g.row[static_cast<std::size_t>(src) + 1]);
  return std::binary_search(begin, end, dst);
}

std::vector<Symbol> word_of_code(std::int64_t code, int k, int len) {
  std::vector<Symbol> w(static_cast<std::size_t>(len));
  for (int j = len; j-- > 0;) {
    w[static_cast<std::size_t>(j)] = static_cast<Symbol>(code % k);
    code /= k;
  }
  return w;
}

}  // namespace

std::vector<Symbol> PairGraph::word_u(std::int32_t v) const {
  return word_of_code(u_of(v), rule.alphabet.size(), overlap);
}
std::vector<Symbol> PairGraph::word_v(std::int32_t v) const {
  return word_of_code(v_of(v), rule.alphabet.size(), overlap);
}

PairGraph build_pair_graph(const Rule& rule, std::int64_t max_vertices) {
  PairGraph g;
  g.rule = rule;
  g.window_lo = rule.min_offset();
  g.window_hi = rule.max_offset();
  if (g.window_hi == g.window_lo) ++g.window_hi;  // width >= 2 so the overlap is nonempty
  g.overlap = g.window_hi - g.window_lo;

  const int k = rule.alphabet.size();
  double projected = 1.0;
  for (int i = 0; i < 2 * g.overlap; ++i) projected *= k;
  if (projected > static_cast<double>(max_vertices))
    fail(Errc::graph_too_large, "pair diagram would have " + std::to_string(projected) +
                                    " vertices (cap " + std::to_string(max_vertices) + ")");

  g.side = 1;
  for (int i = 0; i < g.overlap; ++i) g.side *= k;
  g.vertex_count = g.side * g.side;

  // Widened local function: the output of each (vertex word + new symbol)
  // window, read at the rule's true neighborhood offsets.
  kernels::PairShape shape;
  shape.k = k;
  shape.overlap = g.overlap;
  shape.side = g.side;
  shape.pref = g.side / k;
  shape.out.resize(static_cast<std::size_t>(g.side) * static_cast<std::size_t>(k));
  const int m = g.overlap + 1;
  std::vector<std::size_t> pos;
  for (int o : rule.neighborhood) pos.push_back(static_cast<std::size_t>(o - g.window_lo));
  std::vector<Symbol> window(static_cast<std::size_t>(m));
  std::vector<Symbol> narrow(static_cast<std::size_t>(rule.width()));
  for (std::int64_t code = 0; code < g.side; ++code) {
    auto w = word_of_code(code, k, g.overlap);
    std::copy(w.begin(), w.end(), window.begin());
    for (int a = 0; a < k; ++a) {
      window[static_cast<std::size_t>(m - 1)] = static_cast<Symbol>(a);
      for (std::size_t j = 0; j < pos.size(); ++j) narrow[j] = window[pos[j]];
      shape.out[static_cast<std::size_t>(code) * static_cast<std::size_t>(k) +
                static_cast<std::size_t>(a)] = rule.apply(narrow);
    }
  }

  g.adj = kernels::pair_edges(shape);
  g.radj = kernels::transpose(g.adj);

  const Symbol q = rule.alphabet.quiescent;
  std::int64_t qcode = 0;
  for (int i = 0; i < g.overlap; ++i) qcode = qcode * k + q;
  g.allq = static_cast<std::int32_t>(qcode * g.side + qcode);

  tarjan_scc(g.adj, g.scc_id, g.scc_count);
  std::vector<std::int32_t> scc_size(static_cast<std::size_t>(g.scc_count), 0);
  for (std::int32_t id : g.scc_id) ++scc_size[static_cast<std::size_t>(id)];
  g.scc_cyclic.assign(static_cast<std::size_t>(g.scc_count), 0);
  for (std::int64_t v = 0; v < g.vertex_count; ++v) {
    std::int32_t id = g.scc_id[static_cast<std::size_t>(v)];
    if (scc_size[static_cast<std::size_t>(id)] > 1)
      g.scc_cyclic[static_cast<std::size_t>(id)] = 1;
    else if (has_edge(g.adj, static_cast<std::int32_t>(v), static_cast<std::int32_t>(v)))
      g.scc_cyclic[static_cast<std::size_t>(id)] = 1;
  }

  std::vector<std::int32_t> cyclic_vertices;
  for (std::int64_t v = 0; v < g.vertex_count; ++v)
    if (g.scc_cyclic[static_cast<std::size_t>(g.scc_id[static_cast<std::size_t>(v)])])
      cyclic_vertices.push_back(static_cast<std::int32_t>(v));

  g.reach_from_allq = closure(g.adj, {g.allq});
  g.coreach_to_allq = closure(g.radj, {g.allq});
  g.reached_from_cycle = closure(g.adj, cyclic_vertices);
  g.reaches_cycle = closure(g.radj, cyclic_vertices);
  return g;
}

PropertyReport classify(const PairGraph& g) {
  PropertyReport rep;
  rep.vertex_count = g.vertex_count;
  rep.injective_finite = true;
  rep.left_closing = true;
  rep.right_closing = true;
  rep.reversible = true;
  std::vector<char> scc_offdiag(static_cast<std::size_t>(g.scc_count), 0);
  for (std::int64_t i = 0; i < g.vertex_count; ++i) {
    const auto v = static_cast<std::size_t>(i);
    if (g.diagonal(static_cast<std::int32_t>(i))) continue;
    scc_offdiag[static_cast<std::size_t>(g.scc_id[v])] = 1;
    // Off-diagonal vertex on a finite-to-finite equal-image path: F collides.
    if (g.reach_from_allq[v] && g.coreach_to_allq[v]) rep.injective_finite = false;
    // Infinite path leaving the diagonal forward / entering it backward.
    if (g.reach_from_allq[v] && g.reaches_cycle[v]) rep.left_closing = false;
    if (g.coreach_to_allq[v] && g.reached_from_cycle[v]) rep.right_closing = false;
    // Off-diagonal vertex on any bi-infinite path: F collides on C_inf.
    if (g.reaches_cycle[v] && g.reached_from_cycle[v]) rep.reversible = false;
  }
  rep.open = rep.left_closing && rep.right_closing;
  rep.offdiagonal_scc_count = static_cast<int>(
      std::count(scc_offdiag.begin(), scc_offdiag.end(), char(1)));
  if (rep.reversible && !rep.open) throw std::logic_error("classify: reversible but not open");
  if (rep.open && !rep.injective_finite) throw std::logic_error("classify: open but not injective");
  return rep;
}

PropertyReport classify(const Rule& rule, std::int64_t max_vertices) {
  return classify(build_pair_graph(rule, max_vertices));
}

std::vector<int> diff_cells(const Config& a, const Config& b, Symbol quiescent) {
  std::vector<int> cells;
  if (a.vacuum() && b.vacuum()) return cells;
  int lo = a.vacuum() ? b.support_min() : b.vacuum() ? a.support_min()
                                                     : std::min(a.support_min(), b.support_min());
  int hi = a.vacuum() ? b.support_max() : b.vacuum() ? a.support_max()
                                                     : std::max(a.support_max(), b.support_max());
  for (int i = lo; i <= hi; ++i)
    if (a.at(i, quiescent) != b.at(i, quiescent)) cells.push_back(i);
  return cells;
}

std::vector<Config> preimages(const Rule& rule, const Config& c, int halo) {
  if (halo < 0) throw std::invalid_argument("preimages: halo must be >= 0");
  const Symbol q = rule.alphabet.quiescent;
  const int lo = rule.min_offset(), hi = rule.max_offset();
  const int wlo = (c.vacuum() ? 0 : c.support_min()) - halo;
  const int whi = (c.vacuum() ? 0 : c.support_max()) + halo;
  // Cells outside [wlo,whi] are quiescent, so outputs outside the reachable
  // band are quiescent; a target non-quiescent there has no preimage here.
  if (!c.vacuum() && (c.support_min() < wlo - hi || c.support_max() > whi - lo)) return {};

  const int n = whi - wlo + 1;
  std::vector<Symbol> buf(static_cast<std::size_t>(n), q);
  std::vector<Config> found;
  std::vector<Symbol> window(static_cast<std::size_t>(rule.width()));

  auto cell_at = [&](int cell) -> Symbol {
    if (cell < wlo || cell > whi) return q;
    return buf[static_cast<std::size_t>(cell - wlo)];
  };
  auto output_at = [&](int i) -> Symbol {
    for (int j = 0; j < rule.width(); ++j)
      window[static_cast<std::size_t>(j)] = cell_at(i + rule.neighborhood[static_cast<std::size_t>(j)]);
    return rule.apply(window);
  };

  // Depth-first assignment left to right; output cell i is checkable once
  // cell i+hi is fixed, which prunes hard for injective-ish rules.
  auto rec = [&](auto&& self, int t) -> void {
    if (t > whi) {
      for (int i = whi - hi + 1; i <= whi - lo; ++i)
        if (output_at(i) != c.at(i, q)) return;
      found.push_back(canonicalize(wlo, buf, q));
      return;
    }
    for (int s = 0; s < rule.alphabet.size(); ++s) {
      buf[static_cast<std::size_t>(t - wlo)] = static_cast<Symbol>(s);
      const int i = t - hi;
      if (i >= wlo - hi && output_at(i) != c.at(i, q)) continue;
      self(self, t + 1);
    }
    buf[static_cast<std::size_t>(t - wlo)] = q;
  };
  rec(rec, wlo);

  std::sort(found.begin(), found.end(), ConfigLess{});
  return found;
}

std::vector<int> inverse_neighborhood(const PairGraph& g, const std::vector<int>& region) {
  (void)region;  // one bound is valid for every finite region
  PropertyReport rep = classify(g);
  if (!rep.open) fail(Errc::not_open, "inverse neighborhood requires an open rule");

  std::vector<char> member_in(static_cast<std::size_t>(g.vertex_count), 0);
  std::vector<char> member_out(static_cast<std::size_t>(g.vertex_count), 0);
  for (std::int64_t i = 0; i < g.vertex_count; ++i) {
    const auto v = static_cast<std::size_t>(i);
    if (g.diagonal(static_cast<std::int32_t>(i))) continue;
    if (g.reach_from_allq[v]) member_in[v] = 1;
    if (g.coreach_to_allq[v]) member_out[v] = 1;
  }
  const int e_in = longest_member_path(g, member_in);
  const int e_out = longest_member_path(g, member_out);

  const int left = std::min(0, g.window_hi - e_in);
  const int right = std::max(0, g.window_lo + e_out);
  std::vector<int> cells;
  for (int i = left; i <= right; ++i) cells.push_back(i);
  return cells;
}

std::vector<int> inverse_neighborhood(const Rule& rule, const std::vector<int>& region) {
  return inverse_neighborhood(build_pair_graph(rule), region);
}

std::vector<int> rough_inverse_neighborhood(const PairGraph& g) {
  const std::int64_t r = std::max(std::abs(g.window_lo), std::abs(g.window_hi));
  const std::int64_t bound = r + r + g.vertex_count;
  std::vector<int> cells;
  for (std::int64_t i = -bound; i <= bound; ++i) cells.push_back(static_cast<int>(i));
  return cells;
}

int default_preimage_halo(const PairGraph& g) {
  auto ni = inverse_neighborhood(g, {0});
  return std::max(-ni.front(), ni.back());
}

namespace {

std::vector<std::int32_t> bfs_path(const kernels::Csr& g, std::int32_t src, std::int32_t dst) {
  const std::size_t n = g.row.size() - 1;
  std::vector<std::int32_t> parent(n, -2);
  std::deque<std::int32_t> queue{src};
  parent[static_cast<std::size_t>(src)] = -1;
  while (!queue.empty()) {
    std::int32_t v = queue.front();
    queue.pop_front();
    if (v == dst) break;
    for (std::int64_t e = g.row[static_cast<std::size_t>(v)]; e < g.row[static_cast<std::size_t>(v) + 1]; ++e) {
      std::int32_t w = g.col[static_cast<std::size_t>(e)];
      if (parent[static_cast<std::size_t>(w)] == -2) {
        parent[static_cast<std::size_t>(w)] = v;
        queue.push_back(w);
      }
    }
  }
  if (parent[static_cast<std::size_t>(dst)] == -2) return {};
  std::vector<std::int32_t> path{dst};
  while (path.back() != src) path.push_back(parent[static_cast<std::size_t>(path.back())]);
  std::reverse(path.begin(), path.end());
  return path;
}

// Shortest cycle through v inside its SCC, as the vertex sequence v,...,v.
std::vector<std::int32_t> cycle_through(const PairGraph& g, std::int32_t v) {
  const std::int32_t id = g.scc_id[static_cast<std::size_t>(v)];
  std::vector<std::int32_t> parent(static_cast<std::size_t>(g.vertex_count), -2);
  std::deque<std::int32_t> queue{v};
  parent[static_cast<std::size_t>(v)] = -1;
  while (!queue.empty()) {
    std::int32_t u = queue.front();
    queue.pop_front();
    for (std::int64_t e = g.adj.row[static_cast<std::size_t>(u)]; e < g.adj.row[static_cast<std::size_t>(u) + 1];
         ++e) {
      std::int32_t w = g.adj.col[static_cast<std::size_t>(e)];
      if (g.scc_id[static_cast<std::size_t>(w)] != id) continue;
      if (w == v) {
        std::vector<std::int32_t> path{u};
        while (path.back() != v && parent[static_cast<std::size_t>(path.back())] >= 0)
          path.push_back(parent[static_cast<std::size_t>(path.back())]);
        if (path.back() != v) path.push_back(v);
        std::reverse(path.begin(), path.end());
        path.push_back(v);
        return path;  // v,...,u,v
      }
      if (parent[static_cast<std::size_t>(w)] == -2) {
        parent[static_cast<std::size_t>(w)] = u;
        queue.push_back(w);
      }
    }
  }
  throw std::logic_error("cycle_through: vertex not on a cycle");
}

// Spell the two configurations along a vertex walk whose first window starts
// at cell 0. Consecutive overlap consistency is the caller's responsibility;
// where it is intentionally broken (the quiescent jumps) the walk simply is
// not passed through here.
std::pair<Config, Config> assemble_walk(const PairGraph& g, const std::vector<std::int32_t>& walk) {
  const int k = g.rule.alphabet.size();
  std::vector<Symbol> xs = g.word_u(walk.front());
  std::vector<Symbol> ys = g.word_v(walk.front());
  for (std::size_t i = 1; i < walk.size(); ++i) {
    xs.push_back(static_cast<Symbol>(g.u_of(walk[i]) % k));
    ys.push_back(static_cast<Symbol>(g.v_of(walk[i]) % k));
  }
  const Symbol q = g.rule.alphabet.quiescent;
  return {canonicalize(0, std::move(xs), q), canonicalize(0, std::move(ys), q)};
}

struct PumpAnchor {
  std::vector<std::int32_t> cycle;  // v,...,v
  std::vector<std::int32_t> tail;   // v,...,allq
};

// An off-diagonal cycle with a path into the diagonal (i.e. to the
// all-quiescent vertex) no longer than path_bound edges. Exists for
// unbounded path_bound iff the rule is not right-closing. One candidate
// vertex per strongly connected component is enough.
bool find_pump_anchor(const PairGraph& g, PumpAnchor& anchor, std::int64_t path_bound) {
  bool found = false;
  std::size_t best_key[3] = {0, 0, 0};
  std::vector<char> scc_seen(static_cast<std::size_t>(g.scc_count), 0);
  for (std::int64_t i = 0; i < g.vertex_count; ++i) {
    const auto v = static_cast<std::size_t>(i);
    if (g.diagonal(static_cast<std::int32_t>(i))) continue;
    const auto id = static_cast<std::size_t>(g.scc_id[v]);
    if (scc_seen[id]) continue;
    if (!g.scc_cyclic[id]) continue;
    if (!g.coreach_to_allq[v]) continue;
    scc_seen[id] = 1;
    auto tail = bfs_path(g.adj, static_cast<std::int32_t>(i), g.allq);
    if (static_cast<std::int64_t>(tail.size()) - 1 > path_bound) continue;
    auto cycle = cycle_through(g, static_cast<std::int32_t>(i));
    std::size_t key[3] = {cycle.size(), tail.size(), static_cast<std::size_t>(i)};
    if (!found || std::lexicographical_compare(key, key + 3, best_key, best_key + 3)) {
      found = true;
      std::copy(key, key + 3, best_key);
      anchor.cycle = std::move(cycle);
      anchor.tail = std::move(tail);
    }
  }
  return found;
}

WitnessPair pump_from_anchor(const PairGraph& g, const PumpAnchor& anchor, int k) {
  std::vector<std::int32_t> walk{anchor.cycle.front()};
  for (int rep = 0; rep < k; ++rep)
    walk.insert(walk.end(), anchor.cycle.begin() + 1, anchor.cycle.end());
  walk.insert(walk.end(), anchor.tail.begin() + 1, anchor.tail.end());
  auto [x, y] = assemble_walk(g, walk);

  WitnessPair w;
  w.x = x;
  w.y = y;
  w.pump_count = k;
  const Symbol q = g.rule.alphabet.quiescent;
  w.diff_set = diff_cells(step(g.rule, x), step(g.rule, y), q);
  auto dxy = diff_cells(x, y, q);
  if (w.diff_set.empty() || dxy.empty())
    throw std::logic_error("pump witness degenerate; rule not injective?");
  w.remote_diff = dxy.back();
  return w;
}

}  // namespace

std::optional<WitnessPair> pump_witness_oriented(const PairGraph& g, int k, bool into_diagonal,
                                                 std::int64_t path_bound) {
  if (k < 1) throw std::invalid_argument("pump witness: k must be >= 1");
  if (into_diagonal) {
    PumpAnchor anchor;
    if (!find_pump_anchor(g, anchor, path_bound)) return std::nullopt;
    return pump_from_anchor(g, anchor, k);
  }
  // Connection runs out of the diagonal: work on the mirror image and
  // reflect the witness back; the far side then lies to the left.
  PairGraph mirror = build_pair_graph(g.rule.reflected());
  PumpAnchor anchor;
  if (!find_pump_anchor(mirror, anchor, path_bound)) return std::nullopt;
  WitnessPair w = pump_from_anchor(mirror, anchor, k);
  WitnessPair out;
  out.x = reflect_config(w.x);
  out.y = reflect_config(w.y);
  out.pump_count = k;
  const Symbol q = g.rule.alphabet.quiescent;
  out.diff_set = diff_cells(step(g.rule, out.x), step(g.rule, out.y), q);
  auto dxy = diff_cells(out.x, out.y, q);
  out.remote_diff = dxy.front();
  return out;
}

WitnessPair pump_witness(const PairGraph& g, int k) {
  if (k < 1) throw std::invalid_argument("pump_witness: k must be >= 1");
  PropertyReport rep = classify(g);
  if (rep.open) fail(Errc::rule_is_open, "rule is open; no pumped witness exists");
  if (!rep.injective_finite)
    fail(Errc::rule_not_injective, "pump witness requires injectivity on finite configurations");
  constexpr auto unbounded = std::numeric_limits<std::int64_t>::max();
  if (auto w = pump_witness_oriented(g, k, true, unbounded)) return *w;
  if (auto w = pump_witness_oriented(g, k, false, unbounded)) return *w;
  throw std::logic_error("non-open rule without pump anchor on either side");
}

WitnessPair pump_witness(const Rule& rule, int k) {
  return pump_witness(build_pair_graph(rule), k);
}

std::optional<std::pair<Config, Config>> injectivity_witness(const PairGraph& g) {
  std::int32_t w = -1;
  for (std::int64_t i = 0; i < g.vertex_count; ++i) {
    const auto v = static_cast<std::size_t>(i);
    if (g.diagonal(static_cast<std::int32_t>(i))) continue;
    if (g.reach_from_allq[v] && g.coreach_to_allq[v]) {
      w = static_cast<std::int32_t>(i);
      break;
    }
  }
  if (w < 0) return std::nullopt;
  std::vector<std::int32_t> walk = bfs_path(g.adj, g.allq, w);
  std::vector<std::int32_t> tail = bfs_path(g.adj, w, g.allq);
  walk.insert(walk.end(), tail.begin() + 1, tail.end());
  // All edges are genuine and both ends sit on the all-quiescent vertex, so
  // the two spelled configurations share their image exactly.
  return assemble_walk(g, walk);
}

WitnessPair biinfinite_witness(const PairGraph& g, int k) {
  if (k < 1) throw std::invalid_argument("biinfinite_witness: k must be >= 1");
  // Smallest off-diagonal vertex on some bi-infinite path.
  std::int32_t w0 = -1;
  for (std::int64_t i = 0; i < g.vertex_count; ++i) {
    const auto v = static_cast<std::size_t>(i);
    if (g.diagonal(static_cast<std::int32_t>(i))) continue;
    if (g.reaches_cycle[v] && g.reached_from_cycle[v]) {
      w0 = static_cast<std::int32_t>(i);
      break;
    }
  }
  if (w0 < 0) fail(Errc::rule_reversible, "rule is reversible; no witness exists");

  // Nearest cycles before and behind w0, then spin both.
  auto nearest_cyclic = [&](const kernels::Csr& graph) {
    std::vector<std::int32_t> parent(static_cast<std::size_t>(g.vertex_count), -2);
    std::deque<std::int32_t> queue{w0};
    parent[static_cast<std::size_t>(w0)] = -1;
    while (!queue.empty()) {
      std::int32_t v = queue.front();
      queue.pop_front();
      if (g.scc_cyclic[static_cast<std::size_t>(g.scc_id[static_cast<std::size_t>(v)])]) {
        std::vector<std::int32_t> path{v};
        while (path.back() != w0) path.push_back(parent[static_cast<std::size_t>(path.back())]);
        std::reverse(path.begin(), path.end());
        return path;  // w0,...,cyclic vertex
      }
      for (std::int64_t e = graph.row[static_cast<std::size_t>(v)]; e < graph.row[static_cast<std::size_t>(v) + 1];
           ++e) {
        std::int32_t w = graph.col[static_cast<std::size_t>(e)];
        if (parent[static_cast<std::size_t>(w)] == -2) {
          parent[static_cast<std::size_t>(w)] = v;
          queue.push_back(w);
        }
      }
    }
    throw std::logic_error("bi-infinite vertex without anchoring cycle");
  };
  std::vector<std::int32_t> back = nearest_cyclic(g.radj);  // w0,...,c1 along reverse edges
  std::vector<std::int32_t> fwd = nearest_cyclic(g.adj);    // w0,...,c2 along forward edges
  std::reverse(back.begin(), back.end());                   // c1,...,w0
  const std::int32_t c1 = back.front(), c2 = fwd.back();
  std::vector<std::int32_t> cyc1 = cycle_through(g, c1);
  std::vector<std::int32_t> cyc2 = cycle_through(g, c2);

  std::vector<std::int32_t> walk{c1};
  for (int rep = 0; rep < k; ++rep) walk.insert(walk.end(), cyc1.begin() + 1, cyc1.end());
  walk.insert(walk.end(), back.begin() + 1, back.end());
  walk.insert(walk.end(), fwd.begin() + 1, fwd.end());
  for (int rep = 0; rep < k; ++rep) walk.insert(walk.end(), cyc2.begin() + 1, cyc2.end());

  auto [x, y] = assemble_walk(g, walk);
  WitnessPair w;
  w.x = x;
  w.y = y;
  w.pump_count = k;
  const Symbol q = g.rule.alphabet.quiescent;
  w.diff_set = diff_cells(step(g.rule, x), step(g.rule, y), q);
  auto dxy = diff_cells(x, y, q);
  if (w.diff_set.empty() || dxy.empty())
    throw std::logic_error("bi-infinite witness degenerate; rule not injective?");
  // The x/y difference farthest from the image difference set.
  auto dist_to_a = [&](int cell) {
    int best = std::numeric_limits<int>::max();
    for (int a : w.diff_set) best = std::min(best, std::abs(cell - a));
    return best;
  };
  w.remote_diff = dxy.front();
  for (int cell : dxy)
    if (dist_to_a(cell) > dist_to_a(w.remote_diff)) w.remote_diff = cell;
  return w;
}

std::string export_dot(const PairGraph& g) {
  std::ostringstream os;
  const auto& alphabet = g.rule.alphabet;
  auto label = [&](std::int32_t v) {
    std::string s;
    for (Symbol sym : g.word_u(v)) s.push_back(alphabet.chr(sym));
    s.push_back('|');
    for (Symbol sym : g.word_v(v)) s.push_back(alphabet.chr(sym));
    return s;
  };
  os << "digraph pair_diagram {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle];\n";
  for (std::int64_t v = 0; v < g.vertex_count; ++v) {
    os << "  \"" << label(static_cast<std::int32_t>(v)) << "\"";
    if (g.diagonal(static_cast<std::int32_t>(v)))
      os << " [shape=doublecircle, style=filled, fillcolor=lightgrey]";
    os << ";\n";
  }
  for (std::int64_t v = 0; v < g.vertex_count; ++v)
    for (std::int64_t e = g.adj.row[static_cast<std::size_t>(v)]; e < g.adj.row[static_cast<std::size_t>(v) + 1];
         ++e)
      os << "  \"" << label(static_cast<std::int32_t>(v)) << "\" -> \""
         << label(g.adj.col[static_cast<std::size_t>(e)]) << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace qca
