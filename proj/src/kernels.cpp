#include "qca/kernels.hpp"

#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qca::kernels {

namespace {

inline int out_degree(const PairShape& s, std::int64_t vertex) {
  const std::int64_t u = vertex / s.side, v = vertex % s.side;
  const Symbol* ou = s.out.data() + u * s.k;
  const Symbol* ov = s.out.data() + v * s.k;
  int deg = 0;
  for (int a = 0; a < s.k; ++a)
    for (int b = 0; b < s.k; ++b) deg += (ou[a] == ov[b]);
  return deg;
}

inline void fill_row(const PairShape& s, std::int64_t vertex, std::int32_t* dst) {
  const std::int64_t u = vertex / s.side, v = vertex % s.side;
  const Symbol* ou = s.out.data() + u * s.k;
  const Symbol* ov = s.out.data() + v * s.k;
  const std::int64_t ubase = (u % s.pref) * s.k;
  const std::int64_t vbase = (v % s.pref) * s.k;
  for (int a = 0; a < s.k; ++a)
    for (int b = 0; b < s.k; ++b)
      if (ou[a] == ov[b])
        *dst++ = static_cast<std::int32_t>((ubase + a) * s.side + (vbase + b));
}

}  // namespace

Csr pair_edges_serial(const PairShape& s) {
  const std::int64_t n = s.side * s.side;
  Csr g;
  g.row.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t v = 0; v < n; ++v) g.row[static_cast<std::size_t>(v) + 1] = out_degree(s, v);
  std::partial_sum(g.row.begin(), g.row.end(), g.row.begin());
  g.col.resize(static_cast<std::size_t>(g.row.back()));
  for (std::int64_t v = 0; v < n; ++v)
    fill_row(s, v, g.col.data() + g.row[static_cast<std::size_t>(v)]);
  return g;
}

Csr pair_edges_parallel(const PairShape& s) {
  const std::int64_t n = s.side * s.side;
  Csr g;
  g.row.assign(static_cast<std::size_t>(n) + 1, 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t v = 0; v < n; ++v) g.row[static_cast<std::size_t>(v) + 1] = out_degree(s, v);
  std::partial_sum(g.row.begin(), g.row.end(), g.row.begin());
  g.col.resize(static_cast<std::size_t>(g.row.back()));
  // Each vertex owns a disjoint slice, so the result is thread-count independent.
#pragma omp parallel for schedule(static)
  for (std::int64_t v = 0; v < n; ++v)
    fill_row(s, v, g.col.data() + g.row[static_cast<std::size_t>(v)]);
  return g;
}

Csr pair_edges(const PairShape& s) {
#ifdef _OPENMP
  return pair_edges_parallel(s);
#else
  return pair_edges_serial(s);
#endif
}

Csr transpose(const Csr& g) {
  const std::size_t n = g.row.size() - 1;
  Csr t;
  t.row.assign(n + 1, 0);
  for (std::int32_t c : g.col) ++t.row[static_cast<std::size_t>(c) + 1];
  std::partial_sum(t.row.begin(), t.row.end(), t.row.begin());
  std::vector<std::int64_t> cursor(t.row.begin(), t.row.end() - 1);
  t.col.resize(g.col.size());
  // Source vertices visited in ascending order keep each reverse row sorted.
  for (std::size_t v = 0; v < n; ++v)
    for (std::int64_t e = g.row[v]; e < g.row[v + 1]; ++e)
      t.col[static_cast<std::size_t>(cursor[static_cast<std::size_t>(g.col[static_cast<std::size_t>(e)])]++)] =
          static_cast<std::int32_t>(v);
  return t;
}

namespace {

Config window_config(const Rule& rule, const std::vector<int>& window, std::int64_t code) {
  const int k = rule.alphabet.size();
  std::vector<Symbol> syms(window.size());
  for (std::size_t j = window.size(); j-- > 0;) {
    syms[j] = static_cast<Symbol>(code % k);
    code /= k;
  }
  // Window cells need not be contiguous; spread them onto the hull.
  const int lo = window.front(), hi = window.back();
  std::vector<Symbol> buf(static_cast<std::size_t>(hi - lo + 1), rule.alphabet.quiescent);
  for (std::size_t j = 0; j < window.size(); ++j)
    buf[static_cast<std::size_t>(window[j] - lo)] = syms[j];
  return canonicalize(lo, std::move(buf), rule.alphabet.quiescent);
}

}  // namespace

std::vector<Config> window_images_serial(const Rule& rule, const std::vector<int>& window) {
  std::int64_t n = 1;
  for (std::size_t j = 0; j < window.size(); ++j) n *= rule.alphabet.size();
  std::vector<Config> images(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    images[static_cast<std::size_t>(i)] = step(rule, window_config(rule, window, i));
  return images;
}

std::vector<Config> window_images_parallel(const Rule& rule, const std::vector<int>& window) {
  std::int64_t n = 1;
  for (std::size_t j = 0; j < window.size(); ++j) n *= rule.alphabet.size();
  std::vector<Config> images(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    images[static_cast<std::size_t>(i)] = step(rule, window_config(rule, window, i));
  return images;
}

std::vector<Config> window_images(const Rule& rule, const std::vector<int>& window) {
#ifdef _OPENMP
  return window_images_parallel(rule, window);
#else
  return window_images_serial(rule, window);
#endif
}

}  // namespace qca::kernels
