// Compares the serial reference kernels against the OpenMP ones on inputs
// large enough to show a difference, and verifies both produce identical
// output.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qca/kernels.hpp"
#include "qca/rule.hpp"

namespace {

using namespace qca;
using Clock = std::chrono::steady_clock;

template <typename Fn>
double best_of(int runs, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < runs; ++i) {
    auto t0 = Clock::now();
    fn();
    auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

Rule make_xor() {
  Rule rule;
  rule.name = "xor";
  rule.alphabet.symbols = "01";
  rule.alphabet.quiescent = 0;
  rule.neighborhood = {0, 1};
  rule.table = {0, 1, 1, 0};
  return rule;
}

kernels::PairShape random_shape(int k, int overlap, std::uint64_t seed) {
  kernels::PairShape s;
  s.k = k;
  s.overlap = overlap;
  s.side = 1;
  for (int i = 0; i < overlap; ++i) s.side *= k;
  s.pref = s.side / k;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, k - 1);
  s.out.resize(static_cast<std::size_t>(s.side) * static_cast<std::size_t>(k));
  for (auto& v : s.out) v = static_cast<Symbol>(dist(rng));
  return s;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both columns run the serial code path\n");
#endif
  std::printf("%-28s %12s %12s %9s  %s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "outputs");

  {
    auto shape = random_shape(2, 9, 12345);  // 262144 vertices
    kernels::Csr serial, parallel;
    double ts = best_of(3, [&] { serial = kernels::pair_edges_serial(shape); });
    double tp = best_of(3, [&] { parallel = kernels::pair_edges_parallel(shape); });
    std::printf("%-28s %12.2f %12.2f %8.2fx  %s (%zu edges)\n", "pair_edges (2^18 vertices)", ts,
                tp, ts / tp, serial == parallel ? "identical" : "MISMATCH", serial.col.size());
  }
  {
    auto shape = random_shape(3, 6, 999);  // 531441 vertices
    kernels::Csr serial, parallel;
    double ts = best_of(3, [&] { serial = kernels::pair_edges_serial(shape); });
    double tp = best_of(3, [&] { parallel = kernels::pair_edges_parallel(shape); });
    std::printf("%-28s %12.2f %12.2f %8.2fx  %s (%zu edges)\n", "pair_edges (3^12 vertices)", ts,
                tp, ts / tp, serial == parallel ? "identical" : "MISMATCH", serial.col.size());
  }
  {
    Rule rule = make_xor();
    std::vector<int> window;
    for (int i = -8; i <= 9; ++i) window.push_back(i);  // 2^18 window words
    std::vector<Config> serial, parallel;
    double ts = best_of(3, [&] { serial = kernels::window_images_serial(rule, window); });
    double tp = best_of(3, [&] { parallel = kernels::window_images_parallel(rule, window); });
    std::printf("%-28s %12.2f %12.2f %8.2fx  %s (%zu images)\n", "window_images (18 cells)", ts,
                tp, ts / tp, serial == parallel ? "identical" : "MISMATCH", serial.size());
  }
  return 0;
}
