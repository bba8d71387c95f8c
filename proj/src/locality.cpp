#include "qca/locality.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>

namespace qca {

std::int64_t window_cap() {
  if (const char* env = std::getenv("QCA_MAX_WINDOW")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultWindowCap;
}

namespace {

Region negate(const Region& r) {
  std::vector<int> cells;
  for (int c : r.cells) cells.push_back(-c);
  return Region::of(std::move(cells));
}

Region with_zero(const Region& r) { return region_union(r, Region{{0}}); }

Region rule_neighborhood(const Rule& rule) { return Region{rule.neighborhood}; }

Config mask_region(const Config& c, const Region& region, Symbol q) {
  if (c.vacuum()) return c;
  std::vector<Symbol> buf = c.word;
  for (int cell : region.cells)
    if (cell >= c.support_min() && cell <= c.support_max())
      buf[static_cast<std::size_t>(cell - c.offset)] = q;
  return canonicalize(c.offset, std::move(buf), q);
}

// Shared precomputation: images of all window words, their restriction to
// the operator region, and grouping by the image outside that region.
struct ConjugationContext {
  std::int64_t dim = 0;
  std::vector<std::int64_t> region_idx;           // image word index on op region
  std::vector<std::vector<std::int64_t>> groups;  // window indices with equal image outside
};

ConjugationContext make_context(const Rule& rule, const Region& op_region, const Region& window) {
  const int k = rule.alphabet.size();
  const Symbol q = rule.alphabet.quiescent;
  ConjugationContext ctx;
  ctx.dim = region_dim(window, k);
  std::vector<Config> images = kernels::window_images(rule, window.cells);
  ctx.region_idx.resize(images.size());
  std::map<Config, std::vector<std::int64_t>, ConfigLess> by_mask;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(images.size()); ++i) {
    const Config& fc = images[static_cast<std::size_t>(i)];
    ctx.region_idx[static_cast<std::size_t>(i)] = word_index(restrict_config(fc, op_region, q), k);
    by_mask[mask_region(fc, op_region, q)].push_back(i);
  }
  for (auto& [mask, members] : by_mask) ctx.groups.push_back(std::move(members));
  return ctx;
}

void validate_window(const Rule& rule, const Region& op_region, const Region& window) {
  const std::int64_t dim = region_dim(window, rule.alphabet.size());
  if (dim > window_cap())
    fail(Errc::window_too_large, "window enumerates " + std::to_string(dim) +
                                     " configurations (cap " + std::to_string(window_cap()) + ")");
  Region needed = region_union(op_region, minkowski_sum(op_region, rule_neighborhood(rule)));
  if (!needed.subset_of(window))
    fail(Errc::window_too_small, "window must contain the operator region plus the rule neighborhood");
}

}  // namespace

Eigen::MatrixXcd conjugate_local_operator(const Rule& rule, const LocalOperator& op,
                                          const Region& window) {
  validate_window(rule, op.region, window);
  const int k = rule.alphabet.size();
  if (op.mat.rows() != region_dim(op.region, k) || op.mat.cols() != op.mat.rows())
    throw std::invalid_argument("local operator matrix has the wrong dimension");
  ConjugationContext ctx = make_context(rule, op.region, window);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(ctx.dim, ctx.dim);
  for (const auto& group : ctx.groups)
    for (std::int64_t i : group)
      for (std::int64_t j : group)
        m(i, j) = op.mat(ctx.region_idx[static_cast<std::size_t>(i)],
                         ctx.region_idx[static_cast<std::size_t>(j)]);
  return m;
}

LocalizationCheck check_localized(const Eigen::MatrixXcd& m, const Region& region,
                                  const Region& window, int alphabet_size, double tol) {
  if (!region.subset_of(window))
    fail(Errc::window_too_small, "localization region must lie inside the window");
  const int k = alphabet_size;
  const std::int64_t dim = m.rows();

  std::vector<int> rest_cells;
  for (int cell : window.cells)
    if (!region.contains(cell)) rest_cells.push_back(cell);
  Region rest{rest_cells};
  const std::int64_t rdim = region_dim(region, k);
  const std::int64_t cdim = region_dim(rest, k);

  std::vector<std::int64_t> r_of(static_cast<std::size_t>(dim));
  std::vector<std::int64_t> c_of(static_cast<std::size_t>(dim));
  for (std::int64_t i = 0; i < dim; ++i) {
    RegionWord w = word_of_index(i, k, window.size());
    RegionWord rw, cw;
    for (int j = 0; j < window.size(); ++j)
      (region.contains(window.cells[static_cast<std::size_t>(j)]) ? rw : cw)
          .push_back(w[static_cast<std::size_t>(j)]);
    r_of[static_cast<std::size_t>(i)] = word_index(rw, k);
    c_of[static_cast<std::size_t>(i)] = word_index(cw, k);
  }

  // (a) no coupling across the complement
  for (std::int64_t i = 0; i < dim; ++i)
    for (std::int64_t j = 0; j < dim; ++j)
      if (c_of[static_cast<std::size_t>(i)] != c_of[static_cast<std::size_t>(j)] &&
          std::abs(m(i, j)) > tol)
        return {false, i, j};

  // (b) all diagonal blocks equal the first one
  std::vector<std::int64_t> index_table(static_cast<std::size_t>(rdim * cdim));
  for (std::int64_t i = 0; i < dim; ++i)
    index_table[static_cast<std::size_t>(r_of[static_cast<std::size_t>(i)] * cdim +
                                         c_of[static_cast<std::size_t>(i)])] = i;
  auto at = [&](std::int64_t r, std::int64_t c) {
    return index_table[static_cast<std::size_t>(r * cdim + c)];
  };
  for (std::int64_t c = 1; c < cdim; ++c)
    for (std::int64_t r1 = 0; r1 < rdim; ++r1)
      for (std::int64_t r2 = 0; r2 < rdim; ++r2)
        if (std::abs(m(at(r1, c), at(r2, c)) - m(at(r1, 0), at(r2, 0))) > tol)
          return {false, at(r1, c), at(r2, c)};
  return {true, -1, -1};
}

Region default_locality_window(const Rule& rule, const Region& region, const Region& neighborhood) {
  Region an = minkowski_sum(region, with_zero(neighborhood));
  Region reach = minkowski_sum(an, with_zero(rule_neighborhood(rule)));
  Region all = region_union(region, region_union(an, reach));
  return interval(all.min() - 2, all.max() + 2);
}

LocalityReport verify_locality(const Rule& rule, const Region& region, const Region& neighborhood,
                               const Region& window) {
  LocalityReport rep;
  rep.region = region;
  rep.neighborhood = neighborhood;
  rep.window = window;

  const int k = rule.alphabet.size();
  Region an = minkowski_sum(region, neighborhood);
  Region needed = region_union(
      region_union(region, an),
      region_union(minkowski_sum(region, rule_neighborhood(rule)),
                   minkowski_sum(an, rule_neighborhood(rule))));
  if (!needed.subset_of(window))
    fail(Errc::window_too_small, "window must contain A + N + N_C");

  if (region_dim(window, k) > window_cap()) {
    rep.verdict = Verdict::inconclusive;
    return rep;
  }

  ConjugationContext ctx = make_context(rule, region, window);
  const std::int64_t adim = region_dim(region, k);
  const std::int64_t n_ops = adim * adim;
  std::vector<LocalizationCheck> results(static_cast<std::size_t>(n_ops));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t zt = 0; zt < n_ops; ++zt) {
    const std::int64_t z = zt / adim, t = zt % adim;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(ctx.dim, ctx.dim);
    for (const auto& group : ctx.groups)
      for (std::int64_t i : group) {
        if (ctx.region_idx[static_cast<std::size_t>(i)] != z) continue;
        for (std::int64_t j : group)
          if (ctx.region_idx[static_cast<std::size_t>(j)] == t) m(i, j) = 1.0;
      }
    results[static_cast<std::size_t>(zt)] = check_localized(m, an, window, k);
  }

  for (std::int64_t zt = 0; zt < n_ops; ++zt) {
    const auto& r = results[static_cast<std::size_t>(zt)];
    if (!r.localized) {
      rep.verdict = Verdict::violated;
      rep.op_row = zt / adim;
      rep.op_col = zt % adim;
      rep.witness_row = r.witness_row;
      rep.witness_col = r.witness_col;
      return rep;
    }
  }
  rep.verdict = Verdict::verified;
  return rep;
}

Region certified_neighborhood(const Rule& rule) {
  Region nc = with_zero(rule_neighborhood(rule));
  Region ni = with_zero(Region{inverse_neighborhood(rule, {0})});
  return minkowski_sum(minkowski_sum(nc, negate(nc)), ni);
}

Superposition controlled_phase(const Superposition& s, int cell, Symbol symbol, Symbol quiescent) {
  Superposition out;
  for (const auto& [c, a] : s.amplitudes())
    out.add(c, c.at(cell, quiescent) == symbol ? -a : a);
  return out;
}

FalsifyReport falsify_uniform_locality(const Rule& rule, const Region& neighborhood) {
  if (neighborhood.empty()) throw std::invalid_argument("falsify: neighborhood must be nonempty");
  PairGraph graph = build_pair_graph(rule);
  PropertyReport rep = classify(graph);
  if (rep.reversible)
    fail(Errc::rule_reversible, "rule is reversible: its quantization is uniformly local");
  if (!rep.injective_finite)
    fail(Errc::rule_not_injective, "falsifier requires injectivity on finite configurations");

  const Symbol q = rule.alphabet.quiescent;
  for (int k = 1; k <= 64; ++k) {
    WitnessPair w = rep.open ? biinfinite_witness(graph, k) : pump_witness(graph, k);
    Region a = Region::of(w.diff_set);
    Region an = minkowski_sum(a, neighborhood);
    std::vector<int> dxy = diff_cells(w.x, w.y, q);
    // Bob needs a difference cell outside A+N; otherwise pump further.
    int bob = 0;
    int best_dist = -1;
    for (int cell : dxy) {
      if (an.contains(cell)) continue;
      int dist = std::numeric_limits<int>::max();
      for (int c : an.cells) dist = std::min(dist, std::abs(cell - c));
      if (dist > best_dist) {
        best_dist = dist;
        bob = cell;
      }
    }
    if (best_dist < 0) continue;

    FalsifyReport out;
    out.x = w.x;
    out.y = w.y;
    out.a = a;
    out.a_plus_n = an;
    out.bob_cell = bob;
    out.pump_count = k;

    Superposition phi_plus = make_superposition({{w.x, 1.0}, {w.y, 1.0}});
    Superposition phi_minus = make_superposition({{w.x, 1.0}, {w.y, -1.0}});
    out.reduction_residual =
        reduction_residual(pure_density(phi_plus), pure_density(phi_minus), an, rule.alphabet);

    Superposition psi_plus = apply_F(rule, phi_plus).state;
    Superposition psi_minus = apply_F(rule, phi_minus).state;
    ReducedMatrix sigma_plus = reduce(outer_product(psi_plus), a, rule.alphabet);
    ReducedMatrix sigma_minus = reduce(outer_product(psi_minus), a, rule.alphabet);
    out.evolved_trace_distance = trace_distance(sigma_plus, sigma_minus);
    return out;
  }
  throw std::logic_error("falsifier failed to separate the witness from A+N");
}

SignallingReport signalling_experiment(const Rule& rule, const Config& x, const Config& y,
                                       int bob_cell, const Region& alice_region) {
  const Symbol q = rule.alphabet.quiescent;
  if (x.at(bob_cell, q) == y.at(bob_cell, q))
    fail(Errc::bob_cell_equal, "x and y agree at Bob's cell; no controlled phase is possible");

  SignallingReport rep;
  rep.x = x;
  rep.y = y;
  rep.bob_cell = bob_cell;
  rep.alice_region = alice_region;

  Superposition phi_plus = make_superposition({{x, 1.0}, {y, 1.0}});
  Superposition phi_minus = controlled_phase(phi_plus, bob_cell, y.at(bob_cell, q), q);

  Superposition psi_plus = apply_F(rule, phi_plus).state;
  Superposition psi_minus = apply_F(rule, phi_minus).state;
  rep.sigma_plus = reduce(outer_product(psi_plus), alice_region, rule.alphabet);
  rep.sigma_minus = reduce(outer_product(psi_minus), alice_region, rule.alphabet);
  rep.distance = trace_distance(rep.sigma_plus, rep.sigma_minus);
  rep.success_probability = (1.0 + rep.distance) / 2.0;
  return rep;
}

SingleSidedResult single_sided_witness_search(const Rule& rule, Side side, int bound) {
  PairGraph graph = build_pair_graph(rule);
  PropertyReport rep = classify(graph);
  if (!rep.injective_finite)
    fail(Errc::rule_not_injective, "witness search requires injectivity on finite configurations");
  SingleSidedResult result;
  // Alice left of Bob needs the connection running into the diagonal; Alice
  // right of Bob the mirrored one.
  auto w = pump_witness_oriented(graph, 3, side == Side::left, bound);
  if (w) {
    result.exhausted = false;
    result.witness = std::move(w);
  }
  return result;
}

Amplitude local_expectation(const DensityOp& rho, const LocalOperator& op,
                            const Alphabet& alphabet) {
  const Symbol q = alphabet.quiescent;
  const int k = alphabet.size();
  Amplitude sum = 0;
  for (const auto& [key, val] : rho.entries()) {
    // Tr(M rho) = sum over rho entries (b, a) of M(a, b).
    const Config& b = key.first;
    const Config& a = key.second;
    if (!agree_outside(a, b, op.region, q)) continue;
    sum += op.mat(word_index(restrict_config(a, op.region, q), k),
                  word_index(restrict_config(b, op.region, q), k)) *
           val;
  }
  return sum;
}

}  // namespace qca
