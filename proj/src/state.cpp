#include "qca/state.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "qca/debruijn.hpp"

namespace qca {

void Superposition::add(const Config& c, Amplitude a) {
  if (a == Amplitude{}) return;
  auto [it, inserted] = amps_.try_emplace(c, a);
  if (!inserted) {
    it->second += a;
    if (it->second == Amplitude{}) amps_.erase(it);
  }
}

Amplitude Superposition::amplitude(const Config& c) const {
  auto it = amps_.find(c);
  return it == amps_.end() ? Amplitude{} : it->second;
}

double Superposition::norm() const {
  double n2 = 0;
  for (const auto& [c, a] : amps_) n2 += std::norm(a);
  return std::sqrt(n2);
}

Superposition Superposition::normalized() const {
  const double n = norm();
  if (n == 0.0) fail(Errc::zero_vector, "cannot normalize the zero vector");
  Superposition out;
  for (const auto& [c, a] : amps_) out.amps_.emplace(c, a / n);
  return out;
}

double Superposition::distance(const Superposition& other) const {
  double d2 = 0;
  auto it1 = amps_.begin();
  auto it2 = other.amps_.begin();
  ConfigLess less;
  while (it1 != amps_.end() || it2 != other.amps_.end()) {
    if (it2 == other.amps_.end() || (it1 != amps_.end() && less(it1->first, it2->first)))
      d2 += std::norm((it1++)->second);
    else if (it1 == amps_.end() || less(it2->first, it1->first))
      d2 += std::norm((it2++)->second);
    else
      d2 += std::norm(it1++->second - it2++->second);
  }
  return std::sqrt(d2);
}

Superposition make_superposition(const std::vector<std::pair<Config, Amplitude>>& pairs) {
  Superposition s;
  for (const auto& [c, a] : pairs) s.add(c, a);
  if (s.zero()) fail(Errc::zero_vector, "all amplitudes cancelled");
  return s.normalized();
}

Amplitude inner_product(const Superposition& s1, const Superposition& s2) {
  // Iterate the smaller support.
  const Superposition& small = s1.terms() <= s2.terms() ? s1 : s2;
  const Superposition& large = s1.terms() <= s2.terms() ? s2 : s1;
  const bool swapped = s1.terms() > s2.terms();
  Amplitude sum = 0;
  for (const auto& [c, a] : small.amplitudes()) {
    Amplitude b = large.amplitude(c);
    sum += swapped ? std::conj(b) * a : std::conj(a) * b;
  }
  return sum;
}

Superposition shift_superposition(const Superposition& s, int k) {
  Superposition out;
  for (const auto& [c, a] : s.amplitudes()) out.add(shift_config(c, k), a);
  return out;
}

FlaggedState apply_F(const Rule& rule, const Superposition& s) {
  FlaggedState out;
  std::set<Config, ConfigLess> images;
  for (const auto& [c, a] : s.amplitudes()) {
    Config fc = step(rule, c);
    images.insert(fc);
    out.state.add(fc, a);
  }
  out.non_isometric = images.size() < s.terms();
  return out;
}

Superposition apply_F_dagger(const Rule& rule, const Superposition& s, int halo) {
  if (halo < 0) {
    PairGraph graph = build_pair_graph(rule);
    if (!classify(graph).open)
      fail(Errc::halo_unavailable,
           "rule is not open; pass an explicit preimage halo");
    halo = default_preimage_halo(graph);
  }
  Superposition out;
  for (const auto& [c, a] : s.amplitudes())
    for (const Config& u : preimages(rule, c, halo)) out.add(u, a);
  return out;
}

void DensityOp::add(const Config& row, const Config& col, Amplitude a) {
  if (a == Amplitude{}) return;
  auto [it, inserted] = entries_.try_emplace(Key{row, col}, a);
  if (!inserted) {
    it->second += a;
    if (it->second == Amplitude{}) entries_.erase(it);
  }
}

Amplitude DensityOp::entry(const Config& row, const Config& col) const {
  auto it = entries_.find(Key{row, col});
  return it == entries_.end() ? Amplitude{} : it->second;
}

Amplitude DensityOp::trace() const {
  Amplitude t = 0;
  for (const auto& [key, a] : entries_)
    if (key.first == key.second) t += a;
  return t;
}

DensityOp outer_product(const Superposition& s) {
  DensityOp rho;
  for (const auto& [a, va] : s.amplitudes())
    for (const auto& [b, vb] : s.amplitudes()) rho.add(a, b, va * std::conj(vb));
  return rho;
}

DensityOp pure_density(const Superposition& s) {
  if (std::abs(s.norm() - 1.0) > 1e-9)
    fail(Errc::not_normalized, "pure_density requires a unit vector");
  return outer_product(s);
}

FlaggedDensity evolve(const Rule& rule, const DensityOp& rho) {
  FlaggedDensity out;
  std::set<DensityOp::Key, DensityOp::KeyLess> images;
  for (const auto& [key, a] : rho.entries()) {
    DensityOp::Key image{step(rule, key.first), step(rule, key.second)};
    images.insert(image);
    out.op.add(image.first, image.second, a);
  }
  out.non_isometric = images.size() < rho.entries().size();
  return out;
}

DensityOp convex_mix(const std::vector<std::pair<double, DensityOp>>& parts) {
  DensityOp rho;
  for (const auto& [p, part] : parts)
    for (const auto& [key, a] : part.entries()) rho.add(key.first, key.second, p * a);
  return rho;
}

Region Region::of(std::vector<int> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return Region{std::move(cells)};
}

bool Region::contains(int cell) const {
  return std::binary_search(cells.begin(), cells.end(), cell);
}

bool Region::subset_of(const Region& other) const {
  return std::includes(other.cells.begin(), other.cells.end(), cells.begin(), cells.end());
}

Region interval(int lo, int hi) {
  std::vector<int> cells;
  for (int i = lo; i <= hi; ++i) cells.push_back(i);
  return Region{std::move(cells)};
}

Region minkowski_sum(const Region& a, const Region& b) {
  std::vector<int> cells;
  cells.reserve(a.cells.size() * b.cells.size());
  for (int x : a.cells)
    for (int y : b.cells) cells.push_back(x + y);
  return Region::of(std::move(cells));
}

Region region_union(const Region& a, const Region& b) {
  std::vector<int> cells = a.cells;
  cells.insert(cells.end(), b.cells.begin(), b.cells.end());
  return Region::of(std::move(cells));
}

std::int64_t region_dim(const Region& r, int k) {
  std::int64_t dim = 1;
  for (int i = 0; i < r.size(); ++i) {
    if (dim > (std::int64_t(1) << 56) / k) return std::int64_t(1) << 62;  // saturate
    dim *= k;
  }
  return dim;
}

RegionWord restrict_config(const Config& c, const Region& r, Symbol quiescent) {
  RegionWord w(static_cast<std::size_t>(r.size()));
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = c.at(r.cells[j], quiescent);
  return w;
}

std::int64_t word_index(const RegionWord& w, int k) {
  std::int64_t idx = 0;
  for (Symbol s : w) idx = idx * k + s;
  return idx;
}

RegionWord word_of_index(std::int64_t idx, int k, int len) {
  RegionWord w(static_cast<std::size_t>(len));
  for (int j = len; j-- > 0;) {
    w[static_cast<std::size_t>(j)] = static_cast<Symbol>(idx % k);
    idx /= k;
  }
  return w;
}

Config config_from_region_word(const Region& r, const RegionWord& w, Symbol quiescent) {
  if (r.empty()) return Config{};
  std::vector<Symbol> buf(static_cast<std::size_t>(r.max() - r.min() + 1), quiescent);
  for (std::size_t j = 0; j < w.size(); ++j)
    buf[static_cast<std::size_t>(r.cells[j] - r.min())] = w[j];
  return canonicalize(r.min(), std::move(buf), quiescent);
}

std::string region_word_string(const RegionWord& w, const Alphabet& alphabet) {
  std::string s;
  for (Symbol sym : w) s.push_back(alphabet.chr(sym));
  return s;
}

bool agree_outside(const Config& a, const Config& b, const Region& r, Symbol quiescent) {
  if (a.vacuum() && b.vacuum()) return true;
  int lo = a.vacuum() ? b.support_min() : b.vacuum() ? a.support_min()
                                                     : std::min(a.support_min(), b.support_min());
  int hi = a.vacuum() ? b.support_max() : b.vacuum() ? a.support_max()
                                                     : std::max(a.support_max(), b.support_max());
  for (int i = lo; i <= hi; ++i) {
    if (r.contains(i)) continue;
    if (a.at(i, quiescent) != b.at(i, quiescent)) return false;
  }
  return true;
}

ReducedMatrix reduce(const DensityOp& rho, const Region& region, const Alphabet& alphabet) {
  const int k = alphabet.size();
  const std::int64_t dim = region_dim(region, k);
  if (dim > kReductionDimCap)
    fail(Errc::region_too_large, "reduction dimension " + std::to_string(dim) + " exceeds cap " +
                                     std::to_string(kReductionDimCap));
  ReducedMatrix out;
  out.region = region;
  out.mat = Eigen::MatrixXcd::Zero(dim, dim);
  const Symbol q = alphabet.quiescent;
  for (const auto& [key, a] : rho.entries()) {
    if (!agree_outside(key.first, key.second, region, q)) continue;
    const std::int64_t i = word_index(restrict_config(key.first, region, q), k);
    const std::int64_t j = word_index(restrict_config(key.second, region, q), k);
    out.mat(i, j) += a;
  }
  return out;
}

ReducedMatrix restrict_to(const ReducedMatrix& m, const Region& sub, const Alphabet& alphabet) {
  if (!sub.subset_of(m.region)) fail(Errc::region_mismatch, "subregion not contained in region");
  const int k = alphabet.size();
  std::vector<int> rest_cells;
  for (int cell : m.region.cells)
    if (!sub.contains(cell)) rest_cells.push_back(cell);
  Region rest{rest_cells};

  const std::int64_t sub_dim = region_dim(sub, k);
  ReducedMatrix out;
  out.region = sub;
  out.mat = Eigen::MatrixXcd::Zero(sub_dim, sub_dim);

  const std::int64_t dim = m.mat.rows();
  const Symbol q = alphabet.quiescent;
  std::vector<std::int64_t> sub_idx(static_cast<std::size_t>(dim));
  std::vector<std::int64_t> rest_idx(static_cast<std::size_t>(dim));
  for (std::int64_t i = 0; i < dim; ++i) {
    RegionWord w = word_of_index(i, k, m.region.size());
    Config c = config_from_region_word(m.region, w, q);
    sub_idx[static_cast<std::size_t>(i)] = word_index(restrict_config(c, sub, q), k);
    rest_idx[static_cast<std::size_t>(i)] = word_index(restrict_config(c, rest, q), k);
  }
  for (std::int64_t i = 0; i < dim; ++i)
    for (std::int64_t j = 0; j < dim; ++j) {
      if (rest_idx[static_cast<std::size_t>(i)] != rest_idx[static_cast<std::size_t>(j)]) continue;
      out.mat(sub_idx[static_cast<std::size_t>(i)], sub_idx[static_cast<std::size_t>(j)]) += m.mat(i, j);
    }
  return out;
}

double trace_distance(const ReducedMatrix& m1, const ReducedMatrix& m2) {
  if (m1.region != m2.region) fail(Errc::region_mismatch, "trace distance needs a common region");
  Eigen::MatrixXcd d = m1.mat - m2.mat;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(d, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

SparseReduction reduce_sparse(const DensityOp& rho, const Region& region, const Alphabet& alphabet) {
  SparseReduction out;
  const Symbol q = alphabet.quiescent;
  for (const auto& [key, a] : rho.entries()) {
    if (!agree_outside(key.first, key.second, region, q)) continue;
    auto w = std::pair{restrict_config(key.first, region, q), restrict_config(key.second, region, q)};
    out[w] += a;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == Amplitude{}; });
  return out;
}

double reduction_residual(const DensityOp& rho1, const DensityOp& rho2, const Region& region,
                          const Alphabet& alphabet) {
  SparseReduction r1 = reduce_sparse(rho1, region, alphabet);
  SparseReduction r2 = reduce_sparse(rho2, region, alphabet);
  double sum = 0;
  for (const auto& [w, a] : r1) {
    auto it = r2.find(w);
    sum += std::norm(a - (it == r2.end() ? Amplitude{} : it->second));
  }
  for (const auto& [w, a] : r2)
    if (!r1.contains(w)) sum += std::norm(a);
  return std::sqrt(sum);
}

namespace {

// Dense matrix of rho over the configurations appearing in its support.
Eigen::MatrixXcd support_matrix(const DensityOp& rho) {
  std::set<Config, ConfigLess> basis_set;
  for (const auto& [key, a] : rho.entries()) {
    basis_set.insert(key.first);
    basis_set.insert(key.second);
  }
  std::vector<Config> basis(basis_set.begin(), basis_set.end());
  auto index_of = [&](const Config& c) {
    return std::lower_bound(basis.begin(), basis.end(), c, ConfigLess{}) - basis.begin();
  };
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<std::int64_t>(basis.size()),
                                              static_cast<std::int64_t>(basis.size()));
  for (const auto& [key, a] : rho.entries()) m(index_of(key.first), index_of(key.second)) += a;
  return m;
}

}  // namespace

double hermiticity_residual(const DensityOp& rho) {
  Eigen::MatrixXcd m = support_matrix(rho);
  if (m.rows() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double density_min_eigenvalue(const DensityOp& rho) {
  Eigen::MatrixXcd m = support_matrix(rho);
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace qca
