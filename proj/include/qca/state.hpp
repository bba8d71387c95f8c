#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qca/config.hpp"
#include "qca/rule.hpp"

namespace qca {

using Amplitude = std::complex<double>;

// Sparse vector over the configuration basis. Only exact zeros are dropped;
// normalization is always explicit.
class Superposition {
public:
  using Map = std::map<Config, Amplitude, ConfigLess>;

  Superposition() = default;

  void add(const Config& c, Amplitude a);
  Amplitude amplitude(const Config& c) const;
  const Map& amplitudes() const { return amps_; }
  std::size_t terms() const { return amps_.size(); }
  bool zero() const { return amps_.empty(); }

  double norm() const;
  Superposition normalized() const;  // ZeroVector on the zero vector
  double distance(const Superposition& other) const;

private:
  Map amps_;
};

Superposition make_superposition(const std::vector<std::pair<Config, Amplitude>>& pairs);

Amplitude inner_product(const Superposition& s1, const Superposition& s2);

// Linear extension of the shift to basis vectors.
Superposition shift_superposition(const Superposition& s, int k);

struct FlaggedState {
  Superposition state;
  bool non_isometric = false;  // set when two basis configurations collided
};

// The linearization applied to a sparse vector; no renormalization.
FlaggedState apply_F(const Rule& rule, const Superposition& s);

// The adjoint: each basis configuration is replaced by the sum of its
// preimages. halo < 0 derives the confinement halo from the pair diagram,
// which requires an open rule (HaloUnavailable otherwise). The result is the
// zero vector when nothing in the support has a preimage.
Superposition apply_F_dagger(const Rule& rule, const Superposition& s, int halo = -1);

// Sparse Hermitian operator over the configuration basis, keyed (row, col).
class DensityOp {
public:
  using Key = std::pair<Config, Config>;
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const {
      if (a.first != b.first) return config_less(a.first, b.first);
      return config_less(a.second, b.second);
    }
  };
  using Map = std::map<Key, Amplitude, KeyLess>;

  void add(const Config& row, const Config& col, Amplitude a);
  Amplitude entry(const Config& row, const Config& col) const;
  const Map& entries() const { return entries_; }
  Amplitude trace() const;

private:
  Map entries_;
};

DensityOp outer_product(const Superposition& s);  // |s><s| with no checks
DensityOp pure_density(const Superposition& s);   // NotNormalized unless unit norm

struct FlaggedDensity {
  DensityOp op;
  bool non_isometric = false;
};

// Conjugation by the linearization, entrywise: (F a, F b) += rho(a, b).
FlaggedDensity evolve(const Rule& rule, const DensityOp& rho);

DensityOp convex_mix(const std::vector<std::pair<double, DensityOp>>& parts);

// A finite sorted set of cell indices.
struct Region {
  std::vector<int> cells;

  static Region of(std::vector<int> cells);
  int size() const { return static_cast<int>(cells.size()); }
  bool empty() const { return cells.empty(); }
  bool contains(int cell) const;
  bool subset_of(const Region& other) const;
  int min() const { return cells.front(); }
  int max() const { return cells.back(); }
  bool operator==(const Region&) const = default;
};

Region interval(int lo, int hi);
Region minkowski_sum(const Region& a, const Region& b);
Region region_union(const Region& a, const Region& b);

// Words over a region, enumerated base-k with the leftmost cell most
// significant; this fixed order indexes every dense matrix below.
using RegionWord = std::vector<Symbol>;

std::int64_t region_dim(const Region& r, int k);  // k^|r|, saturating
RegionWord restrict_config(const Config& c, const Region& r, Symbol quiescent);
std::int64_t word_index(const RegionWord& w, int k);
RegionWord word_of_index(std::int64_t idx, int k, int len);
Config config_from_region_word(const Region& r, const RegionWord& w, Symbol quiescent);
std::string region_word_string(const RegionWord& w, const Alphabet& alphabet);

bool agree_outside(const Config& a, const Config& b, const Region& r, Symbol quiescent);

inline constexpr std::int64_t kReductionDimCap = 4096;

// Partial trace over the complement of a region, as a dense matrix.
struct ReducedMatrix {
  Region region;
  Eigen::MatrixXcd mat;
};

ReducedMatrix reduce(const DensityOp& rho, const Region& region, const Alphabet& alphabet);

// Partial trace of an already-reduced matrix onto a subregion.
ReducedMatrix restrict_to(const ReducedMatrix& m, const Region& sub, const Alphabet& alphabet);

double trace_distance(const ReducedMatrix& m1, const ReducedMatrix& m2);

// Exact sparse reduction for regions past the dense cap: only word pairs
// carried by the state appear.
using SparseReduction = std::map<std::pair<RegionWord, RegionWord>, Amplitude>;
SparseReduction reduce_sparse(const DensityOp& rho, const Region& region, const Alphabet& alphabet);

// Frobenius norm of reduce(rho1, region) - reduce(rho2, region), computed sparsely.
double reduction_residual(const DensityOp& rho1, const DensityOp& rho2, const Region& region,
                          const Alphabet& alphabet);

// Diagnostics over the finite support basis (tests and the acceptance suite).
double hermiticity_residual(const DensityOp& rho);
double density_min_eigenvalue(const DensityOp& rho);

}  // namespace qca
