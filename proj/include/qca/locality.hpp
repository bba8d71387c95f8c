#pragma once

#include <optional>

#include <Eigen/Core>

#include "qca/debruijn.hpp"
#include "qca/state.hpp"

namespace qca {

// An operator of the form A (x) Id: a dense matrix over the words of a finite
// region, acting as the identity everywhere else.
struct LocalOperator {
  Region region;
  Eigen::MatrixXcd mat;  // dimension k^|region|
};

inline constexpr std::int64_t kDefaultWindowCap = 65536;

// Enumeration cap for window-supported configurations; the QCA_MAX_WINDOW
// environment variable overrides the default.
std::int64_t window_cap();

// M[u][v] = <F(u)| (op (x) Id) |F(v)> over all configurations supported in
// the window: op's matrix element between the restricted images when the
// images agree outside op.region, else 0.
Eigen::MatrixXcd conjugate_local_operator(const Rule& rule, const LocalOperator& op,
                                          const Region& window);

struct LocalizationCheck {
  bool localized = false;
  // On failure, the offending pair of window-word indices.
  std::int64_t witness_row = -1;
  std::int64_t witness_col = -1;
};

// Is the matrix of the form A (x) Id with A supported on `region`, within
// tolerance? Checks (a) entries between words differing outside the region
// vanish and (b) the diagonal blocks indexed by the outside word coincide.
LocalizationCheck check_localized(const Eigen::MatrixXcd& m, const Region& region,
                                  const Region& window, int alphabet_size, double tol = 1e-9);

enum class Verdict { verified, violated, inconclusive };

struct LocalityReport {
  Region region;        // A
  Region neighborhood;  // N
  Region window;        // W
  Verdict verdict = Verdict::inconclusive;
  // Violation witness: basis operator |z><t| and offending window-word pair.
  std::int64_t op_row = -1;
  std::int64_t op_col = -1;
  std::int64_t witness_row = -1;
  std::int64_t witness_col = -1;
};

// Tests condition (ii) on a finite window: every basis operator on A must
// conjugate into an operator localized in A+N. Verdict inconclusive when the
// window enumeration cap is hit.
LocalityReport verify_locality(const Rule& rule, const Region& region, const Region& neighborhood,
                               const Region& window);

// A + N + N_C widened by two cells: the default truncation policy.
Region default_locality_window(const Rule& rule, const Region& region, const Region& neighborhood);

// The certified neighborhood N_C - N_C + N_I for open rules, with 0
// adjoined to both constituents; verify_locality passes at it for every
// finite region.
Region certified_neighborhood(const Rule& rule);

// Sign flip on every basis configuration carrying `symbol` at `cell`.
Superposition controlled_phase(const Superposition& s, int cell, Symbol symbol, Symbol quiescent);

struct FalsifyReport {
  Config x, y;
  Region a;            // image difference set A
  Region a_plus_n;
  int bob_cell = 0;    // x/y difference outside A+N
  int pump_count = 0;
  double reduction_residual = 0;      // || rho+|A+N - rho-|A+N ||_F, exact sparse
  double evolved_trace_distance = 0;  // distance of the evolved reductions on A
};

// The witness refuting "local at A with neighborhood N" for every N:
// states (|x> +- |y>)/sqrt(2) whose reductions on A+N coincide while the
// evolved reductions on A are distinguishable.
FalsifyReport falsify_uniform_locality(const Rule& rule, const Region& neighborhood);

struct SignallingReport {
  Config x, y;
  int bob_cell = 0;
  Region alice_region;
  ReducedMatrix sigma_plus, sigma_minus;
  double distance = 0;
  double success_probability = 0;  // (1 + distance) / 2
};

// Bob either applies his controlled phase or does not; one step later Alice
// reads her region. Reported analytically via the trace distance.
SignallingReport signalling_experiment(const Rule& rule, const Config& x, const Config& y,
                                       int bob_cell, const Region& alice_region);

enum class Side { left, right };

struct SingleSidedResult {
  bool exhausted = true;
  std::optional<WitnessPair> witness;
};

// Search for a witness whose difference set A lies entirely on `side` of the
// remote x/y difference cell, via diagonal-connection paths of length at most
// `bound`. Open rules exhaust; non-open injective rules yield a witness.
SingleSidedResult single_sided_witness_search(const Rule& rule, Side side, int bound);

// Tr((op (x) Id) rho), evaluated sparsely.
Amplitude local_expectation(const DensityOp& rho, const LocalOperator& op,
                            const Alphabet& alphabet);

}  // namespace qca
