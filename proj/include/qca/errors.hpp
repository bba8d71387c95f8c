#pragma once

#include <stdexcept>
#include <string>

namespace qca {

// Every failure mode of the library, one code each. The CLI maps codes to
// process exit codes (see exit_code_for).
enum class Errc {
  parse_error,
  missing_table_entry,
  quiescence_violation,
  duplicate_symbol,
  empty_neighborhood,
  graph_too_large,
  not_open,
  rule_is_open,
  rule_not_injective,
  rule_reversible,
  zero_vector,
  not_normalized,
  region_too_large,
  region_mismatch,
  window_too_large,
  window_too_small,
  halo_unavailable,
  bob_cell_equal,
  space_too_large,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// Exit-code contract: 0 success, 2 input error, 3 resource cap,
// 4 empty/degenerate result, 5 precondition ruled out by theorem.
inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::graph_too_large:
    case Errc::region_too_large:
    case Errc::window_too_large:
    case Errc::space_too_large:
      return 3;
    case Errc::zero_vector:
      return 4;
    case Errc::rule_reversible:
    case Errc::rule_is_open:
    case Errc::not_open:
      return 5;
    default:
      return 2;
  }
}

}  // namespace qca
