#pragma once

#include <stdexcept>
#include <string>

namespace triplelink {

// One exception type, tagged with the condition that raised it.  Callers that
// care about the class of failure (validation vs numerical residual) can
// switch on the code; everything carries a human-readable message.
enum class errc {
  near_antipode,
  degenerate_plane,
  on_binding,
  non_positive_height,
  coincident_points,
  near_pole,
  pole_on_curve,
  non_integer_result,
  not_open_book,
  degenerate_critical,
  shared_critical_value,
  invalid_link,
  alias_bound,
  non_mean_zero,
  not_exact,
  non_integer_degree,
  nonzero_linking,
  grid_too_large,
  bad_symbol,
  invalid_diagram,
  non_generic_path,
  not_isolated,
  not_generic,
  resolution_failure,
  winding_residual,
  not_isogonal,
  no_convergence,
  bad_input,
  io_error,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

  // Validation failures exit with 2, numerical-residual failures with 3.
  bool is_numerical() const {
    switch (code_) {
      case errc::non_integer_result:
      case errc::non_integer_degree:
      case errc::nonzero_linking:
      case errc::winding_residual:
      case errc::resolution_failure:
      case errc::no_convergence:
        return true;
      default:
        return false;
    }
  }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace triplelink
