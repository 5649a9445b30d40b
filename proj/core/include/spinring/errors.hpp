#pragma once

#include <stdexcept>
#include <string>

namespace spinring {

enum class ErrorCode {
  non_positive_frequency,
  negative_loss,
  emitter_loss_unsupported,
  ring_too_small,
  frequency_collapse,
  below_critical,
  singular_denominator,
  no_transition,
  no_root,
  zero_z,
  not_steady,
  eigen_failure,
  beta_overflow,
  z_at_half,
  marginal_drift,
  diverged,
  no_convergence,
  step_size_underflow,
  non_finite_state,
  invalid_argument,
  io_error,
};

const char* to_string(ErrorCode code);

// All structured failures carry a code plus an optional numeric payload
// (final residual, offending eigenvalue, ...) for machine-readable reporting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, double detail = 0.0)
      : std::runtime_error(message), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  double detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  double detail_;
};

}  // namespace spinring
