#include "spinring/model.hpp"

#include <cmath>
#include <sstream>

namespace spinring {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::non_positive_frequency: return "non_positive_frequency";
    case ErrorCode::negative_loss: return "negative_loss";
    case ErrorCode::emitter_loss_unsupported: return "emitter_loss_unsupported";
    case ErrorCode::ring_too_small: return "ring_too_small";
    case ErrorCode::frequency_collapse: return "frequency_collapse";
    case ErrorCode::below_critical: return "below_critical";
    case ErrorCode::singular_denominator: return "singular_denominator";
    case ErrorCode::no_transition: return "no_transition";
    case ErrorCode::no_root: return "no_root";
    case ErrorCode::zero_z: return "zero_z";
    case ErrorCode::not_steady: return "not_steady";
    case ErrorCode::eigen_failure: return "eigen_failure";
    case ErrorCode::beta_overflow: return "beta_overflow";
    case ErrorCode::z_at_half: return "z_at_half";
    case ErrorCode::marginal_drift: return "marginal_drift";
    case ErrorCode::diverged: return "diverged";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::step_size_underflow: return "step_size_underflow";
    case ErrorCode::non_finite_state: return "non_finite_state";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

std::vector<double> expand_ladder(const DetuningLadder& ladder, int n_cavities) {
  if (n_cavities < 3)
    throw Error(ErrorCode::ring_too_small,
                "ring needs at least 3 cavities, got " + std::to_string(n_cavities));
  std::vector<double> freqs(static_cast<std::size_t>(n_cavities));
  for (int n = 0; n < n_cavities; ++n)
    freqs[static_cast<std::size_t>(n)] = ladder.base + n * ladder.step;
  return freqs;
}

bool ValidatedParams::symmetric(double tol) const {
  double lo = freqs_.front(), hi = freqs_.front();
  for (double w : freqs_) {
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  return hi - lo <= tol;
}

ValidatedParams ValidatedParams::with_coupling(double g) const {
  ValidatedParams out = *this;
  if (g < 0.0)
    throw Error(ErrorCode::invalid_argument, "coupling must be non-negative");
  out.coupling_ = g;
  return out;
}

ValidatedParams ValidatedParams::with_loss(double kappa) const {
  ValidatedParams out = *this;
  if (kappa < 0.0) throw Error(ErrorCode::negative_loss, "cavity loss must be >= 0");
  out.loss_ = kappa;
  return out;
}

ValidatedParams ValidatedParams::with_hopping(double j) const {
  ValidatedParams out = *this;
  out.hopping_ = j;
  return out;
}

ValidatedParams ValidatedParams::with_freqs(std::vector<double> freqs) const {
  SystemParams raw_params = raw();
  raw_params.omega_emitter = 1.0;
  raw_params.cavity_freqs = std::move(freqs);
  ValidatedParams out = validate(raw_params);
  out.scale_ = scale_;
  return out;
}

SystemParams ValidatedParams::raw() const {
  SystemParams params;
  params.omega_emitter = 1.0;
  params.cavity_freqs = freqs_;
  params.hopping = hopping_;
  params.coupling = coupling_;
  params.cavity_loss = loss_;
  params.emitter_loss = 0.0;
  params.n_emitters = n_emitters_;
  return params;
}

ValidatedParams validate(const SystemParams& params) {
  if (!(params.omega_emitter > 0.0))
    throw Error(ErrorCode::non_positive_frequency, "emitter frequency must be > 0");
  const int n = static_cast<int>(params.cavity_freqs.size());
  if (n < 3)
    throw Error(ErrorCode::ring_too_small,
                "ring needs at least 3 cavities, got " + std::to_string(n));
  for (double w : params.cavity_freqs) {
    if (!(w > 0.0)) {
      std::ostringstream msg;
      msg << "cavity frequency must be > 0, got " << w;
      throw Error(ErrorCode::non_positive_frequency, msg.str());
    }
  }
  if (params.cavity_loss < 0.0)
    throw Error(ErrorCode::negative_loss, "cavity loss must be >= 0");
  if (params.emitter_loss != 0.0)
    throw Error(ErrorCode::emitter_loss_unsupported,
                "emitter loss is fixed to zero in this model");
  if (params.coupling < 0.0)
    throw Error(ErrorCode::invalid_argument, "coupling must be non-negative");
  if (params.n_emitters && *params.n_emitters < 1)
    throw Error(ErrorCode::invalid_argument, "emitter count must be >= 1");

  ValidatedParams out;
  const double scale = params.omega_emitter;
  out.freqs_.resize(params.cavity_freqs.size());
  for (std::size_t i = 0; i < params.cavity_freqs.size(); ++i)
    out.freqs_[i] = params.cavity_freqs[i] / scale;
  out.hopping_ = params.hopping / scale;
  out.coupling_ = params.coupling / scale;
  out.loss_ = params.cavity_loss / scale;
  out.scale_ = scale;
  out.n_emitters_ = params.n_emitters;
  return out;
}

ValidatedParams validate_ladder(double omega_emitter, const DetuningLadder& ladder,
                                int n_cavities, double hopping, double coupling,
                                double cavity_loss,
                                std::optional<long long> n_emitters) {
  SystemParams params;
  params.omega_emitter = omega_emitter;
  params.cavity_freqs = expand_ladder(ladder, n_cavities);
  params.hopping = hopping;
  params.coupling = coupling;
  params.cavity_loss = cavity_loss;
  params.n_emitters = n_emitters;
  return validate(params);
}

}  // namespace spinring
