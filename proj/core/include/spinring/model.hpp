#pragma once

#include <optional>
#include <vector>

#include "spinring/errors.hpp"

namespace spinring {

// Raw parameter set of the spin-cavity ring: one collective emitter ensemble
// at frequency omega_emitter coupled with strength `coupling` to every cavity
// of a ring of n_cavities modes with nearest-neighbour hopping and uniform
// photon loss. Emitter loss is carried for fidelity to the master equation
// but must be zero.
struct SystemParams {
  double omega_emitter = 1.0;
  std::vector<double> cavity_freqs;
  double hopping = 0.0;
  double coupling = 0.0;
  double cavity_loss = 0.0;
  double emitter_loss = 0.0;
  std::optional<long long> n_emitters;  // absolute-scale reporting only
};

// Arithmetic frequency ladder omega_n = base + (n-1)*step, the standard way
// the ring is detuned.
struct DetuningLadder {
  double base = 0.0;
  double step = 0.0;
};

std::vector<double> expand_ladder(const DetuningLadder& ladder, int n_cavities);

// Immutable validated parameters. All frequencies are stored in units of the
// emitter frequency, so emitter_freq() is always 1; omega_scale() remembers
// the original scale for absolute reporting.
class ValidatedParams {
 public:
  int n_cavities() const { return static_cast<int>(freqs_.size()); }
  double emitter_freq() const { return 1.0; }
  double omega(int n) const { return freqs_[static_cast<std::size_t>(n)]; }
  const std::vector<double>& omegas() const { return freqs_; }
  double hopping() const { return hopping_; }
  double coupling() const { return coupling_; }
  double loss() const { return loss_; }
  double omega_scale() const { return scale_; }
  std::optional<long long> n_emitters() const { return n_emitters_; }

  int next(int n) const { return (n + 1) % n_cavities(); }
  int prev(int n) const { return (n + n_cavities() - 1) % n_cavities(); }

  // true when every cavity sits at the same frequency
  bool symmetric(double tol = 1e-12) const;

  // modified immutable copies, used by sweeps and root finders
  ValidatedParams with_coupling(double g) const;
  ValidatedParams with_loss(double kappa) const;
  ValidatedParams with_hopping(double j) const;
  ValidatedParams with_freqs(std::vector<double> freqs) const;

  // raw form (already normalized); validate(raw()) reproduces *this
  SystemParams raw() const;

 private:
  friend ValidatedParams validate(const SystemParams& params);
  ValidatedParams() = default;

  std::vector<double> freqs_;
  double hopping_ = 0.0;
  double coupling_ = 0.0;
  double loss_ = 0.0;
  double scale_ = 1.0;
  std::optional<long long> n_emitters_;
};

// Checks signs and counts, then normalizes every frequency-like quantity by
// the emitter frequency. Throws Error with codes non_positive_frequency,
// negative_loss, emitter_loss_unsupported, ring_too_small.
ValidatedParams validate(const SystemParams& params);

// Convenience: ladder form straight to validated parameters.
ValidatedParams validate_ladder(double omega_emitter, const DetuningLadder& ladder,
                                int n_cavities, double hopping, double coupling,
                                double cavity_loss,
                                std::optional<long long> n_emitters = {});

}  // namespace spinring
