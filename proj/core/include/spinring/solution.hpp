#pragma once

#include <complex>
#include <vector>

#include "spinring/state.hpp"

namespace spinring {

enum class Phase { normal, superradiant };
enum class Branch { positive, negative, none };
enum class Provenance { analytic, evolved };
enum class StabilityTag { unknown, stable, unstable };

const char* to_string(Phase phase);
const char* to_string(Branch branch);
const char* to_string(Provenance provenance);
const char* to_string(StabilityTag tag);

// A steady state of the mean-field flow, tagged with how it was obtained and
// what is known about it. The parity branch is the sign of the spin x
// component; the two branches map onto each other under negation of all
// field amplitudes and (X, Y).
struct SteadySolution {
  MeanFieldState state;
  Phase phase = Phase::normal;
  Branch branch = Branch::none;
  Provenance provenance = Provenance::analytic;
  StabilityTag stability = StabilityTag::unknown;

  // sums of the field amplitudes over the ring
  double alpha_re_sum = 0.0;
  double alpha_im_sum = 0.0;

  // asymmetric closed form: per-cavity field divided by (coupling * X), and
  // the coupling-weighted sum of its real parts that fixes Z
  std::vector<std::complex<double>> reduced_field;
  double reduced_re_sum = 0.0;

  // mean-field derivative norm at the state, when it has been measured
  double residual = 0.0;
};

}  // namespace spinring
