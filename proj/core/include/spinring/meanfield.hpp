#pragma once

#include <optional>

#include "spinring/integrator.hpp"
#include "spinring/model.hpp"
#include "spinring/solution.hpp"
#include "spinring/state.hpp"

namespace spinring {

// Mean-field equations of motion. Per cavity
//   da_n/dt = -i [omega_n a_n + J (a_{n-1} + a_{n+1}) + 2 g X] - kappa a_n
// with ring wrap-around, and for the collective spin with
// s = sum_n (a_n + a_n*)
//   dX/dt = -Omega Y,  dY/dt = Omega X - 2 g s Z,  dZ/dt = 2 g s Y.
MeanFieldState rhs(const MeanFieldState& state, const ValidatedParams& params);
void rhs_packed(const ValidatedParams& params, const Eigen::VectorXd& flat,
                Eigen::VectorXd& out);
double rhs_norm(const MeanFieldState& state, const ValidatedParams& params);

struct Trajectory {
  std::vector<double> times;
  std::vector<MeanFieldState> states;
  SystemParams params;  // resolved snapshot
  OdeStats stats;

  const MeanFieldState& final_state() const { return states.back(); }
};

struct IntegrateOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;
  bool record = true;  // keep every accepted step; otherwise only endpoints
};

Trajectory integrate(const MeanFieldState& start, const ValidatedParams& params,
                     double t_end, const IntegrateOptions& opts = {});
// single-tolerance convenience: rtol = tol, atol = tol * 1e-3
Trajectory integrate(const MeanFieldState& start, const ValidatedParams& params,
                     double t_end, double tol);

// Default symmetry-breaking seed: empty cavities, Y = 0, Z = initial_z and
// X = sign * sqrt(1/4 - Z^2). The sign of X(0) picks the parity branch
// deterministically. An explicit state overrides all of this.
struct SeedPolicy {
  double initial_z = -0.499;
  int branch_sign = +1;
  std::optional<MeanFieldState> explicit_state;

  MeanFieldState make(int n_cavities) const;
};

struct ConvergenceSpec {
  double tol_derivative = 1e-10;
  double window = 0.0;    // 0: defaults to 10 emitter periods
  double max_time = 2e4;  // give up past this point
  double rtol = 1e-9;
  double atol = 1e-12;
};

// Integrates from the seed until the derivative norm stays below
// tol_derivative over a full window. Returns the settled state tagged with
// provenance `evolved` and the branch read off sign(X). Throws
// Error(no_convergence) with the final residual as detail when max_time
// passes without the criterion holding.
SteadySolution evolve_to_steady(const ValidatedParams& params,
                                const SeedPolicy& seed = {},
                                const ConvergenceSpec& convergence = {});

}  // namespace spinring
