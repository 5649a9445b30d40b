#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>

#include "spinring/errors.hpp"

namespace spinring {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;      // 0: unbounded
  double initial_step = 0.0;  // 0: chosen automatically
  std::size_t max_steps = 20000000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evals = 0;
};

enum class StepFlow { run, halt };

using OdeRhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;
// Called at the initial point and after every accepted step with the state
// and the derivative there (the FSAL stage, no extra evaluation). Returning
// StepFlow::halt stops the integration early.
using OdeObserver =
    std::function<StepFlow(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;

// Dormand-Prince 5(4) embedded pair with PI step-size control. Integrates y
// in place from t0 to t1 (t1 > t0). Throws Error(step_size_underflow) when
// the controller collapses the step, Error(non_finite_state) when the state
// stops being finite, Error(no_convergence) when max_steps is exhausted.
OdeStats integrate_adaptive(const OdeRhs& f, Eigen::VectorXd& y, double t0, double t1,
                            const OdeOptions& opts = {}, const OdeObserver& observer = {});

}  // namespace spinring
