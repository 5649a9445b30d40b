#include "spinring/meanfield.hpp"

#include <cmath>

namespace spinring {

MeanFieldState normal_state(int n_cavities) {
  MeanFieldState state;
  state.alphas.assign(static_cast<std::size_t>(n_cavities), {0.0, 0.0});
  state.spin_x = 0.0;
  state.spin_y = 0.0;
  state.spin_z = -0.5;
  return state;
}

Eigen::VectorXd pack_state(const MeanFieldState& state) {
  const int n = state.n_cavities();
  Eigen::VectorXd flat(2 * n + 3);
  for (int i = 0; i < n; ++i) {
    flat[i] = state.alphas[static_cast<std::size_t>(i)].real();
    flat[n + i] = state.alphas[static_cast<std::size_t>(i)].imag();
  }
  flat[2 * n] = state.spin_x;
  flat[2 * n + 1] = state.spin_y;
  flat[2 * n + 2] = state.spin_z;
  return flat;
}

MeanFieldState unpack_state(const Eigen::VectorXd& flat) {
  const int n = static_cast<int>((flat.size() - 3) / 2);
  MeanFieldState state;
  state.alphas.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    state.alphas[static_cast<std::size_t>(i)] = {flat[i], flat[n + i]};
  state.spin_x = flat[2 * n];
  state.spin_y = flat[2 * n + 1];
  state.spin_z = flat[2 * n + 2];
  return state;
}

void rhs_packed(const ValidatedParams& params, const Eigen::VectorXd& flat,
                Eigen::VectorXd& out) {
  const int n = params.n_cavities();
  const double j = params.hopping();
  const double g = params.coupling();
  const double kappa = params.loss();
  const double omega0 = params.emitter_freq();
  const double x = flat[2 * n];
  const double y = flat[2 * n + 1];
  const double z = flat[2 * n + 2];

  out.resize(flat.size());
  double re_sum = 0.0;
  for (int i = 0; i < n; ++i) re_sum += flat[i];
  const double drive = 2.0 * g * x;
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n, im = (i + n - 1) % n;
    const double re = flat[i], imv = flat[n + i];
    // d a_n = -i (omega_n a_n + J(a_{n-1}+a_{n+1}) + 2 g X) - kappa a_n
    const double hre = params.omega(i) * re + j * (flat[im] + flat[ip]) + drive;
    const double him = params.omega(i) * imv + j * (flat[n + im] + flat[n + ip]);
    out[i] = him - kappa * re;
    out[n + i] = -hre - kappa * imv;
  }
  const double s = 2.0 * re_sum;  // sum (a + a*)
  out[2 * n] = -omega0 * y;
  out[2 * n + 1] = omega0 * x - 2.0 * g * s * z;
  out[2 * n + 2] = 2.0 * g * s * y;
}

MeanFieldState rhs(const MeanFieldState& state, const ValidatedParams& params) {
  Eigen::VectorXd out;
  rhs_packed(params, pack_state(state), out);
  return unpack_state(out);
}

double rhs_norm(const MeanFieldState& state, const ValidatedParams& params) {
  Eigen::VectorXd out;
  rhs_packed(params, pack_state(state), out);
  return out.norm();
}

namespace {

Trajectory run_integration(const MeanFieldState& start, const ValidatedParams& params,
                           double t_end, const IntegrateOptions& opts,
                           const OdeObserver& extra_observer) {
  Trajectory trajectory;
  trajectory.params = params.raw();

  Eigen::VectorXd y = pack_state(start);
  const OdeRhs f = [&params](double, const Eigen::VectorXd& state, Eigen::VectorXd& out) {
    rhs_packed(params, state, out);
  };
  OdeOptions ode;
  ode.rtol = opts.rtol;
  ode.atol = opts.atol;
  ode.max_step = opts.max_step;

  const OdeObserver observer = [&](double t, const Eigen::VectorXd& state,
                                   const Eigen::VectorXd& deriv) {
    if (opts.record) {
      trajectory.times.push_back(t);
      trajectory.states.push_back(unpack_state(state));
    }
    return extra_observer ? extra_observer(t, state, deriv) : StepFlow::run;
  };

  trajectory.stats = integrate_adaptive(f, y, 0.0, t_end, ode, observer);
  if (!opts.record) {
    trajectory.times = {0.0, t_end};
    trajectory.states = {start, unpack_state(y)};
  }
  return trajectory;
}

}  // namespace

Trajectory integrate(const MeanFieldState& start, const ValidatedParams& params,
                     double t_end, const IntegrateOptions& opts) {
  if (!(t_end > 0.0))
    throw Error(ErrorCode::invalid_argument, "integration time must be positive");
  return run_integration(start, params, t_end, opts, {});
}

Trajectory integrate(const MeanFieldState& start, const ValidatedParams& params,
                     double t_end, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  IntegrateOptions opts;
  opts.rtol = tol;
  opts.atol = tol * 1e-3;
  return integrate(start, params, t_end, opts);
}

MeanFieldState SeedPolicy::make(int n_cavities) const {
  if (explicit_state) return *explicit_state;
  if (std::abs(initial_z) > 0.5)
    throw Error(ErrorCode::invalid_argument, "seed Z must lie in [-1/2, 1/2]");
  MeanFieldState state = normal_state(n_cavities);
  state.spin_z = initial_z;
  const double x2 = 0.25 - initial_z * initial_z;
  state.spin_x = (branch_sign < 0 ? -1.0 : 1.0) * std::sqrt(std::max(0.0, x2));
  return state;
}

SteadySolution evolve_to_steady(const ValidatedParams& params, const SeedPolicy& seed,
                                const ConvergenceSpec& convergence) {
  if (!(convergence.tol_derivative > 0.0))
    throw Error(ErrorCode::invalid_argument, "derivative tolerance must be positive");
  const double window =
      convergence.window > 0.0 ? convergence.window : 10.0 / params.emitter_freq();

  MeanFieldState start = seed.make(params.n_cavities());

  // a seed that is already a fixed point (e.g. Z(0) = -1/2 exactly) is
  // returned as-is
  double residual = rhs_norm(start, params);
  double settled_since = -1.0;
  bool converged = residual < convergence.tol_derivative;

  Eigen::VectorXd y = pack_state(start);
  if (!converged) {
    const OdeRhs f = [&params](double, const Eigen::VectorXd& state,
                               Eigen::VectorXd& out) { rhs_packed(params, state, out); };
    OdeOptions ode;
    ode.rtol = convergence.rtol;
    ode.atol = convergence.atol;
    const OdeObserver observer = [&](double t, const Eigen::VectorXd&,
                                     const Eigen::VectorXd& deriv) {
      residual = deriv.norm();
      if (residual < convergence.tol_derivative) {
        if (settled_since < 0.0) settled_since = t;
        if (t - settled_since >= window) {
          converged = true;
          return StepFlow::halt;
        }
      } else {
        settled_since = -1.0;
      }
      return StepFlow::run;
    };
    integrate_adaptive(f, y, 0.0, convergence.max_time, ode, observer);
    if (!converged)
      throw Error(ErrorCode::no_convergence,
                  "no steady state within the time budget; residual " +
                      std::to_string(residual),
                  residual);
  }

  SteadySolution solution;
  solution.state = unpack_state(y);
  solution.provenance = Provenance::evolved;
  solution.residual = residual;

  double amplitude = 0.0, re_sum = 0.0, im_sum = 0.0;
  for (const auto& a : solution.state.alphas) {
    amplitude = std::max(amplitude, std::abs(a));
    re_sum += a.real();
    im_sum += a.imag();
  }
  solution.alpha_re_sum = re_sum;
  solution.alpha_im_sum = im_sum;
  solution.phase = amplitude > 1e-6 ? Phase::superradiant : Phase::normal;
  if (solution.phase == Phase::superradiant)
    solution.branch =
        solution.state.spin_x >= 0.0 ? Branch::positive : Branch::negative;
  return solution;
}

}  // namespace spinring
