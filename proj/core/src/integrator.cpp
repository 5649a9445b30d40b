#include "spinring/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spinring {
namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// difference between the 5th and the embedded 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, double atol, double rtol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

double initial_step_guess(const OdeRhs& f, double t0, const Eigen::VectorXd& y0,
                          const Eigen::VectorXd& f0, double t_span, double atol,
                          double rtol, OdeStats& stats) {
  const auto scaled_norm = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& ref) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double sc = atol + rtol * std::abs(ref[i]);
      const double r = v[i] / sc;
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(v.size()));
  };
  const double d0 = scaled_norm(y0, y0);
  const double d1 = scaled_norm(f0, y0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t_span);

  Eigen::VectorXd y1 = y0 + h0 * f0;
  Eigen::VectorXd f1(y0.size());
  f(t0 + h0, y1, f1);
  ++stats.evals;
  const double d2 = scaled_norm(f1 - f0, y0) / h0;

  double h1;
  const double d_max = std::max(d1, d2);
  if (d_max <= 1e-15)
    h1 = std::max(1e-6, h0 * 1e-3);
  else
    h1 = std::pow(0.01 / d_max, 0.2);
  return std::min({100.0 * h0, h1, t_span});
}

}  // namespace

OdeStats integrate_adaptive(const OdeRhs& f, Eigen::VectorXd& y, double t0, double t1,
                            const OdeOptions& opts, const OdeObserver& observer) {
  if (!(t1 > t0))
    throw Error(ErrorCode::invalid_argument, "integration span must be positive");

  OdeStats stats;
  const Eigen::Index dim = y.size();
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  Eigen::VectorXd y_new(dim), y_err(dim), y_stage(dim);

  double t = t0;
  f(t, y, k1);
  ++stats.evals;
  if (observer && observer(t, y, k1) == StepFlow::halt) return stats;

  double h = opts.initial_step > 0.0
                 ? std::min(opts.initial_step, t1 - t0)
                 : initial_step_guess(f, t0, y, k1, t1 - t0, opts.atol, opts.rtol, stats);
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  // PI controller state
  constexpr double beta = 0.04;
  constexpr double expo = 0.2 - 0.75 * beta;
  constexpr double safety = 0.9;
  double facold = 1e-4;
  bool last_rejected = false;
  bool saw_non_finite = false;

  while (t < t1) {
    if (stats.accepted + stats.rejected >= opts.max_steps)
      throw Error(ErrorCode::no_convergence, "step budget exhausted", t);
    const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, std::abs(t));
    if (h < h_floor) {
      if (saw_non_finite)
        throw Error(ErrorCode::non_finite_state, "state stopped being finite", t);
      throw Error(ErrorCode::step_size_underflow, "step size collapsed", t);
    }
    const bool last_step = t + h >= t1;
    if (last_step) h = t1 - t;

    y_stage = y + h * (a21 * k1);
    f(t + c2 * h, y_stage, k2);
    y_stage = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, y_stage, k3);
    y_stage = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, y_stage, k4);
    y_stage = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, y_stage, k5);
    y_stage = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, y_stage, k6);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, y_new, k7);  // FSAL stage
    stats.evals += 6;

    y_err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = y_new.allFinite()
                     ? error_norm(y_err, y, y_new, opts.atol, opts.rtol)
                     : std::numeric_limits<double>::infinity();

    if (err <= 1.0) {
      t = last_step ? t1 : t + h;
      y.swap(y_new);
      k1.swap(k7);
      ++stats.accepted;
      saw_non_finite = false;

      facold = std::max(err, 1e-4);
      double fac = safety * std::pow(err, -expo) * std::pow(facold, beta);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      h *= fac;
      if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
      last_rejected = false;

      if (observer && observer(t, y, k1) == StepFlow::halt) return stats;
    } else {
      ++stats.rejected;
      last_rejected = true;
      if (!std::isfinite(err)) {
        saw_non_finite = true;
        h *= 0.1;
      } else {
        h *= std::clamp(safety * std::pow(err, -expo), 0.2, 1.0);
      }
    }
  }
  return stats;
}

}  // namespace spinring
