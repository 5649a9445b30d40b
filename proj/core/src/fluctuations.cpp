#include "spinring/fluctuations.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "spinring/integrator.hpp"

namespace spinring {

std::complex<double> FluctuationCoefficients::squeeze_sum() const {
  std::complex<double> sum(0.0, 0.0);
  for (const auto& v : squeeze) sum += v;
  return sum;
}

const char* to_string(FluctuationStatus status) {
  return status == FluctuationStatus::ok ? "ok" : "diverged";
}

FluctuationCoefficients fluctuation_coefficients(const SteadySolution& solution,
                                                 const ValidatedParams& params) {
  const MeanFieldState& state = solution.state;
  const double z = state.spin_z;
  if (0.5 - z < 1e-12)
    throw Error(ErrorCode::z_at_half,
                "fully inverted spin is a pole of the bosonization", z);

  const std::complex<double> beta =
      std::complex<double>(state.spin_x, -state.spin_y) / std::sqrt(0.5 - z);
  const double b2 = std::norm(beta);
  if (b2 >= 1.0)
    throw Error(ErrorCode::beta_overflow,
                "spin displacement leaves the bosonization radius",
                std::sqrt(b2));
  const double remainder = std::sqrt(1.0 - b2);
  const double r3 = remainder * remainder * remainder;

  const double g = params.coupling();
  const double omega0 = params.emitter_freq();
  double re_sum = 0.0;
  for (const auto& a : state.alphas) re_sum += a.real();

  FluctuationCoefficients coeffs;
  coeffs.displacement = beta;
  coeffs.remainder = remainder;
  coeffs.emitter_freq =
      omega0 - g * re_sum * beta.real() * (4.0 - 3.0 * b2) / r3;
  coeffs.exchange = g * (1.0 - b2 - beta.real() * std::conj(beta)) / remainder;
  coeffs.squeeze.resize(state.alphas.size());
  const std::complex<double> kernel =
      beta.real() * beta * beta + 2.0 * beta * (1.0 - b2);
  for (std::size_t n = 0; n < state.alphas.size(); ++n)
    coeffs.squeeze[n] = -g * state.alphas[n].real() * kernel / (2.0 * r3);
  return coeffs;
}

LinearDynamics assemble_linear_dynamics(const FluctuationCoefficients& coeffs,
                                        const ValidatedParams& params) {
  const int nc = params.n_cavities();
  if (static_cast<int>(coeffs.squeeze.size()) != nc)
    throw Error(ErrorCode::invalid_argument,
                "coefficients and parameters disagree on the ring size");
  const int dim = 2 * (nc + 1);
  const int iu = 2 * nc, iv = 2 * nc + 1;
  const double kappa = params.loss();
  const double j = params.hopping();
  const double ex_re = coeffs.exchange.real(), ex_im = coeffs.exchange.imag();
  const std::complex<double> sq = coeffs.squeeze_sum();

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < nc; ++n) {
    const int x = 2 * n, y = 2 * n + 1;
    const int ym = 2 * params.prev(n) + 1, yp = 2 * params.next(n) + 1;
    const int xm = 2 * params.prev(n), xp = 2 * params.next(n);
    a(x, y) += params.omega(n);
    a(x, ym) += j;
    a(x, yp) += j;
    a(x, x) -= kappa;
    a(y, x) -= params.omega(n);
    a(y, xm) -= j;
    a(y, xp) -= j;
    a(y, y) -= kappa;
    a(y, iu) -= 2.0 * ex_re;
    a(y, iv) += 2.0 * ex_im;
    a(iu, x) -= 2.0 * ex_im;
    a(iv, x) -= 2.0 * ex_re;
  }
  a(iu, iv) += coeffs.emitter_freq;
  a(iv, iu) -= coeffs.emitter_freq;
  a(iu, iu) += 2.0 * sq.imag();
  a(iu, iv) -= 2.0 * sq.real();
  a(iv, iu) -= 2.0 * sq.real();
  a(iv, iv) -= 2.0 * sq.imag();

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < 2 * nc; ++n) d(n, n) = kappa;

  LinearDynamics dynamics;
  dynamics.drift = std::move(a);
  dynamics.diffusion = std::move(d);
  dynamics.n_cavities = nc;
  return dynamics;
}

double CovarianceBlock::mode_occupation(int n) const {
  if (n < 0 || n >= n_cavities)
    throw Error(ErrorCode::invalid_argument, "cavity index out of range");
  return 0.5 * (cov(2 * n, 2 * n) + cov(2 * n + 1, 2 * n + 1) - 1.0);
}

double CovarianceBlock::emitter_occupation() const {
  const int iu = 2 * n_cavities;
  return 0.5 * (cov(iu, iu) + cov(iu + 1, iu + 1) - 1.0);
}

double CovarianceBlock::uncertainty_defect() const {
  const Eigen::Index dim = cov.rows();
  Eigen::MatrixXcd c = cov.cast<std::complex<double>>();
  const std::complex<double> ih(0.0, 0.5);
  for (Eigen::Index m = 0; m + 1 < dim; m += 2) {
    c(m, m + 1) += ih;
    c(m + 1, m) -= ih;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(c);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::eigen_failure, "uncertainty eigenvalue solve failed");
  return solver.eigenvalues().minCoeff();
}

CovarianceBlock steady_covariance(const LinearDynamics& dynamics) {
  const Eigen::MatrixXd& a = dynamics.drift;
  const Eigen::Index dim = a.rows();

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::eigen_failure, "drift eigenvalue solve failed");
  const double max_real = solver.eigenvalues().real().maxCoeff();
  if (max_real > -1e-10)
    throw Error(ErrorCode::marginal_drift,
                "drift spectrum touches the imaginary axis", max_real);

  // A S + S A^T = -D as a dense Kronecker system on vec(S)
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(dim * dim, dim * dim);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    big.block(i * dim, i * dim, dim, dim) += a;
    for (Eigen::Index k = 0; k < dim; ++k)
      big.block(i * dim, k * dim, dim, dim) += a(i, k) * identity;
  }
  Eigen::VectorXd rhs(dim * dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    rhs.segment(col * dim, dim) = -dynamics.diffusion.col(col);
  const Eigen::VectorXd flat = big.partialPivLu().solve(rhs);

  Eigen::MatrixXd cov(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    cov.col(col) = flat.segment(col * dim, dim);
  cov = 0.5 * (cov + cov.transpose()).eval();

  const double residual =
      (a * cov + cov * a.transpose() + dynamics.diffusion).norm();
  if (residual > 1e-10 * std::max(1.0, dynamics.diffusion.norm()))
    throw Error(ErrorCode::eigen_failure, "lyapunov solve residual too large",
                residual);

  CovarianceBlock block;
  block.cov = std::move(cov);
  block.n_cavities = dynamics.n_cavities;
  return block;
}

CovarianceBlock covariance_by_integration(const LinearDynamics& dynamics,
                                          double cap, double t_end) {
  const Eigen::MatrixXd& a = dynamics.drift;
  const Eigen::Index dim = a.rows();

  Eigen::VectorXd y(dim * dim);
  {
    const Eigen::MatrixXd vacuum = 0.5 * Eigen::MatrixXd::Identity(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col)
      y.segment(col * dim, dim) = vacuum.col(col);
  }

  const OdeRhs f = [&](double, const Eigen::VectorXd& flat, Eigen::VectorXd& out) {
    const Eigen::Map<const Eigen::MatrixXd> s(flat.data(), dim, dim);
    out.resize(dim * dim);
    Eigen::Map<Eigen::MatrixXd> ds(out.data(), dim, dim);
    ds = a * s + s * a.transpose() + dynamics.diffusion;
  };

  bool settled = false;
  double runaway = 0.0;
  const OdeObserver observer = [&](double, const Eigen::VectorXd& flat,
                                   const Eigen::VectorXd& deriv) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      const double diag = flat[m * dim + m];
      if (diag > cap) {
        runaway = diag;
        return StepFlow::halt;
      }
    }
    if (deriv.norm() < 1e-10 * (1.0 + flat.norm())) {
      settled = true;
      return StepFlow::halt;
    }
    return StepFlow::run;
  };

  OdeOptions opts;
  opts.rtol = 1e-10;
  opts.atol = 1e-12;
  integrate_adaptive(f, y, 0.0, t_end, opts, observer);
  if (runaway > 0.0)
    throw Error(ErrorCode::diverged, "covariance grows past the cap", runaway);
  if (!settled)
    throw Error(ErrorCode::no_convergence,
                "covariance flow did not settle within the time budget");

  CovarianceBlock block;
  block.cov.resize(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    block.cov.col(col) = y.segment(col * dim, dim);
  block.cov = 0.5 * (block.cov + block.cov.transpose()).eval();
  block.n_cavities = dynamics.n_cavities;
  return block;
}

namespace {

// Independent route: normal-ordered second moments of the fluctuation modes,
// integrated to their fixed point. Moments, with c_n the cavity modes and d
// the emitter mode:
//   P = <c_m^+ c_n>, Q = <c_m c_n>, R = <c_n d>, S = <c_n d^+>,
//   E = <d d>, F = <d^+ d>.
struct CorrelatorLayout {
  int nc;
  int p0 = 0, q0, r0, s0, e0, f0, total;

  explicit CorrelatorLayout(int n) : nc(n) {
    q0 = nc * nc;
    r0 = 2 * nc * nc;
    s0 = r0 + nc;
    e0 = s0 + nc;
    f0 = e0 + 1;
    total = f0 + 1;
  }
  int p(int m, int n) const { return p0 + m * nc + n; }
  int q(int m, int n) const { return q0 + m * nc + n; }
};

std::vector<double> correlator_occupations(const FluctuationCoefficients& coeffs,
                                           const ValidatedParams& params,
                                           double cap, bool& diverged) {
  const int nc = params.n_cavities();
  const CorrelatorLayout lay(nc);
  const double kappa = params.loss();
  const double j = params.hopping();
  const double freq = coeffs.emitter_freq;
  const std::complex<double> g1 = coeffs.exchange;
  const std::complex<double> g1c = std::conj(g1);
  const std::complex<double> g3 = coeffs.squeeze_sum();
  const std::complex<double> g3c = std::conj(g3);
  const std::complex<double> i(0.0, 1.0);

  using CVec = Eigen::VectorXcd;
  const auto deriv = [&](const CVec& m, CVec& out) {
    out.setZero(lay.total);
    const std::complex<double> e = m[lay.e0];
    const std::complex<double> f = m[lay.f0];
    for (int a = 0; a < nc; ++a) {
      const int am = params.prev(a), ap = params.next(a);
      for (int b = 0; b < nc; ++b) {
        const int bm = params.prev(b), bp = params.next(b);
        out[lay.p(a, b)] =
            i * (params.omega(a) - params.omega(b)) * m[lay.p(a, b)] +
            i * j * (m[lay.p(am, b)] + m[lay.p(ap, b)] - m[lay.p(a, bm)] -
                     m[lay.p(a, bp)]) +
            i * (g1c * m[lay.s0 + b] + g1 * m[lay.r0 + b] -
                 g1 * std::conj(m[lay.s0 + a]) - g1c * std::conj(m[lay.r0 + a])) -
            2.0 * kappa * m[lay.p(a, b)];
        out[lay.q(a, b)] =
            -i * (params.omega(a) + params.omega(b)) * m[lay.q(a, b)] -
            i * j * (m[lay.q(am, b)] + m[lay.q(ap, b)] + m[lay.q(a, bm)] +
                     m[lay.q(a, bp)]) -
            i * (g1 * (m[lay.r0 + b] + m[lay.r0 + a]) +
                 g1c * (m[lay.s0 + b] + m[lay.s0 + a])) -
            2.0 * kappa * m[lay.q(a, b)];
      }
    }
    for (int a = 0; a < nc; ++a) {
      const int am = params.prev(a), ap = params.next(a);
      std::complex<double> sum_qp(1.0, 0.0);
      for (int k = 0; k < nc; ++k)
        sum_qp += m[lay.q(a, k)] + m[lay.p(k, a)];
      out[lay.r0 + a] =
          -i * ((params.omega(a) + freq) * m[lay.r0 + a] +
                j * (m[lay.r0 + am] + m[lay.r0 + ap]) + g1 * e + g1c * f +
                g1c * sum_qp + 2.0 * g3 * m[lay.s0 + a]) -
          kappa * m[lay.r0 + a];
      out[lay.s0 + a] =
          -i * (params.omega(a) - freq) * m[lay.s0 + a] -
          i * j * (m[lay.s0 + am] + m[lay.s0 + ap]) -
          i * (g1 * (f + 1.0) + g1c * std::conj(e)) +
          i * (g1 * sum_qp + 2.0 * g3c * m[lay.r0 + a]) - kappa * m[lay.s0 + a];
    }
    std::complex<double> sum_rsc(0.0, 0.0);
    for (int a = 0; a < nc; ++a)
      sum_rsc += m[lay.r0 + a] + std::conj(m[lay.s0 + a]);
    out[lay.e0] = -i * (2.0 * freq * e + 2.0 * g1c * sum_rsc + 2.0 * g3 * (2.0 * f + 1.0));
    const std::complex<double> flow = i * (g1 * sum_rsc + 2.0 * g3c * e);
    out[lay.f0] = flow + std::conj(flow);
  };

  Eigen::VectorXd y = Eigen::VectorXd::Zero(2 * lay.total);
  const OdeRhs f = [&](double, const Eigen::VectorXd& flat, Eigen::VectorXd& out) {
    CVec m(lay.total), dm(lay.total);
    for (int k = 0; k < lay.total; ++k)
      m[k] = {flat[2 * k], flat[2 * k + 1]};
    deriv(m, dm);
    out.resize(2 * lay.total);
    for (int k = 0; k < lay.total; ++k) {
      out[2 * k] = dm[k].real();
      out[2 * k + 1] = dm[k].imag();
    }
  };

  bool settled = false;
  double runaway = 0.0;
  const OdeObserver observer = [&](double, const Eigen::VectorXd& flat,
                                   const Eigen::VectorXd& dflat) {
    for (int n = 0; n < nc; ++n) {
      const double occ = flat[2 * lay.p(n, n)];
      if (occ > cap) {
        runaway = occ;
        return StepFlow::halt;
      }
    }
    if (dflat.norm() < 1e-10 * (1.0 + flat.norm())) {
      settled = true;
      return StepFlow::halt;
    }
    return StepFlow::run;
  };

  OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  integrate_adaptive(f, y, 0.0, 2e4, opts, observer);
  diverged = runaway > 0.0;
  if (diverged)
    return std::vector<double>(static_cast<std::size_t>(nc),
                               std::numeric_limits<double>::quiet_NaN());
  if (!settled)
    throw Error(ErrorCode::no_convergence,
                "correlator flow did not settle within the time budget");

  std::vector<double> occupations(static_cast<std::size_t>(nc));
  for (int n = 0; n < nc; ++n)
    occupations[static_cast<std::size_t>(n)] = y[2 * lay.p(n, n)];
  return occupations;
}

}  // namespace

PhotonFluctuations photon_number_fluctuations(const SteadySolution& solution,
                                              const ValidatedParams& params,
                                              FluctuationMethod method, double cap) {
  const FluctuationCoefficients coeffs = fluctuation_coefficients(solution, params);
  PhotonFluctuations result;
  result.method = method;

  if (method == FluctuationMethod::correlator) {
    bool diverged = false;
    result.occupations = correlator_occupations(coeffs, params, cap, diverged);
    result.status = diverged ? FluctuationStatus::diverged : FluctuationStatus::ok;
    return result;
  }

  const LinearDynamics dynamics = assemble_linear_dynamics(coeffs, params);
  const int nc = params.n_cavities();
  try {
    CovarianceBlock block;
    try {
      block = steady_covariance(dynamics);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::marginal_drift) throw;
      block = covariance_by_integration(dynamics, cap);
    }
    result.occupations.resize(static_cast<std::size_t>(nc));
    for (int n = 0; n < nc; ++n)
      result.occupations[static_cast<std::size_t>(n)] = block.mode_occupation(n);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::diverged) throw;
    result.occupations.assign(static_cast<std::size_t>(nc),
                              std::numeric_limits<double>::quiet_NaN());
    result.status = FluctuationStatus::diverged;
  }
  return result;
}

}  // namespace spinring
