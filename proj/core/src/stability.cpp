#include "spinring/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "spinring/meanfield.hpp"

namespace spinring {

StabilityMatrix build_matrix(const SteadySolution& solution,
                             const ValidatedParams& params) {
  const MeanFieldState& state = solution.state;
  const int n = params.n_cavities();
  if (state.n_cavities() != n)
    throw Error(ErrorCode::invalid_argument,
                "solution and parameters disagree on the ring size");

  const double residual = rhs_norm(state, params);
  if (residual > 1e-8)
    throw Error(ErrorCode::not_steady,
                "linearization requested away from a fixed point; rhs norm " +
                    std::to_string(residual),
                residual);

  const double z = state.spin_z;
  if (std::abs(z) < 1e-12)
    throw Error(ErrorCode::zero_z,
                "spin inversion vanishes; the constraint elimination is singular",
                z);

  const double omega0 = params.emitter_freq();
  const double j = params.hopping();
  const double g = params.coupling();
  const double kappa = params.loss();
  const double root2 = std::sqrt(2.0);

  double re_sum = 0.0;
  for (const auto& a : state.alphas) re_sum += a.real();
  const double s = 2.0 * re_sum;

  const int dim = 2 * n + 2;
  const int ix = 2 * n, iy = 2 * n + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);

  for (int k = 0; k < n; ++k) {
    const int q = 2 * k, p = 2 * k + 1;
    const int q_prev = 2 * params.prev(k), q_next = 2 * params.next(k);
    m(q, p) += params.omega(k);
    m(q, q_prev + 1) += j;
    m(q, q_next + 1) += j;
    m(q, q) -= kappa;

    m(p, q) -= params.omega(k);
    m(p, q_prev) -= j;
    m(p, q_next) -= j;
    m(p, ix) -= 2.0 * root2 * g;
    m(p, p) -= kappa;

    m(iy, q) -= 2.0 * root2 * g * z;
  }

  m(ix, iy) = -omega0;
  m(iy, ix) = omega0 + 2.0 * g * (state.spin_x / z) * s;
  m(iy, iy) = 2.0 * g * (state.spin_y / z) * s;

  StabilityMatrix matrix;
  matrix.entries = std::move(m);
  matrix.n_cavities = n;
  return matrix;
}

std::vector<std::complex<double>> eigenvalues(const StabilityMatrix& matrix) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix.entries, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::eigen_failure, "eigenvalue iteration did not converge");
  std::vector<std::complex<double>> values(
      static_cast<std::size_t>(matrix.entries.rows()));
  for (Eigen::Index i = 0; i < matrix.entries.rows(); ++i)
    values[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
  std::sort(values.begin(), values.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });
  return values;
}

StabilityVerdict classify(const SteadySolution& solution, const ValidatedParams& params,
                          double tol_stability) {
  StabilityVerdict verdict;
  verdict.eigenvalues = eigenvalues(build_matrix(solution, params));
  verdict.max_real_part = verdict.eigenvalues.front().real();
  verdict.stable = verdict.max_real_part < tol_stability;
  return verdict;
}

StabilityVerdict classify_into(SteadySolution& solution, const ValidatedParams& params,
                               double tol_stability) {
  StabilityVerdict verdict = classify(solution, params, tol_stability);
  solution.stability = verdict.stable ? StabilityTag::stable : StabilityTag::unstable;
  return verdict;
}

}  // namespace spinring
