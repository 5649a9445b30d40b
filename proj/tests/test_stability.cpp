#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "spinring/analytic.hpp"
#include "spinring/errors.hpp"
#include "spinring/meanfield.hpp"
#include "spinring/stability.hpp"
#include "test_helpers.hpp"

using namespace spinring;
using testutil::ladder_params;
using testutil::sym_params;

namespace {

// Flow restricted to the constraint surface, in the quadrature coordinates
// [q_1, p_1, ..., q_N, p_N, X, Y] with Z eliminated as sign * sqrt(...).
Eigen::VectorXd reduced_rhs(const ValidatedParams& params, const Eigen::VectorXd& v,
                            double z_sign) {
  const int n = params.n_cavities();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  MeanFieldState state;
  state.alphas.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    state.alphas[static_cast<std::size_t>(i)] = {v[2 * i] * inv_sqrt2,
                                                 v[2 * i + 1] * inv_sqrt2};
  state.spin_x = v[2 * n];
  state.spin_y = v[2 * n + 1];
  state.spin_z = z_sign * std::sqrt(0.25 - state.spin_x * state.spin_x -
                                    state.spin_y * state.spin_y);
  auto deriv = rhs(state, params);
  Eigen::VectorXd out(2 * n + 2);
  const double sqrt2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    out[2 * i] = sqrt2 * deriv.alphas[static_cast<std::size_t>(i)].real();
    out[2 * i + 1] = sqrt2 * deriv.alphas[static_cast<std::size_t>(i)].imag();
  }
  out[2 * n] = deriv.spin_x;
  out[2 * n + 1] = deriv.spin_y;
  return out;
}

Eigen::MatrixXd fd_jacobian(const ValidatedParams& params, const SteadySolution& sol,
                            double h = 1e-7) {
  const int n = params.n_cavities();
  const int dim = 2 * n + 2;
  const double sqrt2 = std::sqrt(2.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < n; ++i) {
    v[2 * i] = sqrt2 * sol.state.alphas[static_cast<std::size_t>(i)].real();
    v[2 * i + 1] = sqrt2 * sol.state.alphas[static_cast<std::size_t>(i)].imag();
  }
  v[2 * n] = sol.state.spin_x;
  v[2 * n + 1] = sol.state.spin_y;
  const double z_sign = sol.state.spin_z >= 0.0 ? 1.0 : -1.0;

  Eigen::MatrixXd jac(dim, dim);
  for (int col = 0; col < dim; ++col) {
    Eigen::VectorXd up = v, down = v;
    up[col] += h;
    down[col] -= h;
    jac.col(col) = (reduced_rhs(params, up, z_sign) -
                    reduced_rhs(params, down, z_sign)) /
                   (2.0 * h);
  }
  return jac;
}

// Characteristic polynomial p(x) = x^n + c[0] x^(n-1) + ... + c[n-1] by the
// Faddeev-LeVerrier recursion; an eigenvalue oracle independent of the QR
// solver.
std::vector<double> char_poly(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> c(static_cast<std::size_t>(n));
  Eigen::MatrixXd m = a;
  for (int k = 1; k <= n; ++k) {
    c[static_cast<std::size_t>(k - 1)] = -m.trace() / k;
    if (k < n)
      m = a * (m + c[static_cast<std::size_t>(k - 1)] *
                       Eigen::MatrixXd::Identity(n, n));
  }
  return c;
}

double poly_defect(const std::vector<double>& c, std::complex<double> x) {
  std::complex<double> value = 1.0;
  double scale = 1.0;
  for (double ck : c) {
    value = value * x + ck;
    scale = scale * std::abs(x) + std::abs(ck);
  }
  return std::abs(value) / std::max(scale, 1.0);
}

}  // namespace

TEST_CASE("linearization matches a finite-difference jacobian entrywise") {
  for (const auto& params : {sym_params(), ladder_params()}) {
    auto sol = steady_state(params, Branch::negative);
    auto matrix = build_matrix(sol, params);
    auto fd = fd_jacobian(params, sol);
    REQUIRE(matrix.entries.rows() == fd.rows());
    const double defect = (matrix.entries - fd).cwiseAbs().maxCoeff();
    CHECK(defect < 1e-6);
    CHECK(defect < 1e-8);  // central differences do much better here
  }
}

TEST_CASE("leading eigenvalue of the frozen reference points") {
  auto sym_sol = steady_state(sym_params(), Branch::negative);
  auto sym = classify(sym_sol, sym_params());
  CHECK(sym.max_real_part == doctest::Approx(-0.01877056688392531).epsilon(1e-9));
  CHECK(sym.stable);

  auto ladder_sol = steady_state(ladder_params(), Branch::negative);
  auto ladder = classify(ladder_sol, ladder_params());
  CHECK(ladder.max_real_part == doctest::Approx(-0.1550588935433106).epsilon(1e-9));
  CHECK(ladder.stable);
}

TEST_CASE("eigenvalues satisfy their own characteristic polynomial") {
  for (const auto& params : {sym_params(), ladder_params()}) {
    auto sol = steady_state(params, Branch::negative);
    auto matrix = build_matrix(sol, params);
    auto values = eigenvalues(matrix);
    REQUIRE(static_cast<int>(values.size()) == matrix.entries.rows());

    auto coeffs = char_poly(matrix.entries);
    std::complex<double> sum = 0.0;
    for (auto v : values) {
      CHECK(poly_defect(coeffs, v) < 1e-10);
      sum += v;
    }
    CHECK(std::abs(sum - std::complex<double>(matrix.entries.trace())) < 1e-10);

    for (std::size_t i = 1; i < values.size(); ++i)
      CHECK(values[i - 1].real() >= values[i].real() - 1e-15);
  }
}

TEST_CASE("parity branches share the same spectrum") {
  auto params = ladder_params();
  auto minus = eigenvalues(build_matrix(steady_state(params, Branch::negative), params));
  auto plus = eigenvalues(build_matrix(steady_state(params, Branch::positive), params));
  REQUIRE(minus.size() == plus.size());
  for (std::size_t i = 0; i < minus.size(); ++i)
    CHECK(std::abs(minus[i] - plus[i]) < 1e-10);
}

TEST_CASE("the normal solution destabilizes exactly at threshold") {
  auto base = sym_params(0.5, 0.1, 0.3, 0.0);
  const double g_c = g_c_symmetric(base);

  SteadySolution normal;
  normal.state = normal_state(3);
  normal.phase = Phase::normal;

  auto below = classify(normal, base.with_coupling(0.95 * g_c));
  CHECK(below.max_real_part == doctest::Approx(-0.09743189385631294).epsilon(1e-9));
  CHECK(below.stable);

  auto above = classify(normal, base.with_coupling(1.05 * g_c));
  CHECK(above.max_real_part == doctest::Approx(0.0811398721265233).epsilon(1e-9));
  CHECK_FALSE(above.stable);

  // tight bracket around the threshold
  CHECK(classify(normal, base.with_coupling(g_c * (1.0 - 1e-4))).max_real_part < 0.0);
  CHECK(classify(normal, base.with_coupling(g_c * (1.0 + 1e-4))).max_real_part > 0.0);
}

TEST_CASE("classify_into records the verdict on the solution") {
  auto params = sym_params();
  auto sol = steady_state(params, Branch::negative);
  CHECK(sol.stability == StabilityTag::unknown);
  auto verdict = classify_into(sol, params);
  CHECK(verdict.stable);
  CHECK(sol.stability == StabilityTag::stable);
}

TEST_CASE("non-steady input is rejected") {
  auto params = sym_params();
  SteadySolution bogus;
  bogus.state = normal_state(3);
  bogus.state.alphas[0] = {0.2, 0.1};
  bogus.state.spin_x = 0.3;
  bogus.state.spin_z = -0.37;
  try {
    (void)build_matrix(bogus, params);
    FAIL("expected not_steady");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::not_steady);
  }
}

TEST_CASE("vanishing inversion blocks the constraint elimination") {
  auto params = sym_params(0.5, 0.1, 0.3, 0.0);
  SteadySolution flat;
  flat.state = normal_state(3);
  flat.state.spin_z = 0.0;
  try {
    (void)build_matrix(flat, params);
    FAIL("expected zero_z");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::zero_z);
  }
}
