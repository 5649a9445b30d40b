#include <doctest.h>

#include <cmath>
#include <complex>

#include "spinring/analytic.hpp"
#include "spinring/errors.hpp"
#include "spinring/meanfield.hpp"
#include "test_helpers.hpp"

using namespace spinring;
using testutil::ladder_params;
using testutil::sym_params;

namespace {

MeanFieldState probe_state() {
  MeanFieldState state;
  state.alphas = {{0.11, -0.07}, {-0.03, 0.21}, {0.17, 0.05}};
  state.spin_x = 0.31;
  state.spin_y = -0.12;
  state.spin_z = -0.2;
  return state;
}

MeanFieldState parity_flip(MeanFieldState state) {
  for (auto& a : state.alphas) a = -a;
  state.spin_x = -state.spin_x;
  state.spin_y = -state.spin_y;
  return state;
}

}  // namespace

TEST_CASE("structured and packed right-hand sides agree") {
  auto params = ladder_params();
  auto state = probe_state();
  auto deriv = rhs(state, params);

  Eigen::VectorXd flat = pack_state(state), out(flat.size());
  rhs_packed(params, flat, out);
  auto deriv2 = unpack_state(out);

  for (int n = 0; n < 3; ++n) {
    CHECK(deriv.alphas[n].real() == doctest::Approx(deriv2.alphas[n].real()).epsilon(1e-15));
    CHECK(deriv.alphas[n].imag() == doctest::Approx(deriv2.alphas[n].imag()).epsilon(1e-15));
  }
  CHECK(deriv.spin_x == deriv2.spin_x);
  CHECK(deriv.spin_y == deriv2.spin_y);
  CHECK(deriv.spin_z == deriv2.spin_z);
}

TEST_CASE("flow is antisymmetric under the parity flip") {
  auto params = ladder_params();
  auto state = probe_state();
  auto deriv = rhs(state, params);
  auto flipped_deriv = rhs(parity_flip(state), params);

  for (int n = 0; n < 3; ++n) {
    CHECK(flipped_deriv.alphas[n].real() == doctest::Approx(-deriv.alphas[n].real()).epsilon(1e-14));
    CHECK(flipped_deriv.alphas[n].imag() == doctest::Approx(-deriv.alphas[n].imag()).epsilon(1e-14));
  }
  CHECK(flipped_deriv.spin_x == doctest::Approx(-deriv.spin_x).epsilon(1e-14));
  CHECK(flipped_deriv.spin_y == doctest::Approx(-deriv.spin_y).epsilon(1e-14));
  CHECK(flipped_deriv.spin_z == doctest::Approx(deriv.spin_z).epsilon(1e-14));
}

TEST_CASE("flow is tangent to the spin sphere") {
  auto params = sym_params();
  auto state = probe_state();
  state.spin_z = -std::sqrt(0.25 - state.spin_x * state.spin_x -
                            state.spin_y * state.spin_y);
  auto deriv = rhs(state, params);
  const double radial = state.spin_x * deriv.spin_x + state.spin_y * deriv.spin_y +
                        state.spin_z * deriv.spin_z;
  CHECK(std::abs(radial) < 1e-15);
}

TEST_CASE("analytic steady states are fixed points of the flow") {
  SUBCASE("symmetric ring, both branches") {
    auto params = sym_params();
    CHECK(rhs_norm(steady_symmetric(params, Branch::negative).state, params) < 1e-14);
    CHECK(rhs_norm(steady_symmetric(params, Branch::positive).state, params) < 1e-14);
  }
  SUBCASE("detuned ring, both branches") {
    auto params = ladder_params();
    CHECK(rhs_norm(steady_asymmetric(params, Branch::negative).state, params) < 1e-14);
    CHECK(rhs_norm(steady_asymmetric(params, Branch::positive).state, params) < 1e-14);
  }
  SUBCASE("normal state below threshold") {
    auto params = sym_params(0.5, 0.1, 0.3, 0.1);
    CHECK(rhs_norm(normal_state(3), params) == 0.0);
  }
}

TEST_CASE("seed policy breaks the symmetry deterministically") {
  SeedPolicy seed;
  auto state = seed.make(3);
  CHECK(state.alphas.size() == 3);
  for (const auto& a : state.alphas) CHECK(std::abs(a) == 0.0);
  CHECK(state.spin_z == -0.499);
  CHECK(state.spin_y == 0.0);
  CHECK(state.spin_x > 0.0);
  CHECK(std::abs(state.spin_norm_defect()) < 1e-15);

  SeedPolicy down;
  down.branch_sign = -1;
  CHECK(down.make(3).spin_x < 0.0);

  SeedPolicy off_sphere;
  off_sphere.initial_z = -0.6;
  CHECK_THROWS_AS((void)off_sphere.make(3), std::invalid_argument);

  SeedPolicy fixed;
  fixed.explicit_state = probe_state();
  auto copy = fixed.make(3);
  CHECK(copy.alphas[2] == probe_state().alphas[2]);
}

TEST_CASE("spin norm is conserved along a long trajectory") {
  auto params = ladder_params();
  auto trajectory = integrate(SeedPolicy{}.make(3), params, 100.0);
  double drift = 0.0;
  for (const auto& state : trajectory.states)
    drift = std::max(drift, std::abs(state.spin_norm_defect()));
  CHECK(drift < 1e-9);
}

TEST_CASE("endpoint-only integration stores exactly the two ends") {
  auto params = sym_params();
  IntegrateOptions opts;
  opts.record = false;
  auto trajectory = integrate(SeedPolicy{}.make(3), params, 50.0, opts);
  REQUIRE(trajectory.times.size() == 2);
  REQUIRE(trajectory.states.size() == 2);
  CHECK(trajectory.times[0] == 0.0);
  CHECK(trajectory.times[1] == 50.0);

  auto recorded = integrate(SeedPolicy{}.make(3), params, 50.0);
  CHECK(recorded.times.size() == recorded.stats.accepted + 1);
  for (int n = 0; n < 3; ++n) {
    CHECK(std::abs(trajectory.final_state().alphas[n] -
                   recorded.final_state().alphas[n]) < 1e-13);
  }
}

TEST_CASE("relaxation finds the analytic fixed point on the detuned ring") {
  auto params = ladder_params();
  auto evolved = evolve_to_steady(params);
  auto analytic = steady_asymmetric(params, Branch::positive);

  CHECK(evolved.provenance == Provenance::evolved);
  CHECK(evolved.phase == Phase::superradiant);
  CHECK(evolved.branch == Branch::positive);
  CHECK(evolved.residual < 1e-10);
  for (int n = 0; n < 3; ++n)
    CHECK(std::abs(evolved.state.alphas[n] - analytic.state.alphas[n]) < 1e-8);
  CHECK(std::abs(evolved.state.spin_x - analytic.state.spin_x) < 1e-8);
  CHECK(std::abs(evolved.state.spin_z - analytic.state.spin_z) < 1e-8);

  SeedPolicy down;
  down.branch_sign = -1;
  auto mirrored = evolve_to_steady(params, down);
  CHECK(mirrored.branch == Branch::negative);
  for (int n = 0; n < 3; ++n)
    CHECK(std::abs(mirrored.state.alphas[n] + analytic.state.alphas[n]) < 1e-8);
}

TEST_CASE("relaxation below threshold lands in the normal phase") {
  auto params = sym_params(0.5, 0.1, 0.3, 0.15);
  auto solution = evolve_to_steady(params);
  CHECK(solution.phase == Phase::normal);
  for (const auto& a : solution.state.alphas) CHECK(std::abs(a) < 1e-6);
  CHECK(solution.state.spin_z == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("a hopeless time budget raises no_convergence") {
  auto params = ladder_params();
  ConvergenceSpec convergence;
  convergence.max_time = 1.0;
  bool caught = false;
  try {
    evolve_to_steady(params, {}, convergence);
  } catch (const Error& err) {
    caught = true;
    CHECK(err.code() == ErrorCode::no_convergence);
    CHECK(err.detail() > 0.0);
  }
  CHECK(caught);
}
