#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "spinring/errors.hpp"
#include "spinring/integrator.hpp"

using namespace spinring;

TEST_CASE("exponential decay matches the closed form at tight tolerance") {
  Eigen::VectorXd y(1);
  y << 1.0;
  auto rhs = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& out) {
    out = -s;
  };
  auto stats = integrate_adaptive(rhs, y, 0.0, 5.0, {1e-10, 1e-14});
  CHECK(std::abs(y[0] - std::exp(-5.0)) < 1e-10);
  CHECK(stats.accepted > 0);
  CHECK(stats.evals >= 6 * stats.accepted);
}

TEST_CASE("harmonic oscillator conserves energy over many periods") {
  Eigen::VectorXd y(2);
  y << 1.0, 0.0;
  auto rhs = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& out) {
    out.resize(2);
    out[0] = s[1];
    out[1] = -s[0];
  };
  integrate_adaptive(rhs, y, 0.0, 200.0, {1e-10, 1e-12});
  const double energy = y[0] * y[0] + y[1] * y[1];
  CHECK(std::abs(energy - 1.0) < 1e-7);
  CHECK(std::abs(y[0] - std::cos(200.0)) < 1e-6);
  CHECK(std::abs(y[1] + std::sin(200.0)) < 1e-6);
}

TEST_CASE("looser tolerance takes fewer steps") {
  auto rhs = [](double t, const Eigen::VectorXd& s, Eigen::VectorXd& out) {
    out.resize(1);
    out[0] = std::cos(t) * s[0];
  };
  Eigen::VectorXd tight(1), loose(1);
  tight << 1.0;
  loose << 1.0;
  auto stats_tight = integrate_adaptive(rhs, tight, 0.0, 20.0, {1e-11, 1e-13});
  auto stats_loose = integrate_adaptive(rhs, loose, 0.0, 20.0, {1e-5, 1e-8});
  CHECK(stats_tight.accepted > stats_loose.accepted);
  CHECK(std::abs(tight[0] - std::exp(std::sin(20.0))) < 1e-9);
}

TEST_CASE("observer sees the initial point and every accepted step") {
  Eigen::VectorXd y(1);
  y << 1.0;
  auto rhs = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& out) {
    out = -s;
  };
  std::vector<double> times;
  bool derivative_consistent = true;
  auto observer = [&](double t, const Eigen::VectorXd& s, const Eigen::VectorXd& ds) {
    times.push_back(t);
    if (std::abs(ds[0] + s[0]) > 1e-14) derivative_consistent = false;
    return StepFlow::run;
  };
  auto stats = integrate_adaptive(rhs, y, 0.0, 1.0, {}, observer);
  REQUIRE(!times.empty());
  CHECK(times.front() == 0.0);
  CHECK(times.back() == 1.0);
  CHECK(times.size() == stats.accepted + 1);
  CHECK(derivative_consistent);
  for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] > times[i - 1]);
}

TEST_CASE("halting observer stops the run early") {
  Eigen::VectorXd y(1);
  y << 1.0;
  auto rhs = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& out) {
    out = -s;
  };
  double last_t = -1.0;
  auto observer = [&](double t, const Eigen::VectorXd&, const Eigen::VectorXd&) {
    last_t = t;
    return t >= 0.5 ? StepFlow::halt : StepFlow::run;
  };
  integrate_adaptive(rhs, y, 0.0, 100.0, {}, observer);
  CHECK(last_t >= 0.5);
  CHECK(last_t < 100.0);
  CHECK(y[0] == doctest::Approx(std::exp(-last_t)).epsilon(1e-6));
}

TEST_CASE("max_step caps the accepted step size") {
  Eigen::VectorXd y(1);
  y << 1.0;
  auto rhs = [](double, const Eigen::VectorXd&, Eigen::VectorXd& out) {
    out.resize(1);
    out[0] = 0.0;
  };
  std::vector<double> times;
  auto observer = [&](double t, const Eigen::VectorXd&, const Eigen::VectorXd&) {
    times.push_back(t);
    return StepFlow::run;
  };
  OdeOptions opts;
  opts.max_step = 0.25;
  integrate_adaptive(rhs, y, 0.0, 2.0, opts, observer);
  for (std::size_t i = 1; i < times.size(); ++i)
    CHECK(times[i] - times[i - 1] <= 0.25 + 1e-12);
}

TEST_CASE("finite-time blowup raises a structured error") {
  Eigen::VectorXd y(1);
  y << 1.0;
  auto rhs = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& out) {
    out.resize(1);
    out[0] = s[0] * s[0];
  };
  bool caught = false;
  try {
    integrate_adaptive(rhs, y, 0.0, 2.0, {1e-8, 1e-10});
  } catch (const Error& err) {
    caught = true;
    CHECK((err.code() == ErrorCode::non_finite_state ||
           err.code() == ErrorCode::step_size_underflow));
  }
  CHECK(caught);
}

TEST_CASE("step budget exhaustion raises no_convergence") {
  Eigen::VectorXd y(2);
  y << 1.0, 0.0;
  auto rhs = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& out) {
    out.resize(2);
    out[0] = s[1];
    out[1] = -s[0];
  };
  OdeOptions opts;
  opts.max_steps = 10;
  bool caught = false;
  try {
    integrate_adaptive(rhs, y, 0.0, 1000.0, opts);
  } catch (const Error& err) {
    caught = true;
    CHECK(err.code() == ErrorCode::no_convergence);
  }
  CHECK(caught);
}
