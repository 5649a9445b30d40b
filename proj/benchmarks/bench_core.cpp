#include <benchmark/benchmark.h>

#include "spinring/analytic.hpp"
#include "spinring/currents.hpp"
#include "spinring/fluctuations.hpp"
#include "spinring/meanfield.hpp"
#include "spinring/stability.hpp"
#include "spinring/sweep.hpp"

using namespace spinring;

namespace {

ValidatedParams detuned() {
  return validate_ladder(1.0, {0.1, 0.5}, 3, 0.2, 0.35, 0.3);
}

void bm_rhs(benchmark::State& state) {
  auto params = detuned();
  Eigen::VectorXd flat = pack_state(SeedPolicy{}.make(3));
  Eigen::VectorXd out(flat.size());
  for (auto _ : state) {
    rhs_packed(params, flat, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_rhs);

void bm_integrate_short(benchmark::State& state) {
  auto params = detuned();
  IntegrateOptions opts;
  opts.record = false;
  for (auto _ : state) {
    auto trajectory = integrate(SeedPolicy{}.make(3), params, 10.0, opts);
    benchmark::DoNotOptimize(trajectory.stats.accepted);
  }
}
BENCHMARK(bm_integrate_short);

void bm_steady_symmetric(benchmark::State& state) {
  auto params = validate_ladder(1.0, {0.5, 0.0}, 3, 0.1, 0.35, 0.3);
  for (auto _ : state) {
    auto sol = steady_symmetric(params, Branch::negative);
    benchmark::DoNotOptimize(sol.state.spin_z);
  }
}
BENCHMARK(bm_steady_symmetric);

void bm_steady_asymmetric(benchmark::State& state) {
  auto params = detuned();
  for (auto _ : state) {
    auto sol = steady_asymmetric(params, Branch::negative);
    benchmark::DoNotOptimize(sol.state.spin_z);
  }
}
BENCHMARK(bm_steady_asymmetric);

void bm_critical_delta(benchmark::State& state) {
  auto params = validate_ladder(1.0, {0.1, 0.0}, 3, 0.2, 0.0, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(critical_delta(params, 0.35));
  }
}
BENCHMARK(bm_critical_delta);

void bm_stability_spectrum(benchmark::State& state) {
  auto params = detuned();
  auto sol = steady_asymmetric(params, Branch::negative);
  for (auto _ : state) {
    auto values = eigenvalues(build_matrix(sol, params));
    benchmark::DoNotOptimize(values.data());
  }
}
BENCHMARK(bm_stability_spectrum);

void bm_currents(benchmark::State& state) {
  auto params = detuned();
  auto sol = steady_asymmetric(params, Branch::negative);
  for (auto _ : state) {
    auto report = kirchhoff_audit(sol, params);
    benchmark::DoNotOptimize(report.total);
  }
}
BENCHMARK(bm_currents);

void bm_lyapunov_covariance(benchmark::State& state) {
  auto params = detuned();
  auto sol = steady_asymmetric(params, Branch::negative);
  auto dynamics =
      assemble_linear_dynamics(fluctuation_coefficients(sol, params), params);
  for (auto _ : state) {
    auto block = steady_covariance(dynamics);
    benchmark::DoNotOptimize(block.cov.data());
  }
}
BENCHMARK(bm_lyapunov_covariance);

void bm_sweep_grid(benchmark::State& state) {
  SweepBase base;
  base.base_freq = 0.1;
  base.detuning = 0.5;
  base.hopping = 0.2;
  base.loss = 0.3;
  std::vector<AxisSpec> axes = {{SweepParameter::detuning, 0.1, 0.6, 8},
                                {SweepParameter::coupling, 0.3, 0.45, 8}};
  auto observable = parse_observable("total_current", 3);
  SweepOptions options;
  options.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto diagram = run_sweep(base, axes, observable, options);
    benchmark::DoNotOptimize(diagram.values.data());
  }
}
BENCHMARK(bm_sweep_grid)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
