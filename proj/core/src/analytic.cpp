#include "spinring/analytic.hpp"

#include <array>
#include <cmath>
#include <complex>

#include "spinring/meanfield.hpp"

namespace spinring {

namespace {

constexpr double kDenominatorFloor = 1e-12;

SteadySolution normal_solution(const ValidatedParams& params) {
  SteadySolution solution;
  solution.state = normal_state(params.n_cavities());
  solution.phase = Phase::normal;
  solution.branch = Branch::none;
  solution.provenance = Provenance::analytic;
  return solution;
}

double branch_sign(Branch branch) {
  switch (branch) {
    case Branch::positive:
      return 1.0;
    case Branch::negative:
      return -1.0;
    case Branch::none:
      break;
  }
  throw Error(ErrorCode::invalid_argument, "branch must be positive or negative");
}

// closed form for the rescaled three-mode fixed point profile
std::array<std::complex<double>, 3> profile_raw(const std::array<double, 3>& omegas,
                                                double hopping, double loss) {
  const std::complex<double> i(0.0, 1.0);
  const double j = hopping;
  const double omega_tot = omegas[0] + omegas[1] + omegas[2];
  std::complex<double> product(1.0, 0.0);
  for (double w : omegas) product *= std::complex<double>(loss, w);
  const std::complex<double> denom =
      2.0 * j * j * j + j * j * (3.0 * i * loss - omega_tot) + i * product;
  if (std::abs(denom) < kDenominatorFloor)
    throw Error(ErrorCode::singular_denominator,
                "mode profile denominator vanishes; ring is resonant",
                std::abs(denom));
  std::array<std::complex<double>, 3> profile;
  for (int n = 0; n < 3; ++n) {
    const double w_prev = omegas[static_cast<std::size_t>((n + 2) % 3)];
    const double w_next = omegas[static_cast<std::size_t>((n + 1) % 3)];
    profile[static_cast<std::size_t>(n)] =
        -2.0 * (j + i * loss - w_prev) * (j + i * loss - w_next) / denom;
  }
  return profile;
}

double profile_re_sum_twice(const std::array<double, 3>& omegas, double hopping,
                            double loss) {
  const auto profile = profile_raw(omegas, hopping, loss);
  double sum = 0.0;
  for (const auto& v : profile) sum += 2.0 * v.real();
  return sum;
}

void finish_solution(SteadySolution& solution, const ValidatedParams& params,
                     Branch branch) {
  solution.phase = Phase::superradiant;
  solution.branch = branch;
  solution.provenance = Provenance::analytic;
  double re_sum = 0.0, im_sum = 0.0;
  for (const auto& a : solution.state.alphas) {
    re_sum += a.real();
    im_sum += a.imag();
  }
  solution.alpha_re_sum = re_sum;
  solution.alpha_im_sum = im_sum;
  solution.residual = rhs_norm(solution.state, params);
}

}  // namespace

double g_c_symmetric(const ValidatedParams& params) {
  if (!params.symmetric())
    throw Error(ErrorCode::invalid_argument,
                "symmetric critical coupling needs equal cavity frequencies");
  const double w = params.omega(0) + 2.0 * params.hopping();
  if (w == 0.0)
    throw Error(ErrorCode::frequency_collapse,
                "collective mode frequency vanishes", w);
  const double h = w + params.loss() * params.loss() / w;
  if (h <= 0.0)
    throw Error(ErrorCode::frequency_collapse,
                "collective mode frequency is not positive", h);
  return 0.5 * std::sqrt(params.emitter_freq() * h /
                         static_cast<double>(params.n_cavities()));
}

SteadySolution steady_symmetric(const ValidatedParams& params, Branch branch) {
  const double sign = branch_sign(branch);
  const double g_c = g_c_symmetric(params);
  const double g = params.coupling();
  if (g <= g_c) return normal_solution(params);

  const int n = params.n_cavities();
  const double omega0 = params.emitter_freq();
  const double w = params.omega(0) + 2.0 * params.hopping();
  const double h = w + params.loss() * params.loss() / w;

  const double z = -omega0 * h / (8.0 * n * g * g);
  const double x = sign * std::sqrt(0.25 - z * z);
  const double a = omega0 * x / (4.0 * g * z);
  const double b = params.loss() * a / w;

  SteadySolution solution;
  solution.state.alphas.assign(static_cast<std::size_t>(n),
                               std::complex<double>(a / n, b / n));
  solution.state.spin_x = x;
  solution.state.spin_y = 0.0;
  solution.state.spin_z = z;
  finish_solution(solution, params, branch);
  return solution;
}

std::vector<std::complex<double>> reduced_field_profile(const ValidatedParams& params) {
  if (params.n_cavities() != 3)
    throw Error(ErrorCode::invalid_argument,
                "mode profile closed form needs a three-cavity ring");
  const std::array<double, 3> omegas{params.omega(0), params.omega(1),
                                     params.omega(2)};
  const auto profile = profile_raw(omegas, params.hopping(), params.loss());
  return {profile.begin(), profile.end()};
}

double g_c_asymmetric(const ValidatedParams& params) {
  if (params.n_cavities() != 3)
    throw Error(ErrorCode::invalid_argument,
                "asymmetric critical coupling needs a three-cavity ring");
  const std::array<double, 3> omegas{params.omega(0), params.omega(1),
                                     params.omega(2)};
  const double sum = profile_re_sum_twice(omegas, params.hopping(), params.loss());
  if (sum >= 0.0)
    throw Error(ErrorCode::no_transition,
                "mode profile sum is non-negative; no transition at any coupling",
                sum);
  return std::sqrt(-params.emitter_freq() / sum);
}

SteadySolution steady_asymmetric(const ValidatedParams& params, Branch branch) {
  const double sign = branch_sign(branch);
  if (params.n_cavities() != 3)
    throw Error(ErrorCode::invalid_argument,
                "asymmetric closed form needs a three-cavity ring");
  const std::array<double, 3> omegas{params.omega(0), params.omega(1),
                                     params.omega(2)};
  const auto profile = profile_raw(omegas, params.hopping(), params.loss());
  double sum = 0.0;
  for (const auto& v : profile) sum += 2.0 * v.real();

  const double g = params.coupling();
  const bool transitions = sum < 0.0;
  if (!transitions || g <= std::sqrt(-params.emitter_freq() / sum)) {
    SteadySolution solution = normal_solution(params);
    solution.reduced_field.assign(profile.begin(), profile.end());
    solution.reduced_re_sum = 0.5 * sum;
    return solution;
  }

  const double z = params.emitter_freq() / (2.0 * g * g * sum);
  const double x = sign * std::sqrt(0.25 - z * z);

  SteadySolution solution;
  solution.state.alphas.resize(3);
  for (int n = 0; n < 3; ++n)
    solution.state.alphas[static_cast<std::size_t>(n)] =
        g * x * profile[static_cast<std::size_t>(n)];
  solution.state.spin_x = x;
  solution.state.spin_y = 0.0;
  solution.state.spin_z = z;
  solution.reduced_field.assign(profile.begin(), profile.end());
  solution.reduced_re_sum = 0.5 * sum;
  finish_solution(solution, params, branch);
  return solution;
}

double critical_coupling(const ValidatedParams& params) {
  if (params.symmetric()) return g_c_symmetric(params);
  if (params.n_cavities() == 3) return g_c_asymmetric(params);
  throw Error(ErrorCode::invalid_argument,
              "no closed form for asymmetric rings beyond three cavities");
}

SteadySolution steady_state(const ValidatedParams& params, Branch branch) {
  if (params.symmetric()) return steady_symmetric(params, branch);
  if (params.n_cavities() == 3) return steady_asymmetric(params, branch);
  throw Error(ErrorCode::invalid_argument,
              "no closed form for asymmetric rings beyond three cavities");
}

Phase classify_phase(const ValidatedParams& params) {
  return params.coupling() > critical_coupling(params) ? Phase::superradiant
                                                       : Phase::normal;
}

double critical_delta(const ValidatedParams& params, double coupling) {
  if (params.n_cavities() != 3)
    throw Error(ErrorCode::invalid_argument,
                "detuning boundary needs a three-cavity ring");
  if (!(coupling > 0.0))
    throw Error(ErrorCode::invalid_argument, "coupling must be positive");

  const double base = params.omega(0);
  const double omega0 = params.emitter_freq();
  const auto gap = [&](double delta) {
    const std::array<double, 3> omegas{base, base + delta, base + 2.0 * delta};
    return omega0 + coupling * coupling *
                        profile_re_sum_twice(omegas, params.hopping(), params.loss());
  };

  const double f0 = gap(0.0);
  if (!(f0 < 0.0))
    throw Error(ErrorCode::no_root,
                "coupling is below the uniform-ring critical value; the phase "
                "boundary never crosses",
                f0);

  constexpr double kDeltaMax = 10.0;
  constexpr int kScanSteps = 4000;
  double lo = 0.0, f_lo = f0;
  bool have_lo = true;
  for (int k = 1; k <= kScanSteps; ++k) {
    const double delta = kDeltaMax * static_cast<double>(k) / kScanSteps;
    double f;
    try {
      f = gap(delta);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::singular_denominator) throw;
      have_lo = false;
      continue;
    }
    if (have_lo && f_lo < 0.0 && f >= 0.0) {
      double a = lo, b = delta;
      for (int it = 0; it < 200 && (b - a) > 1e-10 * std::max(1.0, b); ++it) {
        const double mid = 0.5 * (a + b);
        double fm;
        try {
          fm = gap(mid);
        } catch (const Error& err) {
          if (err.code() != ErrorCode::singular_denominator) throw;
          a = mid;
          continue;
        }
        if (fm < 0.0)
          a = mid;
        else
          b = mid;
      }
      return 0.5 * (a + b);
    }
    lo = delta;
    f_lo = f;
    have_lo = true;
  }
  throw Error(ErrorCode::no_root, "no phase boundary below the detuning search bound",
              kDeltaMax);
}

}  // namespace spinring
