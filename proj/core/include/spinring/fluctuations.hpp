#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "spinring/model.hpp"
#include "spinring/solution.hpp"

namespace spinring {

// Quadratic-fluctuation layer around a steady solution. The collective spin
// is bosonized; its mean value is absorbed into a displacement
//   beta = (X - iY) / sqrt(1/2 - Z),
// and the remaining quadratic Hamiltonian for the fluctuation modes c_n
// (cavities) and d (emitter) carries a dressed emitter frequency, an
// exchange coupling and an emitter squeezing term per cavity:
//   H = sum_n [w_n c_n^+ c_n + J (c_{n+1}^+ c_n + h.c.)] + ef d^+ d
//     + sum_n [ex (c_n^+ d + c_n d) + h.c.] + [sum_n sq_n] d^+ d^+ + h.c.
struct FluctuationCoefficients {
  std::complex<double> displacement;  // beta; real at Y = 0
  double remainder = 1.0;             // sqrt(1 - |beta|^2)
  double emitter_freq = 0.0;          // dressed emitter frequency
  std::complex<double> exchange;      // cavity-emitter exchange coupling
  std::vector<std::complex<double>> squeeze;  // per-cavity emitter squeezing

  std::complex<double> squeeze_sum() const;
};

// Throws Error(z_at_half) at the Z = 1/2 pole and Error(beta_overflow) when
// |beta| >= 1 (unphysical input). Normal phase gives (emitter frequency,
// coupling, 0).
FluctuationCoefficients fluctuation_coefficients(const SteadySolution& solution,
                                                 const ValidatedParams& params);

// Drift and diffusion over the quadratures [x_1, y_1, ..., x_N, y_N, u, v]
// (cavities then emitter) such that the covariance obeys
// dS/dt = A S + S A^T + D. Cavity loss contributes vacuum noise kappa on the
// cavity quadratures; the emitter mode is lossless.
struct LinearDynamics {
  Eigen::MatrixXd drift;
  Eigen::MatrixXd diffusion;
  int n_cavities = 0;
};

LinearDynamics assemble_linear_dynamics(const FluctuationCoefficients& coeffs,
                                        const ValidatedParams& params);

struct CovarianceBlock {
  Eigen::MatrixXd cov;  // symmetric, 2 (N_c + 1) quadratures
  int n_cavities = 0;

  // (⟨x^2⟩ + ⟨y^2⟩ - 1) / 2 for cavity n
  double mode_occupation(int n) const;
  double emitter_occupation() const;
  // most negative eigenvalue of cov + i/2 * symplectic form (>= 0 up to
  // solver tolerance for a physical state)
  double uncertainty_defect() const;
};

// Dense Lyapunov solve of A S + S A^T + D = 0. Requires every drift
// eigenvalue to satisfy Re < -1e-10; otherwise throws Error(marginal_drift)
// with the offending real part as detail.
CovarianceBlock steady_covariance(const LinearDynamics& dynamics);

// Fallback for marginal drift: integrate the covariance flow from vacuum
// until it settles or any diagonal entry passes the cap (then
// Error(diverged) with the runaway value as detail).
CovarianceBlock covariance_by_integration(const LinearDynamics& dynamics,
                                          double cap = 1e6, double t_end = 1e5);

enum class FluctuationMethod {
  lyapunov,    // direct solve, covariance integration when marginal
  correlator,  // independent route: normal-ordered correlator equations
};

enum class FluctuationStatus { ok, diverged };

struct PhotonFluctuations {
  std::vector<double> occupations;  // steady <c_n^+ c_n> per cavity
  FluctuationStatus status = FluctuationStatus::ok;
  FluctuationMethod method = FluctuationMethod::lyapunov;
};

const char* to_string(FluctuationStatus status);

PhotonFluctuations photon_number_fluctuations(
    const SteadySolution& solution, const ValidatedParams& params,
    FluctuationMethod method = FluctuationMethod::lyapunov, double cap = 1e6);

}  // namespace spinring
