#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "spinring/model.hpp"
#include "spinring/solution.hpp"

namespace spinring {

// Linearization of the mean-field flow around a steady solution, written in
// field quadratures dq_n = (da_n + da_n*)/sqrt2, dp_n = i(da_n* - da_n)/sqrt2
// and the spin fluctuations (dX, dY); dZ is eliminated through the spin-norm
// constraint, dZ = -(X dX + Y dY)/Z. Basis ordering
// [q_1, p_1, ..., q_N, p_N, X, Y], dimension 2 N_c + 2.
struct StabilityMatrix {
  Eigen::MatrixXd entries;
  int n_cavities = 0;
};

struct StabilityVerdict {
  std::vector<std::complex<double>> eigenvalues;  // descending real part
  double max_real_part = 0.0;
  bool stable = false;
};

// Throws Error(zero_z) when |Z| is too small for the constraint elimination
// and Error(not_steady) when the solution does not satisfy the fixed-point
// equations to 1e-8.
StabilityMatrix build_matrix(const SteadySolution& solution,
                             const ValidatedParams& params);

// All eigenvalues of the dense non-symmetric matrix, sorted by descending
// real part (imaginary part descending on ties). Throws Error(eigen_failure)
// if the QR iteration does not converge.
std::vector<std::complex<double>> eigenvalues(const StabilityMatrix& matrix);

StabilityVerdict classify(const SteadySolution& solution, const ValidatedParams& params,
                          double tol_stability = 1e-8);
// same, and records the verdict on the solution
StabilityVerdict classify_into(SteadySolution& solution, const ValidatedParams& params,
                               double tol_stability = 1e-8);

}  // namespace spinring
