#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

namespace spinring {

// Mean-field order parameters: one complex field amplitude per cavity plus
// the collective spin components. The spin lives on the sphere
// X^2 + Y^2 + Z^2 = 1/4; the flow conserves this exactly and the integrator
// is expected to hold it to within its tolerance (drift is measured in
// tests, never corrected).
struct MeanFieldState {
  std::vector<std::complex<double>> alphas;
  double spin_x = 0.0;
  double spin_y = 0.0;
  double spin_z = -0.5;

  int n_cavities() const { return static_cast<int>(alphas.size()); }
  double spin_norm_defect() const {
    return spin_x * spin_x + spin_y * spin_y + spin_z * spin_z - 0.25;
  }
};

// All cavities empty, every emitter in the ground state.
MeanFieldState normal_state(int n_cavities);

// Flat packing used by the integrator:
// [Re a_1 .. Re a_N, Im a_1 .. Im a_N, X, Y, Z], dimension 2N+3.
Eigen::VectorXd pack_state(const MeanFieldState& state);
MeanFieldState unpack_state(const Eigen::VectorXd& flat);

}  // namespace spinring
