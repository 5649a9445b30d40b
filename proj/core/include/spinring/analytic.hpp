#pragma once

#include <complex>
#include <vector>

#include "spinring/model.hpp"
#include "spinring/solution.hpp"

namespace spinring {

// Critical coupling of the frequency-symmetric ring,
//   g_c = (1/2) sqrt[(Omega / N_c) (w + kappa^2 / w)],  w = omega_c + 2 J.
// Requires equal cavity frequencies; throws Error(frequency_collapse) when
// w = 0.
double g_c_symmetric(const ValidatedParams& params);

// Closed-form symmetric steady state. Above threshold:
//   Z = -(Omega / (8 N_c g^2)) (w + kappa^2 / w)
//   X = branch * sqrt(1/4 - Z^2),  Y = 0
//   alpha_n = (A + i B) / N_c with A = Omega X / (4 g Z), B = kappa A / w.
// The sign linkage A = Omega X / (4 g Z) makes the state an exact fixed
// point; with Z < 0 the negative branch carries positive field amplitudes.
// At or below g_c the normal solution is returned, flagged by its phase.
SteadySolution steady_symmetric(const ValidatedParams& params,
                                Branch branch = Branch::negative);

// Scaled steady-field profile of the three-cavity ring with arbitrary
// frequencies (the actual amplitudes are alpha_n = g X * reduced_field[n]):
//   reduced_field[n] = -2 (J + i kappa - w_{n-1}) (J + i kappa - w_{n+1}) / d
//   d = 2 J^3 + J^2 (3 i kappa - w_tot) + i prod_m (kappa + i w_m).
// Throws Error(singular_denominator) within 1e-12 of a resonance.
std::vector<std::complex<double>> reduced_field_profile(const ValidatedParams& params);

// Critical coupling of the detuned three-cavity ring,
//   g_c = sqrt(-Omega / sum_n 2 Re reduced_field[n]);
// all three amplitudes vanish together there. Throws Error(no_transition)
// when the profile sum is non-negative (no superradiant phase at any g).
double g_c_asymmetric(const ValidatedParams& params);

// Closed-form detuned steady state (three cavities):
//   Z = Omega / (4 g Atil),  Atil = g sum_n Re reduced_field[n]
//   X = branch * sqrt(1/4 - Z^2),  Y = 0,  alpha_n = g X reduced_field[n].
SteadySolution steady_asymmetric(const ValidatedParams& params,
                                 Branch branch = Branch::negative);

// Dispatch on frequency symmetry (symmetric form for any ring size, detuned
// form for three cavities).
double critical_coupling(const ValidatedParams& params);
SteadySolution steady_state(const ValidatedParams& params,
                            Branch branch = Branch::negative);

// Superradiant iff g > g_c; the boundary itself counts as normal.
Phase classify_phase(const ValidatedParams& params);

// Smallest detuning step where the superradiant phase closes at the given
// coupling, i.e. the root of Omega + g^2 sum_n 2 Re reduced_field[n] = 0 in
// the ladder step. Searches (0, 10] in emitter units by bracketing and
// bisection; params supply the ladder base (lowest cavity frequency),
// hopping and loss. Throws Error(no_root) when the coupling is below the
// symmetric threshold or no sign change is found.
double critical_delta(const ValidatedParams& params, double coupling);

}  // namespace spinring
