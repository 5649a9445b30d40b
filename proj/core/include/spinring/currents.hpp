#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spinring/model.hpp"
#include "spinring/solution.hpp"
#include "spinring/state.hpp"

namespace spinring {

// All currents are per emitter (the natural mean-field scale); multiply by
// n_emitters for absolute values. Positive bond current means net photon
// flow from cavity n to cavity n+1.

// i J (a_n* a_{n+1} - a_n a_{n+1}*) = -2 J Im(a_n* a_{n+1}), bond n -> n+1
double bond_current(const MeanFieldState& state, const ValidatedParams& params, int n);
// ring sum of the bond currents
double total_current(const MeanFieldState& state, const ValidatedParams& params);
// rotating and counter-rotating emitter-cavity exchange currents
//   first  = i g [a_n (X + iY) - a_n* (X - iY)]
//   second = i g [a_n (X - iY) - a_n* (X + iY)]
// both reduce to -2 g X Im a_n at Y = 0
std::pair<double, double> spin_cavity_currents(const MeanFieldState& state,
                                               const ValidatedParams& params, int n);
// photon leakage 2 kappa |a_n|^2
double dissipation_current(const MeanFieldState& state, const ValidatedParams& params,
                           int n);

struct CurrentReport {
  std::vector<double> bond;        // n -> n+1
  double total = 0.0;
  std::vector<double> spin_rw;     // rotating exchange
  std::vector<double> spin_crw;    // counter-rotating exchange
  std::vector<double> dissipation;
  // node law: bond_{n-1} - bond_n + spin_rw_n + spin_crw_n - dissipation_n;
  // identically the photon-number rate d|a_n|^2/dt, so it vanishes only at
  // steady states
  std::vector<double> node_residuals;
  std::vector<double> spin_node_residuals;  // spin_rw - spin_crw
  double tolerance = 1e-8;
  bool steady_input = true;      // rhs residual was below the steady threshold
  bool within_tolerance = true;  // every node residual within `tolerance`
};

// Full report for any state; residuals are diagnostic for transients.
CurrentReport current_report(const MeanFieldState& state, const ValidatedParams& params,
                             double tol = 1e-8);
// Same, gated on a steady solution: marks the report when the input is not
// actually steady (informative, never throws for that).
CurrentReport kirchhoff_audit(const SteadySolution& solution,
                              const ValidatedParams& params, double tol = 1e-8);

std::string to_json(const CurrentReport& report);
void write_csv(const CurrentReport& report, std::ostream& out);

}  // namespace spinring
