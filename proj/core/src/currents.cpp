#include "spinring/currents.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "spinring/io.hpp"
#include "spinring/meanfield.hpp"

namespace spinring {

namespace {

void check_index(const ValidatedParams& params, int n) {
  if (n < 0 || n >= params.n_cavities())
    throw Error(ErrorCode::invalid_argument, "cavity index out of range");
}

}  // namespace

double bond_current(const MeanFieldState& state, const ValidatedParams& params, int n) {
  check_index(params, n);
  const auto& a = state.alphas[static_cast<std::size_t>(n)];
  const auto& b = state.alphas[static_cast<std::size_t>(params.next(n))];
  return -2.0 * params.hopping() * std::imag(std::conj(a) * b);
}

double total_current(const MeanFieldState& state, const ValidatedParams& params) {
  double sum = 0.0;
  for (int n = 0; n < params.n_cavities(); ++n) sum += bond_current(state, params, n);
  return sum;
}

std::pair<double, double> spin_cavity_currents(const MeanFieldState& state,
                                               const ValidatedParams& params, int n) {
  check_index(params, n);
  const auto& a = state.alphas[static_cast<std::size_t>(n)];
  const std::complex<double> up(state.spin_x, state.spin_y);
  const double g = params.coupling();
  // i g (a w - conj(a w*)) = -2 g Im(a w)
  const double rotating = -2.0 * g * std::imag(a * up);
  const double counter = -2.0 * g * std::imag(a * std::conj(up));
  return {rotating, counter};
}

double dissipation_current(const MeanFieldState& state, const ValidatedParams& params,
                           int n) {
  check_index(params, n);
  return 2.0 * params.loss() * std::norm(state.alphas[static_cast<std::size_t>(n)]);
}

CurrentReport current_report(const MeanFieldState& state, const ValidatedParams& params,
                             double tol) {
  const int n = params.n_cavities();
  CurrentReport report;
  report.tolerance = tol;
  report.bond.resize(static_cast<std::size_t>(n));
  report.spin_rw.resize(static_cast<std::size_t>(n));
  report.spin_crw.resize(static_cast<std::size_t>(n));
  report.dissipation.resize(static_cast<std::size_t>(n));
  report.node_residuals.resize(static_cast<std::size_t>(n));
  report.spin_node_residuals.resize(static_cast<std::size_t>(n));

  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    report.bond[i] = bond_current(state, params, k);
    const auto spin = spin_cavity_currents(state, params, k);
    report.spin_rw[i] = spin.first;
    report.spin_crw[i] = spin.second;
    report.dissipation[i] = dissipation_current(state, params, k);
  }
  report.total = 0.0;
  for (double b : report.bond) report.total += b;

  report.within_tolerance = true;
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const auto prev = static_cast<std::size_t>(params.prev(k));
    // node law; off a fixed point this equals the photon-number rate
    report.node_residuals[i] = report.bond[prev] - report.bond[i] +
                               report.spin_rw[i] + report.spin_crw[i] -
                               report.dissipation[i];
    report.spin_node_residuals[i] = report.spin_rw[i] - report.spin_crw[i];
    if (std::abs(report.node_residuals[i]) > tol ||
        std::abs(report.spin_node_residuals[i]) > tol)
      report.within_tolerance = false;
  }
  report.steady_input = rhs_norm(state, params) <= 1e-8;
  return report;
}

CurrentReport kirchhoff_audit(const SteadySolution& solution,
                              const ValidatedParams& params, double tol) {
  return current_report(solution.state, params, tol);
}

std::string to_json(const CurrentReport& report) {
  nlohmann::json j;
  j["bond"] = report.bond;
  j["total"] = report.total;
  j["spin_rw"] = report.spin_rw;
  j["spin_crw"] = report.spin_crw;
  j["dissipation"] = report.dissipation;
  j["node_residuals"] = report.node_residuals;
  j["spin_node_residuals"] = report.spin_node_residuals;
  j["tolerance"] = report.tolerance;
  j["steady_input"] = report.steady_input;
  j["within_tolerance"] = report.within_tolerance;
  return j.dump(2);
}

void write_csv(const CurrentReport& report, std::ostream& out) {
  out << "cavity,bond_out,spin_rw,spin_crw,dissipation,node_residual\n";
  for (std::size_t i = 0; i < report.bond.size(); ++i) {
    out << (i + 1) << ',' << format_double(report.bond[i]) << ','
        << format_double(report.spin_rw[i]) << ','
        << format_double(report.spin_crw[i]) << ','
        << format_double(report.dissipation[i]) << ','
        << format_double(report.node_residuals[i]) << '\n';
  }
  out << "total," << format_double(report.total) << ",,,,\n";
}

}  // namespace spinring
