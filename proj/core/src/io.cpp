#include "spinring/io.hpp"

#include <charconv>
#include <ostream>

namespace spinring {

std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string params_comment(const SystemParams& params) {
  std::string line = "# omega_emitter=" + format_double(params.omega_emitter);
  line += " cavity_freqs=";
  for (std::size_t i = 0; i < params.cavity_freqs.size(); ++i) {
    if (i) line += ',';
    line += format_double(params.cavity_freqs[i]);
  }
  line += " hopping=" + format_double(params.hopping);
  line += " coupling=" + format_double(params.coupling);
  line += " cavity_loss=" + format_double(params.cavity_loss);
  if (params.n_emitters) line += " n_emitters=" + std::to_string(*params.n_emitters);
  return line;
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  out << params_comment(trajectory.params) << '\n';
  const int n =
      trajectory.states.empty() ? 0 : trajectory.states.front().n_cavities();
  out << 't';
  for (int i = 1; i <= n; ++i) out << ",re_alpha_" << i;
  for (int i = 1; i <= n; ++i) out << ",im_alpha_" << i;
  out << ",spin_x,spin_y,spin_z\n";
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const MeanFieldState& state = trajectory.states[k];
    out << format_double(trajectory.times[k]);
    for (int i = 0; i < n; ++i)
      out << ',' << format_double(state.alphas[static_cast<std::size_t>(i)].real());
    for (int i = 0; i < n; ++i)
      out << ',' << format_double(state.alphas[static_cast<std::size_t>(i)].imag());
    out << ',' << format_double(state.spin_x) << ',' << format_double(state.spin_y)
        << ',' << format_double(state.spin_z) << '\n';
  }
}

}  // namespace spinring
