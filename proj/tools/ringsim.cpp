// Command-line front end for the spinring library. One binary, six
// subcommands: steady, evolve, currents, fluct, sweep, critical. Every
// run embeds the resolved parameter set in its output so artifacts are
// reproducible from their own header.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinring/analytic.hpp"
#include "spinring/currents.hpp"
#include "spinring/errors.hpp"
#include "spinring/fluctuations.hpp"
#include "spinring/io.hpp"
#include "spinring/meanfield.hpp"
#include "spinring/model.hpp"
#include "spinring/solution.hpp"
#include "spinring/stability.hpp"
#include "spinring/sweep.hpp"
#include "spinring/version.hpp"

namespace {

using nlohmann::json;

// Frequencies, couplings and rates on the command line are in units of the
// emitter frequency; --omega sets the absolute scale they are multiplied by
// before validation (reporting stays normalized).
struct GlobalArgs {
  double omega = 1.0;
  double omega_c = 0.5;
  double delta = 0.0;
  std::vector<double> freqs;
  double hopping = 0.0;
  double coupling = 0.0;
  double loss = 0.0;
  int cavities = 3;
  long long emitters = 0;
};

struct SteadyArgs {
  std::string branch = "negative";
  std::string out;
};

struct EvolveArgs {
  double t_end = 500.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  double seed_z = -0.499;
  std::string branch = "positive";
  std::string out;
};

struct CurrentsArgs {
  std::string branch = "negative";
  double tol = 1e-8;
  bool evolve = false;
  std::string out;
};

struct FluctArgs {
  std::string method = "lyapunov";
  std::string branch = "negative";
  std::string g_axis;
  double cap = 1e6;
  std::string out;
};

struct SweepArgs {
  std::vector<std::string> axes;
  std::string observable = "alpha_abs(1)";
  std::string format = "csv";
  std::string branch = "negative";
  int workers = 0;
  double cap = 1e6;
  bool prefer_evolution = false;
  std::string out;
};

struct CriticalArgs {
  bool as_json = false;
  std::string out;
};


spinring::SystemParams to_system(const GlobalArgs& a) {
  spinring::SystemParams sys;
  sys.omega_emitter = a.omega;
  std::vector<double> freqs = a.freqs;
  if (freqs.empty()) freqs = spinring::expand_ladder({a.omega_c, a.delta}, a.cavities);
  for (double& f : freqs) f *= a.omega;
  sys.cavity_freqs = std::move(freqs);
  sys.hopping = a.hopping * a.omega;
  sys.coupling = a.coupling * a.omega;
  sys.cavity_loss = a.loss * a.omega;
  if (a.emitters > 0) sys.n_emitters = a.emitters;
  return sys;
}

spinring::Branch parse_branch(const std::string& name) {
  return name == "positive" ? spinring::Branch::positive : spinring::Branch::negative;
}

double parse_num(const std::string& text) {
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw spinring::Error(spinring::ErrorCode::invalid_argument,
                          "not a number: '" + text + "'");
  }
}

int parse_count(const std::string& text) {
  try {
    std::size_t used = 0;
    int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw spinring::Error(spinring::ErrorCode::invalid_argument,
                          "not a count: '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

// name:min:max:count
spinring::AxisSpec parse_axis(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.size() != 4)
    throw spinring::Error(spinring::ErrorCode::invalid_argument,
                          "axis must be name:min:max:count, got '" + text + "'");
  spinring::AxisSpec axis;
  axis.parameter = spinring::parse_sweep_parameter(parts[0]);
  axis.min = parse_num(parts[1]);
  axis.max = parse_num(parts[2]);
  axis.count = parse_count(parts[3]);
  return axis;
}

// min:max:count
spinring::AxisSpec parse_range(const std::string& text, spinring::SweepParameter what) {
  auto parts = split(text, ':');
  if (parts.size() != 3)
    throw spinring::Error(spinring::ErrorCode::invalid_argument,
                          "range must be min:max:count, got '" + text + "'");
  spinring::AxisSpec axis;
  axis.parameter = what;
  axis.min = parse_num(parts[0]);
  axis.max = parse_num(parts[1]);
  axis.count = parse_count(parts[2]);
  return axis;
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw spinring::Error(spinring::ErrorCode::io_error, "cannot open '" + path + "'");
  body(out);
  out.flush();
  if (!out)
    throw spinring::Error(spinring::ErrorCode::io_error, "write failed on '" + path + "'");
}

json params_json(const spinring::SystemParams& sys) {
  json j;
  j["omega_emitter"] = sys.omega_emitter;
  j["cavity_freqs"] = sys.cavity_freqs;
  j["hopping"] = sys.hopping;
  j["coupling"] = sys.coupling;
  j["cavity_loss"] = sys.cavity_loss;
  if (sys.n_emitters) j["n_emitters"] = *sys.n_emitters;
  return j;
}

json state_json(const spinring::MeanFieldState& state) {
  json j;
  std::vector<double> re, im;
  for (const auto& a : state.alphas) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  j["alpha_re"] = re;
  j["alpha_im"] = im;
  j["spin_x"] = state.spin_x;
  j["spin_y"] = state.spin_y;
  j["spin_z"] = state.spin_z;
  return j;
}

// closed forms where they exist, relaxation otherwise
spinring::SteadySolution resolve_steady(const spinring::ValidatedParams& params,
                                        spinring::Branch branch, bool force_evolve) {
  const bool closed =
      !force_evolve && (params.symmetric() || params.n_cavities() == 3);
  if (closed) return spinring::steady_state(params, branch);
  spinring::SeedPolicy seed;
  seed.branch_sign = branch == spinring::Branch::positive ? +1 : -1;
  return spinring::evolve_to_steady(params, seed);
}

int run_steady(const GlobalArgs& ga, const SteadyArgs& args) {
  auto params = spinring::validate(to_system(ga));
  auto solution = spinring::steady_state(params, parse_branch(args.branch));
  auto verdict = spinring::classify_into(solution, params);
  auto report = spinring::kirchhoff_audit(solution, params);

  json j;
  j["params"] = params_json(params.raw());
  j["phase"] = spinring::to_string(solution.phase);
  j["branch"] = spinring::to_string(solution.branch);
  j["provenance"] = spinring::to_string(solution.provenance);
  j["residual"] = solution.residual;
  j["state"] = state_json(solution.state);
  j["stability"] = {{"max_real_part", verdict.max_real_part},
                    {"stable", verdict.stable}};
  j["currents"] = json::parse(spinring::to_json(report));
  with_output(args.out, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  return 0;
}

int run_evolve(const GlobalArgs& ga, const EvolveArgs& args) {
  auto params = spinring::validate(to_system(ga));
  spinring::SeedPolicy seed;
  seed.initial_z = args.seed_z;
  seed.branch_sign = parse_branch(args.branch) == spinring::Branch::positive ? +1 : -1;
  spinring::IntegrateOptions opts;
  opts.rtol = args.rtol;
  opts.atol = args.atol;
  opts.record = true;
  auto trajectory =
      spinring::integrate(seed.make(params.n_cavities()), params, args.t_end, opts);
  with_output(args.out,
              [&](std::ostream& out) { spinring::write_trajectory_csv(trajectory, out); });
  return 0;
}

int run_currents(const GlobalArgs& ga, const CurrentsArgs& args) {
  auto params = spinring::validate(to_system(ga));
  auto solution = resolve_steady(params, parse_branch(args.branch), args.evolve);
  auto report = spinring::kirchhoff_audit(solution, params, args.tol);

  json j;
  j["params"] = params_json(params.raw());
  j["phase"] = spinring::to_string(solution.phase);
  j["branch"] = spinring::to_string(solution.branch);
  j["provenance"] = spinring::to_string(solution.provenance);
  j["state"] = state_json(solution.state);
  j["currents"] = json::parse(spinring::to_json(report));
  with_output(args.out, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  return 0;
}

int run_fluct(const GlobalArgs& ga, const FluctArgs& args) {
  auto params = spinring::validate(to_system(ga));
  const auto method = args.method == "correlator"
                          ? spinring::FluctuationMethod::correlator
                          : spinring::FluctuationMethod::lyapunov;
  const auto branch = parse_branch(args.branch);

  std::vector<double> couplings;
  if (args.g_axis.empty()) {
    couplings.push_back(params.coupling());
  } else {
    auto axis = parse_range(args.g_axis, spinring::SweepParameter::coupling);
    couplings = spinring::axis_values(axis);
  }

  with_output(args.out, [&](std::ostream& out) {
    out << spinring::params_comment(params.raw()) << '\n';
    out << "g,delta";
    for (int n = 0; n < params.n_cavities(); ++n) out << ",fluct_" << n + 1;
    out << ",status\n";
    for (double g : couplings) {
      auto point = params.with_coupling(g);
      auto solution = resolve_steady(point, branch, false);
      auto fluct = spinring::photon_number_fluctuations(solution, point, method, args.cap);
      out << spinring::format_double(g) << ',' << spinring::format_double(ga.delta);
      for (int n = 0; n < params.n_cavities(); ++n) {
        out << ',';
        if (fluct.status == spinring::FluctuationStatus::ok)
          out << spinring::format_double(fluct.occupations[static_cast<std::size_t>(n)]);
      }
      out << ',' << spinring::to_string(fluct.status) << '\n';
    }
  });
  return 0;
}

int run_sweep(const GlobalArgs& ga, const SweepArgs& args) {
  if (!ga.freqs.empty())
    throw spinring::Error(spinring::ErrorCode::invalid_argument,
                          "sweep uses the ladder form; drop --freqs");
  spinring::SweepBase base;
  base.omega_emitter = ga.omega;
  base.base_freq = ga.omega_c * ga.omega;
  base.detuning = ga.delta * ga.omega;
  base.hopping = ga.hopping * ga.omega;
  base.coupling = ga.coupling * ga.omega;
  base.loss = ga.loss * ga.omega;
  base.n_cavities = ga.cavities;

  if (args.axes.empty() || args.axes.size() > 2)
    throw spinring::Error(spinring::ErrorCode::invalid_argument,
                          "sweep needs one or two --axis specs");
  std::vector<spinring::AxisSpec> axes;
  for (const auto& text : args.axes) {
    auto axis = parse_axis(text);
    axis.min *= ga.omega;
    axis.max *= ga.omega;
    axes.push_back(axis);
  }

  auto observable = spinring::parse_observable(args.observable, base.n_cavities);
  spinring::SweepOptions options;
  options.workers = args.workers;
  options.branch = parse_branch(args.branch);
  options.divergence_cap = args.cap;
  options.prefer_evolution = args.prefer_evolution;

  auto diagram = spinring::run_sweep(base, axes, observable, options);
  with_output(args.out, [&](std::ostream& out) {
    if (args.format == "json")
      spinring::export_json(diagram, out);
    else
      spinring::export_csv(diagram, out);
  });
  return 0;
}

int run_critical(const GlobalArgs& ga, const CriticalArgs& args) {
  auto params = spinring::validate(to_system(ga));
  const double g_c = spinring::critical_coupling(params);
  std::optional<double> delta_c;
  if (params.coupling() > 0.0 && params.n_cavities() == 3)
    delta_c = spinring::critical_delta(params, params.coupling());

  with_output(args.out, [&](std::ostream& out) {
    if (args.as_json) {
      json j;
      j["params"] = params_json(params.raw());
      j["g_c"] = g_c;
      if (delta_c) j["delta_c"] = *delta_c;
      out << j.dump(2) << '\n';
    } else {
      char line[64];
      std::snprintf(line, sizeof line, "g_c=%.6f", g_c);
      out << line << '\n';
      if (delta_c) {
        std::snprintf(line, sizeof line, "delta_c=%.6f", *delta_c);
        out << line << '\n';
      }
    }
  });
  return 0;
}

bool is_usage_error(spinring::ErrorCode code) {
  switch (code) {
    case spinring::ErrorCode::non_positive_frequency:
    case spinring::ErrorCode::negative_loss:
    case spinring::ErrorCode::emitter_loss_unsupported:
    case spinring::ErrorCode::ring_too_small:
    case spinring::ErrorCode::invalid_argument:
    case spinring::ErrorCode::io_error:
      return true;
    default:
      return false;
  }
}

int report_error(const char* code, const char* message, double detail) {
  json j;
  j["error"] = {{"code", code}, {"message", message}, {"detail", detail}};
  std::cerr << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-cavity ring simulator (library version " +
               std::string(spinring::version) + ")"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file; explicit flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  GlobalArgs ga;
  app.add_option("--omega", ga.omega, "emitter frequency, absolute scale")
      ->capture_default_str();
  app.add_option("--omega-c", ga.omega_c, "lowest cavity frequency (units of omega)")
      ->capture_default_str();
  app.add_option("--delta", ga.delta, "detuning ladder step (units of omega)")
      ->capture_default_str();
  app.add_option("--freqs", ga.freqs,
                 "explicit cavity frequencies, comma separated; overrides the ladder")
      ->delimiter(',');
  app.add_option("--j", ga.hopping, "nearest-neighbour hopping (units of omega)")
      ->capture_default_str();
  app.add_option("--kappa", ga.loss, "cavity loss rate (units of omega)")
      ->capture_default_str();
  app.add_option("--g", ga.coupling, "emitter-cavity coupling (units of omega)")
      ->capture_default_str();
  app.add_option("--cavities", ga.cavities, "ring size when --freqs is absent")
      ->capture_default_str();
  app.add_option("--emitters", ga.emitters, "emitter count, absolute-scale reporting")
      ->check(CLI::NonNegativeNumber);

  SteadyArgs steady_args;
  auto* steady = app.add_subcommand("steady", "closed-form steady state as JSON");
  steady->fallthrough();
  steady->add_option("--branch", steady_args.branch, "parity branch")
      ->check(CLI::IsMember({"negative", "positive"}))
      ->capture_default_str();
  steady->add_option("-o,--out", steady_args.out, "output path (default stdout)");

  EvolveArgs evolve_args;
  auto* evolve = app.add_subcommand("evolve", "integrate the mean-field flow to CSV");
  evolve->fallthrough();
  evolve->add_option("--t-end", evolve_args.t_end, "integration horizon")
      ->capture_default_str();
  evolve->add_option("--rtol", evolve_args.rtol, "relative tolerance")
      ->capture_default_str();
  evolve->add_option("--atol", evolve_args.atol, "absolute tolerance")
      ->capture_default_str();
  evolve->add_option("--seed-z", evolve_args.seed_z, "initial inversion")
      ->capture_default_str();
  evolve->add_option("--branch", evolve_args.branch, "sign of the initial X")
      ->check(CLI::IsMember({"negative", "positive"}))
      ->capture_default_str();
  evolve->add_option("-o,--out", evolve_args.out, "output path (default stdout)");

  CurrentsArgs currents_args;
  auto* currents = app.add_subcommand("currents", "steady currents and node audit");
  currents->fallthrough();
  currents->add_option("--branch", currents_args.branch, "parity branch")
      ->check(CLI::IsMember({"negative", "positive"}))
      ->capture_default_str();
  currents->add_option("--tol", currents_args.tol, "node-residual tolerance")
      ->capture_default_str();
  currents->add_flag("--evolve", currents_args.evolve,
                     "relax to the steady state instead of the closed form");
  currents->add_option("-o,--out", currents_args.out, "output path (default stdout)");

  FluctArgs fluct_args;
  auto* fluct = app.add_subcommand("fluct", "steady photon-number fluctuations as CSV");
  fluct->fallthrough();
  fluct->add_option("--method", fluct_args.method, "fluctuation route")
      ->check(CLI::IsMember({"lyapunov", "correlator"}))
      ->capture_default_str();
  fluct->add_option("--branch", fluct_args.branch, "parity branch")
      ->check(CLI::IsMember({"negative", "positive"}))
      ->capture_default_str();
  fluct->add_option("--g-axis", fluct_args.g_axis,
                    "coupling range min:max:count (default: single point at --g)");
  fluct->add_option("--cap", fluct_args.cap, "divergence cap")->capture_default_str();
  fluct->add_option("-o,--out", fluct_args.out, "output path (default stdout)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over one or two axes");
  sweep->fallthrough();
  sweep->add_option("--axis", sweep_args.axes,
                    "axis spec name:min:max:count (repeat for a second axis); "
                    "names: g, kappa, delta, j, omega_c");
  sweep->add_option("--observable", sweep_args.observable, "observable name")
      ->capture_default_str();
  sweep->add_option("--format", sweep_args.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->add_option("--branch", sweep_args.branch, "parity branch")
      ->check(CLI::IsMember({"negative", "positive"}))
      ->capture_default_str();
  sweep->add_option("--workers", sweep_args.workers, "worker threads, 0 = all cores")
      ->capture_default_str();
  sweep->add_option("--cap", sweep_args.cap, "divergence cap")->capture_default_str();
  sweep->add_flag("--prefer-evolution", sweep_args.prefer_evolution,
                  "use the relaxation path even where closed forms apply");
  sweep->add_option("-o,--out", sweep_args.out, "output path (default stdout)");

  CriticalArgs critical_args;
  auto* critical = app.add_subcommand(
      "critical", "critical coupling; with --g > 0 also the closing detuning");
  critical->fallthrough();
  critical->add_flag("--json", critical_args.as_json, "machine-readable output");
  critical->add_option("-o,--out", critical_args.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(steady)) return run_steady(ga, steady_args);
    if (app.got_subcommand(evolve)) return run_evolve(ga, evolve_args);
    if (app.got_subcommand(currents)) return run_currents(ga, currents_args);
    if (app.got_subcommand(fluct)) return run_fluct(ga, fluct_args);
    if (app.got_subcommand(sweep)) return run_sweep(ga, sweep_args);
    if (app.got_subcommand(critical)) return run_critical(ga, critical_args);
  } catch (const spinring::Error& err) {
    report_error(spinring::to_string(err.code()), err.what(), err.detail());
    return is_usage_error(err.code()) ? 1 : 2;
  } catch (const std::exception& err) {
    report_error("internal", err.what(), 0.0);
    return 2;
  }
  return 1;
}
