#include "spinring/sweep.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "spinring/analytic.hpp"
#include "spinring/currents.hpp"
#include "spinring/fluctuations.hpp"
#include "spinring/io.hpp"
#include "spinring/meanfield.hpp"
#include "spinring/stability.hpp"
#include "spinring/version.hpp"

namespace spinring {

const char* to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::coupling:
      return "g";
    case SweepParameter::loss:
      return "kappa";
    case SweepParameter::detuning:
      return "delta";
    case SweepParameter::hopping:
      return "j";
    case SweepParameter::base_freq:
      return "omega_c";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "g") return SweepParameter::coupling;
  if (name == "kappa") return SweepParameter::loss;
  if (name == "delta") return SweepParameter::detuning;
  if (name == "j") return SweepParameter::hopping;
  if (name == "omega_c") return SweepParameter::base_freq;
  throw Error(ErrorCode::invalid_argument,
              "unknown sweep parameter '" + name +
                  "'; expected g, kappa, delta, j or omega_c");
}

std::vector<double> axis_values(const AxisSpec& axis) {
  if (axis.count < 2)
    throw Error(ErrorCode::invalid_argument, "axis needs at least two points");
  if (!(axis.min < axis.max))
    throw Error(ErrorCode::invalid_argument, "axis needs min < max");
  std::vector<double> values(static_cast<std::size_t>(axis.count));
  for (int i = 0; i < axis.count; ++i)
    values[static_cast<std::size_t>(i)] =
        axis.min + (axis.max - axis.min) *
                       (static_cast<double>(i) / (axis.count - 1));
  values.back() = axis.max;
  return values;
}

namespace {

bool observable_indexed(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::alpha_abs:
    case ObservableKind::bond_current:
    case ObservableKind::spin_current:
    case ObservableKind::photon_fluct:
      return true;
    default:
      return false;
  }
}

const char* observable_name(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::alpha_re:
      return "alpha_re";
    case ObservableKind::alpha_im:
      return "alpha_im";
    case ObservableKind::alpha_abs:
      return "alpha_abs";
    case ObservableKind::total_current:
      return "total_current";
    case ObservableKind::bond_current:
      return "bond_current";
    case ObservableKind::spin_current:
      return "spin_current";
    case ObservableKind::photon_fluct:
      return "photon_fluct";
    case ObservableKind::phase_label:
      return "phase_label";
    case ObservableKind::max_real_eig:
      return "max_real_eig";
  }
  return "?";
}

}  // namespace

Observable parse_observable(const std::string& text, int n_cavities) {
  std::string name = text;
  int index = 0;
  bool has_index = false;
  const auto open = text.find('(');
  if (open != std::string::npos) {
    if (text.back() != ')')
      throw Error(ErrorCode::invalid_argument,
                  "malformed observable '" + text + "'");
    name = text.substr(0, open);
    const std::string digits = text.substr(open + 1, text.size() - open - 2);
    try {
      index = std::stoi(digits);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument,
                  "malformed observable index in '" + text + "'");
    }
    has_index = true;
  }

  Observable observable;
  bool known = false;
  for (ObservableKind kind :
       {ObservableKind::alpha_re, ObservableKind::alpha_im, ObservableKind::alpha_abs,
        ObservableKind::total_current, ObservableKind::bond_current,
        ObservableKind::spin_current, ObservableKind::photon_fluct,
        ObservableKind::phase_label, ObservableKind::max_real_eig}) {
    if (name == observable_name(kind)) {
      observable.kind = kind;
      known = true;
      break;
    }
  }
  if (!known)
    throw Error(ErrorCode::invalid_argument, "unknown observable '" + text + "'");
  if (observable_indexed(observable.kind) != has_index)
    throw Error(ErrorCode::invalid_argument,
                observable_indexed(observable.kind)
                    ? "observable '" + name + "' needs a cavity index"
                    : "observable '" + name + "' takes no index");
  if (has_index) {
    if (index < 1 || index > n_cavities)
      throw Error(ErrorCode::invalid_argument,
                  "observable index out of range in '" + text + "'");
    observable.index = index - 1;
  }
  return observable;
}

std::string to_string(const Observable& observable) {
  std::string text = observable_name(observable.kind);
  if (observable_indexed(observable.kind))
    text += "(" + std::to_string(observable.index + 1) + ")";
  return text;
}

std::string to_string(CellStatus status, const std::string& error_code) {
  switch (status) {
    case CellStatus::ok:
      return "ok";
    case CellStatus::normal_phase:
      return "normal_phase";
    case CellStatus::diverged:
      return "diverged";
    case CellStatus::error:
      return error_code.empty() ? "error" : error_code;
  }
  return "error";
}

std::size_t PhaseDiagram::cell_count() const {
  std::size_t count = 1;
  for (const auto& axis : axes) count *= static_cast<std::size_t>(axis.count);
  return axes.empty() ? 0 : count;
}

namespace {

SystemParams base_to_params(const SweepBase& base) {
  SystemParams params;
  params.omega_emitter = base.omega_emitter;
  params.cavity_freqs =
      expand_ladder({base.base_freq, base.detuning}, base.n_cavities);
  params.hopping = base.hopping;
  params.coupling = base.coupling;
  params.cavity_loss = base.loss;
  return params;
}

void apply_parameter(SweepBase& base, SweepParameter parameter, double value) {
  switch (parameter) {
    case SweepParameter::coupling:
      base.coupling = value;
      return;
    case SweepParameter::loss:
      base.loss = value;
      return;
    case SweepParameter::detuning:
      base.detuning = value;
      return;
    case SweepParameter::hopping:
      base.hopping = value;
      return;
    case SweepParameter::base_freq:
      base.base_freq = value;
      return;
  }
}

struct CellResult {
  double value = std::numeric_limits<double>::quiet_NaN();
  CellStatus status = CellStatus::ok;
  std::string error_code;
};

CellResult evaluate_cell(const SweepBase& point, const Observable& observable,
                         const SweepOptions& options) {
  CellResult cell;
  try {
    const ValidatedParams params = validate(base_to_params(point));
    SteadySolution solution;
    const bool closed_form =
        !options.prefer_evolution &&
        (params.symmetric() || params.n_cavities() == 3);
    if (closed_form) {
      solution = steady_state(params, options.branch);
    } else {
      SeedPolicy seed;
      seed.branch_sign = options.branch == Branch::positive ? 1 : -1;
      solution = evolve_to_steady(params, seed, {});
    }
    if (solution.phase == Phase::normal) cell.status = CellStatus::normal_phase;

    switch (observable.kind) {
      case ObservableKind::alpha_re:
        cell.value = solution.alpha_re_sum;
        break;
      case ObservableKind::alpha_im:
        cell.value = solution.alpha_im_sum;
        break;
      case ObservableKind::alpha_abs:
        cell.value =
            std::abs(solution.state.alphas[static_cast<std::size_t>(observable.index)]);
        break;
      case ObservableKind::total_current:
        cell.value = total_current(solution.state, params);
        break;
      case ObservableKind::bond_current:
        cell.value = bond_current(solution.state, params, observable.index);
        break;
      case ObservableKind::spin_current:
        cell.value =
            spin_cavity_currents(solution.state, params, observable.index).first;
        break;
      case ObservableKind::photon_fluct: {
        const PhotonFluctuations fluct = photon_number_fluctuations(
            solution, params, FluctuationMethod::lyapunov, options.divergence_cap);
        if (fluct.status == FluctuationStatus::diverged) {
          cell.status = CellStatus::diverged;
        } else {
          cell.value =
              fluct.occupations[static_cast<std::size_t>(observable.index)];
        }
        break;
      }
      case ObservableKind::phase_label:
        cell.value = solution.phase == Phase::superradiant ? 1.0 : 0.0;
        break;
      case ObservableKind::max_real_eig:
        cell.value = classify(solution, params).max_real_part;
        break;
    }
  } catch (const Error& err) {
    cell.status = CellStatus::error;
    cell.error_code = to_string(err.code());
    cell.value = std::numeric_limits<double>::quiet_NaN();
  }
  return cell;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

PhaseDiagram run_sweep(const SweepBase& base, const std::vector<AxisSpec>& axes,
                       const Observable& observable, const SweepOptions& options) {
  if (axes.empty() || axes.size() > 2)
    throw Error(ErrorCode::invalid_argument, "sweeps take one or two axes");
  if (observable_indexed(observable.kind) &&
      (observable.index < 0 || observable.index >= base.n_cavities))
    throw Error(ErrorCode::invalid_argument, "observable index out of range");

  std::vector<std::vector<double>> grids;
  grids.reserve(axes.size());
  for (const auto& axis : axes) grids.push_back(axis_values(axis));
  const std::size_t inner = axes.size() == 2 ? grids[1].size() : 1;
  const std::size_t cells = grids[0].size() * inner;

  PhaseDiagram diagram;
  diagram.axes = axes;
  diagram.observable = observable;
  diagram.base = base;
  diagram.values.assign(cells, std::numeric_limits<double>::quiet_NaN());
  diagram.status.assign(cells, CellStatus::ok);
  diagram.error_codes.assign(cells, {});
  diagram.metadata["created"] = utc_timestamp();
  diagram.metadata["library_version"] = version;

  const auto evaluate_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      SweepBase point = base;
      apply_parameter(point, axes[0].parameter, grids[0][idx / inner]);
      if (axes.size() == 2)
        apply_parameter(point, axes[1].parameter, grids[1][idx % inner]);
      const CellResult cell = evaluate_cell(point, observable, options);
      diagram.values[idx] = cell.value;
      diagram.status[idx] = cell.status;
      diagram.error_codes[idx] = cell.error_code;
    }
  };

  std::size_t workers = options.workers > 0
                            ? static_cast<std::size_t>(options.workers)
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cells);
  if (workers <= 1) {
    evaluate_range(0, cells);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = cells * w / workers;
      const std::size_t end = cells * (w + 1) / workers;
      pool.emplace_back(evaluate_range, begin, end);
    }
    for (auto& thread : pool) thread.join();
  }
  return diagram;
}

void export_csv(const PhaseDiagram& diagram, std::ostream& out) {
  out << params_comment(base_to_params(diagram.base)) << '\n';
  out << to_string(diagram.axes[0].parameter);
  if (diagram.axes.size() == 2) out << ',' << to_string(diagram.axes[1].parameter);
  out << ',' << to_string(diagram.observable) << ",status\n";

  std::vector<std::vector<double>> grids;
  for (const auto& axis : diagram.axes) grids.push_back(axis_values(axis));
  const std::size_t inner = diagram.axes.size() == 2 ? grids[1].size() : 1;
  for (std::size_t idx = 0; idx < diagram.values.size(); ++idx) {
    out << format_double(grids[0][idx / inner]);
    if (diagram.axes.size() == 2) out << ',' << format_double(grids[1][idx % inner]);
    const CellStatus status = diagram.status[idx];
    out << ',';
    if (status == CellStatus::ok || status == CellStatus::normal_phase)
      out << format_double(diagram.values[idx]);
    out << ',' << to_string(status, diagram.error_codes[idx]) << '\n';
  }
}

void export_json(const PhaseDiagram& diagram, std::ostream& out) {
  nlohmann::json j;
  j["axes"] = nlohmann::json::array();
  for (const auto& axis : diagram.axes)
    j["axes"].push_back({{"parameter", to_string(axis.parameter)},
                         {"min", axis.min},
                         {"max", axis.max},
                         {"count", axis.count}});
  j["observable"] = to_string(diagram.observable);
  j["base"] = {{"omega_emitter", diagram.base.omega_emitter},
               {"base_freq", diagram.base.base_freq},
               {"detuning", diagram.base.detuning},
               {"hopping", diagram.base.hopping},
               {"coupling", diagram.base.coupling},
               {"loss", diagram.base.loss},
               {"n_cavities", diagram.base.n_cavities}};
  j["values"] = nlohmann::json::array();
  for (std::size_t idx = 0; idx < diagram.values.size(); ++idx) {
    if (std::isfinite(diagram.values[idx]))
      j["values"].push_back(diagram.values[idx]);
    else
      j["values"].push_back(nullptr);
  }
  j["status"] = nlohmann::json::array();
  for (std::size_t idx = 0; idx < diagram.status.size(); ++idx)
    j["status"].push_back(to_string(diagram.status[idx], diagram.error_codes[idx]));
  j["metadata"] = diagram.metadata;
  out << j.dump(2) << '\n';
}

PhaseDiagram import_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& err) {
    throw Error(ErrorCode::io_error, std::string("bad sweep document: ") + err.what());
  }
  try {
    PhaseDiagram diagram;
    for (const auto& axis : j.at("axes")) {
      AxisSpec spec;
      spec.parameter = parse_sweep_parameter(axis.at("parameter").get<std::string>());
      spec.min = axis.at("min").get<double>();
      spec.max = axis.at("max").get<double>();
      spec.count = axis.at("count").get<int>();
      diagram.axes.push_back(spec);
    }
    diagram.base.omega_emitter = j.at("base").at("omega_emitter").get<double>();
    diagram.base.base_freq = j.at("base").at("base_freq").get<double>();
    diagram.base.detuning = j.at("base").at("detuning").get<double>();
    diagram.base.hopping = j.at("base").at("hopping").get<double>();
    diagram.base.coupling = j.at("base").at("coupling").get<double>();
    diagram.base.loss = j.at("base").at("loss").get<double>();
    diagram.base.n_cavities = j.at("base").at("n_cavities").get<int>();
    diagram.observable =
        parse_observable(j.at("observable").get<std::string>(), diagram.base.n_cavities);
    for (const auto& value : j.at("values"))
      diagram.values.push_back(value.is_null()
                                   ? std::numeric_limits<double>::quiet_NaN()
                                   : value.get<double>());
    for (const auto& status : j.at("status")) {
      const std::string text = status.get<std::string>();
      if (text == "ok") {
        diagram.status.push_back(CellStatus::ok);
        diagram.error_codes.emplace_back();
      } else if (text == "normal_phase") {
        diagram.status.push_back(CellStatus::normal_phase);
        diagram.error_codes.emplace_back();
      } else if (text == "diverged") {
        diagram.status.push_back(CellStatus::diverged);
        diagram.error_codes.emplace_back();
      } else {
        diagram.status.push_back(CellStatus::error);
        diagram.error_codes.push_back(text);
      }
    }
    if (j.contains("metadata"))
      for (const auto& [key, value] : j.at("metadata").items())
        diagram.metadata[key] = value.get<std::string>();
    if (diagram.values.size() != diagram.cell_count() ||
        diagram.status.size() != diagram.cell_count())
      throw Error(ErrorCode::io_error, "sweep document grid sizes disagree");
    return diagram;
  } catch (const nlohmann::json::exception& err) {
    throw Error(ErrorCode::io_error, std::string("bad sweep document: ") + err.what());
  }
}

void export_file(const PhaseDiagram& diagram, const std::string& format,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  if (format == "csv")
    export_csv(diagram, out);
  else if (format == "json")
    export_json(diagram, out);
  else
    throw Error(ErrorCode::invalid_argument,
                "unknown export format '" + format + "'; expected csv or json");
  out.flush();
  if (!out)
    throw Error(ErrorCode::io_error, "short write to '" + path + "'");
}

}  // namespace spinring
