#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spinring/model.hpp"
#include "spinring/solution.hpp"

namespace spinring {

enum class SweepParameter { coupling, loss, detuning, hopping, base_freq };

const char* to_string(SweepParameter parameter);
SweepParameter parse_sweep_parameter(const std::string& name);

struct AxisSpec {
  SweepParameter parameter = SweepParameter::coupling;
  double min = 0.0;
  double max = 1.0;
  int count = 2;  // >= 2, linear spacing
};

std::vector<double> axis_values(const AxisSpec& axis);

enum class ObservableKind {
  alpha_re,
  alpha_im,
  alpha_abs,
  total_current,
  bond_current,
  spin_current,
  photon_fluct,
  phase_label,
  max_real_eig,
};

struct Observable {
  ObservableKind kind = ObservableKind::alpha_abs;
  int index = 0;  // cavity/bond index, 0-based, where applicable
};

// Text forms use 1-based indices: "alpha_abs(2)", "total_current", ...
Observable parse_observable(const std::string& text, int n_cavities);
std::string to_string(const Observable& observable);

enum class CellStatus { ok, normal_phase, diverged, error };
std::string to_string(CellStatus status, const std::string& error_code);

// Ladder-form base point of a sweep; axes override individual fields.
struct SweepBase {
  double omega_emitter = 1.0;
  double base_freq = 0.5;  // lowest cavity frequency
  double detuning = 0.0;   // ladder step
  double hopping = 0.0;
  double coupling = 0.0;
  double loss = 0.0;
  int n_cavities = 3;
};

struct PhaseDiagram {
  std::vector<AxisSpec> axes;  // one or two; first axis is the outer index
  Observable observable;
  SweepBase base;
  std::vector<double> values;  // row-major over the axes, NaN when absent
  std::vector<CellStatus> status;
  std::vector<std::string> error_codes;  // per cell, empty unless error
  // carried verbatim through JSON round trips (version, timestamps, ...)
  std::map<std::string, std::string> metadata;

  std::size_t cell_count() const;
};

struct SweepOptions {
  int workers = 0;  // 0: hardware concurrency
  Branch branch = Branch::negative;
  double divergence_cap = 1e6;
  // force the evolution path even where the closed forms apply (cross-check)
  bool prefer_evolution = false;
};

// Evaluates the observable on the grid. Cells are independent; results are
// identical for any worker count. Per-cell failures land in status/error
// codes, never abort the sweep. Normal-phase cells are tagged but still
// carry their observable value (zero fields, finite fluctuations, ...).
PhaseDiagram run_sweep(const SweepBase& base, const std::vector<AxisSpec>& axes,
                       const Observable& observable, const SweepOptions& options = {});

// CSV: resolved-parameter comment, header naming axes and observable, one
// row per cell. JSON: self-describing document; export after import is
// byte-identical.
void export_csv(const PhaseDiagram& diagram, std::ostream& out);
void export_json(const PhaseDiagram& diagram, std::ostream& out);
PhaseDiagram import_json(std::istream& in);

void export_file(const PhaseDiagram& diagram, const std::string& format,
                 const std::string& path);

}  // namespace spinring
