#pragma once

#include <iosfwd>
#include <string>

#include "spinring/meanfield.hpp"
#include "spinring/model.hpp"

namespace spinring {

// Shortest decimal form that parses back to the same double ("0.35", not
// "0.34999999999999998"); used by every text artifact so that written files
// round-trip exactly.
std::string format_double(double value);

// "key=value ..." line with the full resolved parameter set, embedded as a
// comment in CSV artifacts.
std::string params_comment(const SystemParams& params);

// columns t, re_alpha_1..N, im_alpha_1..N, spin_x, spin_y, spin_z
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

}  // namespace spinring
