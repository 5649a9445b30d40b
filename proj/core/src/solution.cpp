#include "spinring/solution.hpp"

namespace spinring {

const char* to_string(Phase phase) {
  return phase == Phase::superradiant ? "superradiant" : "normal";
}

const char* to_string(Branch branch) {
  switch (branch) {
    case Branch::positive:
      return "positive";
    case Branch::negative:
      return "negative";
    case Branch::none:
      break;
  }
  return "none";
}

const char* to_string(Provenance provenance) {
  return provenance == Provenance::analytic ? "analytic" : "evolved";
}

const char* to_string(StabilityTag tag) {
  switch (tag) {
    case StabilityTag::stable:
      return "stable";
    case StabilityTag::unstable:
      return "unstable";
    case StabilityTag::unknown:
      break;
  }
  return "unknown";
}

}  // namespace spinring
