#include "collapse_kit/beam_profile.hpp"

#include <algorithm>

#include "collapse_kit/errors.hpp"

namespace collapse_kit {

std::string to_string(PointFlag flag) {
  switch (flag) {
    case PointFlag::Ok:
      return "ok";
    case PointFlag::OutOfSupport:
      return "out-of-support";
    case PointFlag::NearFold:
      return "near-fold";
    case PointFlag::Multivalued:
      return "multivalued";
    case PointFlag::Failed:
      return "failed";
  }
  return "unknown";
}

bool BeamProfile::all_valid() const {
  return std::none_of(flags.begin(), flags.end(),
                      [](PointFlag f) { return f == PointFlag::Multivalued || f == PointFlag::Failed; });
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw InputError("linspace: at least one node is required");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

}  // namespace collapse_kit
