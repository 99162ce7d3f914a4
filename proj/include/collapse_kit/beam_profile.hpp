#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace collapse_kit {

enum class PointFlag : std::uint8_t {
  Ok,
  OutOfSupport,  // beyond the beam edge; I = v = 0 by definition
  NearFold,      // solved, but the ray map is close to degenerate
  Multivalued,   // past a fold; no single-valued solution
  Failed,        // any other numerical failure
};

std::string to_string(PointFlag flag);

/// Transverse slice at fixed z. nu = 1 for slab beams, 2 for radial beams
/// (x is then the radius).
struct BeamProfile {
  double z = 0.0;
  int nu = 1;
  std::vector<double> x;
  std::vector<double> I;
  std::vector<double> v;
  std::vector<PointFlag> flags;

  std::size_t size() const { return x.size(); }
  bool all_valid() const;
  void push(double xi, double Ii, double vi, PointFlag flag = PointFlag::Ok) {
    x.push_back(xi);
    I.push_back(Ii);
    v.push_back(vi);
    flags.push_back(flag);
  }
};

/// n equispaced nodes on [lo, hi] (n >= 1; n == 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace collapse_kit
