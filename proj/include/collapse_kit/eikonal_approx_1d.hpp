#pragma once

// Approximate (1+1) eikonal solutions built from the first integrals of a
// first-order-in-alpha symmetry.

#include <span>

#include "collapse_kit/beam_profile.hpp"
#include "collapse_kit/hodograph_exact.hpp"
#include "collapse_kit/initial_profile.hpp"
#include "collapse_kit/nonlinearity.hpp"

namespace collapse_kit {

/// J1 = chi, J2 = alpha tau^2 phi_I - C phi, J3 = w + (chi / sqrt(alpha)) K
/// with w = v / alpha and K the quadrature of dphi / (sqrt(phi_I) sqrt(C phi + J2))
/// taken from the boundary intensity. C is the profile's generator constant.
struct Invariants1D {
  double J1 = 0.0;
  double J2 = 0.0;
  double J3 = 0.0;
};

struct FieldValue {
  double I = 0.0;
  double v = 0.0;
  /// Ray origin x' = x - v z.
  double chi = 0.0;
  bool in_support = true;
};

/// First integrals at a point (x, z) carrying the field (I, v).
Invariants1D first_integrals(const NonlinearityModel& model, const InitialProfile& profile, double x, double z,
                             double I, double v);

/// Generic implicit solution for any model with varphi > 0.
FieldValue solve_generic(const NonlinearityModel& model, const InitialProfile& profile, double x, double z);

/// Closed-form saturated case:
///   ((x - v z)^2 + 1) e^{bI} = alpha I^2 z^2 + 2e,
///   v = -sqrt(2 alpha / e) (x - v z) arctan(I z sqrt(alpha / 2e)) / b.
FieldValue solve_saturated_approx(const ExactSolutionParams& p, double x, double z);

/// Axis singularity of the approximate saturated solution (about 1.03 z_sf).
double z_self_focus_approx(const ExactSolutionParams& p);

/// Root of e^{bI} - 2e = alpha I^2 z^2 above the peak (1 + ln 2) / b.
double on_axis_approx(const ExactSolutionParams& p, double z);

BeamProfile profile_at_approx(const ExactSolutionParams& p, double z, std::span<const double> x_grid);
BeamProfile profile_at_generic(const NonlinearityModel& model, const InitialProfile& profile, double z,
                               std::span<const double> x_grid);

}  // namespace collapse_kit
