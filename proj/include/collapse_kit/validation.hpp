#pragma once

// Independent checks of the analytic solutions: finite-difference residuals
// of the governing equations, conserved integrals and profile comparison.

#include <span>
#include <string>
#include <vector>

#include "collapse_kit/beam_profile.hpp"
#include "collapse_kit/hodograph_exact.hpp"
#include "collapse_kit/nonlinearity.hpp"

namespace collapse_kit {

enum class EquationId { BVP, SecOrEq, Eikonal1D, Eikonal2D };

std::string to_string(EquationId id);

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

struct ResidualReport {
  EquationId equation = EquationId::BVP;
  /// First and second grid axes: (I, v) for the hodograph checks, (x, z) otherwise.
  Axis first;
  Axis second;
  double step = 0.0;
  double max_abs_residual = 0.0;
  double argmax_first = 0.0;
  double argmax_second = 0.0;
  int points_checked = 0;
  int points_trimmed = 0;
};

struct HodographGrid {
  Axis intensity{0.01, 4.0, 200};
  Axis phase_gradient{-2.0, -0.01, 200};
  double step = 1e-5;
  /// Multiplies psi in the substituted equations; 1 for the real check,
  /// anything else is a sensitivity control.
  double psi_scale = 1.0;
};

struct HodographResiduals {
  ResidualReport bvp;
  ResidualReport second_order;
};

/// Substitutes chi(I, v), tau(I, chi(I, v)) into
///   tau_v - psi chi_I = 0,  chi_v + tau_I = 0,  alpha chi_vv + (e^{bI} chi_I)_I = 0
/// with central differences evaluated in long double.
HodographResiduals residual_hodograph(const ExactSolutionParams& p, const HodographGrid& grid = {});

/// Residual of the eikonal system
///   v_z + v v_x - alpha varphi(I) I_x = 0,
///   I_z + v I_x + I v_x + (nu - 1) I v / x = 0
/// on every interior node of the inner slices. Slices must share one x grid
/// and be equispaced in z. Nodes whose stencil touches an invalid or
/// out-of-support point are skipped.
ResidualReport residual_eikonal(std::span<const BeamProfile> slices, const NonlinearityModel& model, int nu);

/// Beam half-width of the exact solution at z, measured by linear
/// extrapolation of I(x, z) to zero from two nodes just inside the edge.
double measure_beam_edge(const ExactSolutionParams& p, double z);

/// Trapezoid integral of I x^{nu-1} over x >= 0, doubled for nu = 1.
double energy_integral(const BeamProfile& profile);

struct ProfileErrors {
  double linf_I = 0.0;
  double l2_I = 0.0;
  double linf_v = 0.0;
  double l2_v = 0.0;
  int points = 0;
};

/// Relative L-infinity and L2 errors of b against a on |x| <= window; b is
/// linearly interpolated onto a's nodes.
ProfileErrors compare_profiles(const BeamProfile& a, const BeamProfile& b, double window = 2.0);

}  // namespace collapse_kit
