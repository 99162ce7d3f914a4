#pragma once

// Exact (1+1) solution for the saturated response psi = e^{bI} / alpha.
// In the hodograph plane (I, v) the solution is explicit; tau = z I and
// chi = x - v z map it back to the physical plane.

#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "collapse_kit/beam_profile.hpp"
#include "collapse_kit/errors.hpp"

namespace collapse_kit {

struct ExactSolutionParams {
  double alpha = 1.0;
  double b = 1.0;

  /// Throws DomainError unless alpha > 0 and b > 0.
  void validate() const;
};

struct HodographPoint {
  double I = 0.0;
  double v = 0.0;
  double tau = 0.0;
  double chi = 0.0;
  double x = 0.0;
  double z = 0.0;
};

struct BoundaryValue {
  double I = 0.0;
  bool in_support = true;
};

/// I0(chi) = (1 - ln((chi^2 + 1) / 2)) / b on |chi| <= sqrt(2e - 1).
BoundaryValue boundary_profile(const ExactSolutionParams& p, double chi);

/// sqrt(2e - 1), the z-independent half-width of the beam.
double beam_edge(const ExactSolutionParams& p = {});

/// b sqrt(e / (2 alpha)).
double z_self_focus(const ExactSolutionParams& p);

/// chi(I, v) >= 0. Templated so residual checks can run in long double.
template <class Real>
Real chi_of(const ExactSolutionParams& p, Real I, Real v) {
  const Real e = std::numbers::e_v<Real>;
  const Real alpha = p.alpha;
  const Real b = p.b;
  const Real k = b * b * e * v * v / alpha;
  const Real A = 2 * std::exp(1 - b * I) - 1 + k / 2;
  const Real B = 2 * k;
  const Real root = std::sqrt(A * A + B);
  // A + sqrt(A^2 + B) without cancellation when A < 0.
  const Real sum = A >= 0 ? A + root : (root - A > 0 ? B / (root - A) : Real(0));
  return std::sqrt(sum / 2);
}

/// tau(I, chi) >= 0 = sqrt(2e/alpha) acosh(e^{(bI-1)/2} sqrt((chi^2+1)/2)).
/// Throws UnreachableError when the acosh argument is below one.
template <class Real>
Real tau_of(const ExactSolutionParams& p, Real I, Real chi) {
  const Real e = std::numbers::e_v<Real>;
  const Real c = std::sqrt(2 * e / Real(p.alpha));
  const Real y = (Real(p.b) * I - 1 + std::log1p(chi * chi) - std::numbers::ln2_v<Real>) / 2;
  if (y < 0) {
    if (y > -64 * std::numeric_limits<Real>::epsilon() * (1 + std::abs(Real(p.b) * I))) return Real(0);
    throw UnreachableError("tau_of: (I, chi) lies below the boundary surface");
  }
  const Real m = std::expm1(y);
  return c * std::log1p(m + std::sqrt(m * (m + 2)));
}

struct InversionResult {
  double I = 0.0;
  double v = 0.0;
  double tau = 0.0;
  double chi = 0.0;
  /// Max residual of tau(I, chi(I, v)) = z I and chi(I, v) = |x| - |v| z.
  double residual = 0.0;
  bool in_support = true;
};

/// (I, v) at (x, z) by continuation in z from the boundary. Throws
/// CollapseReachedError for z >= z_sf and FoldError if Newton breaks down.
InversionResult invert_to_physical(const ExactSolutionParams& p, double x, double z);

HodographPoint hodograph_point(const ExactSolutionParams& p, double x, double z);

/// On-axis intensity; throws CollapseReachedError for z >= z_sf.
double on_axis_intensity(const ExactSolutionParams& p, double z);

/// invert_to_physical over the grid; failures are flagged per point.
BeamProfile profile_at(const ExactSolutionParams& p, double z, std::span<const double> x_grid);

}  // namespace collapse_kit
