#pragma once

// Radial beam-propagation reference for
//   i eps psi_z + (eps^2 / 2) laplacian psi + alpha n(|psi|^2) psi = 0,  eps = sqrt(2 beta),
// whose eikonal limit is the approximate (1+2) solution. Strang splitting:
// exact nonlinear phase, Crank-Nicolson on a finite-volume radial Laplacian.

#include <vector>

#include "collapse_kit/beam_profile.hpp"
#include "collapse_kit/initial_profile.hpp"
#include "collapse_kit/nonlinearity.hpp"

namespace collapse_kit {

struct ReferenceConfig {
  int nodes = 4000;
  double r_max = 8.0;
  /// Outer fraction of r_max covered by the quartic damping ramp.
  double absorb_fraction = 0.2;
  double absorb_strength = 20.0;
  double dz_initial = 1e-3;
  double dz_max = 2e-2;
  double dz_min = 1e-9;
  /// Local step-doubling error target, relative to max |psi|.
  double tolerance = 1e-8;
  /// Drop the nonlinear term (diffraction-only check).
  bool linear = false;
  /// z values at which snapshots are stored (sorted, z_end appended).
  std::vector<double> snapshots;
};

struct ReferenceRun {
  double r_max = 0.0;
  int nodes = 0;
  double absorb_width = 0.0;
  int steps_accepted = 0;
  int steps_rejected = 0;
  double dz_smallest = 0.0;
  double dz_largest = 0.0;
  std::vector<BeamProfile> snapshots;
  /// Power inside the damping-free region at each snapshot.
  std::vector<double> power;
  /// |P(z) - P(0)| / P(0) per unit z at each snapshot (0 at z = 0).
  std::vector<double> power_drift_rate;
};

ReferenceRun nlse_reference(const NonlinearityModel& model, const InitialProfile& profile, double z_end,
                            const ReferenceConfig& cfg = {});

}  // namespace collapse_kit
