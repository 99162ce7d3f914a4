#pragma once

// Approximate (1+2) radial solution driven by the potential S(eta):
//   x = chi (1 + 2 z^2 S_eta(chi^2)),  S(mu^2) = S(chi^2) + 2 z^2 chi^2 S_eta(chi^2)^2,
//   v = (x - chi) / z,  I = N(mu) (chi / x) S_eta(chi^2) / S_eta(mu^2).
// Folds of the ray map Y(chi) = chi (1 + 2 z^2 S_eta) mark the singularities.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collapse_kit/beam_profile.hpp"
#include "collapse_kit/initial_profile.hpp"
#include "collapse_kit/s_function.hpp"

namespace collapse_kit {

struct ChiRoot {
  double chi = 0.0;
  /// dY/dchi at the root.
  double slope = 1.0;
  bool near_fold = false;
};

/// Ray origin chi >= 0 for the radius x (sign restored for x < 0), continued
/// from chi = x at z = 0. Throws FoldError once the branch folds over.
ChiRoot chi_root(const SFunction& S, double x, double z);

/// mu >= 0 on the branch continued from mu = chi. Throws UnreachableError
/// when S stops being monotone before the target value is met.
double mu_root(const SFunction& S, double chi, double z);

struct Field2D {
  double I = 0.0;
  double v = 0.0;
  double chi = 0.0;
  double mu = 0.0;
  bool near_fold = false;
};

/// Field at (x, z). The axis uses the limit I = N(0) / (1 + 2 z^2 S_eta(0)).
Field2D field_at(const SFunction& S, const InitialProfile& profile, double x, double z);

/// 1 / sqrt(-2 S_eta(0)) when S_eta(0) < 0.
std::optional<double> on_axis_zsf(const SFunction& S);

/// Roots of 3 S_eta_eta + 2 eta S_eta_eta_eta on (0, eta_max].
std::vector<double> ring_candidates(const SFunction& S);

struct SingularityPoint {
  double x = 0.0;
  double z = 0.0;
};

/// z^2 = -1 / (2 (S_eta + 2 eta S_eta_eta)), x = chi (1 + 2 z^2 S_eta) at eta_cr;
/// empty when the radicand is negative.
std::optional<SingularityPoint> singularity_position(const SFunction& S, double eta_cr);

/// The same coordinates with the eta factors dropped,
/// z^2 = -1 / (2 (S_eta + 2 S_eta_eta)), x = 2 sqrt(eta) S_eta_eta / (S_eta + 2 S_eta_eta).
/// Kept only for comparison; it does not locate the fold.
std::optional<SingularityPoint> singularity_position_printed(const SFunction& S, double eta_cr);

enum class CollapseRegime { NoCollapse, OnAxis, RingFirst };

std::string to_string(CollapseRegime regime);

struct RingCandidate {
  double eta_cr = 0.0;
  /// S_eta + 2 eta S_eta_eta at eta_cr; negative values fold the ray map.
  double fold_coefficient = 0.0;
  /// True when eta_cr is a local minimum of the fold coefficient.
  bool local_minimum = false;
  /// |3 S_eta_eta + 2 eta S_eta_eta_eta| at the polished root.
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::optional<SingularityPoint> corrected;
  std::optional<SingularityPoint> printed;
};

struct RingEvent {
  double eta_cr = 0.0;
  double x_ring = 0.0;
  double z_ring = 0.0;
};

struct CollapseDiagnostics {
  double s_eta_at_axis = 0.0;
  double eta_max = 0.0;
  int scan_nodes = 0;
  std::string provenance;
};

struct CollapseReport {
  CollapseRegime regime = CollapseRegime::NoCollapse;
  std::optional<double> z_axis;
  std::vector<RingCandidate> candidates;
  std::vector<RingEvent> ring_events;
  std::optional<SingularityPoint> first_singularity;
  CollapseDiagnostics diagnostics;
};

CollapseReport classify_collapse(const SFunction& S);

BeamProfile profile_at_2d(const SFunction& S, const InitialProfile& profile, double z,
                          std::span<const double> x_grid);

}  // namespace collapse_kit
