#include "collapse_kit/nlse_approx_2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "collapse_kit/numerics.hpp"

namespace collapse_kit {

namespace {

constexpr int kContinuationSteps = 400;
constexpr int kRingScanNodes = 10000;

// Newton on Y(chi) = x at fixed z, staying on the increasing branch.
std::optional<double> newton_chi(const SFunction& S, double x, double z, double chi) {
  const double zz = 2.0 * z * z;
  for (int it = 0; it < 60; ++it) {
    const double eta = chi * chi;
    const auto s = S.jet(eta);
    const double slope = 1.0 + zz * s[1] + 2.0 * zz * eta * s[2];
    if (!(slope > 0.0)) return std::nullopt;
    const double f = chi * (1.0 + zz * s[1]) - x;
    double next = chi - f / slope;
    if (next < 0.0) next = 0.5 * chi;
    const double step = std::abs(next - chi);
    chi = next;
    if (step <= 1e-15 * std::max(1.0, chi)) {
      const auto t = S.jet(chi * chi);
      if (!(1.0 + zz * t[1] + 2.0 * zz * chi * chi * t[2] > 0.0)) return std::nullopt;
      return chi;
    }
  }
  return std::nullopt;
}

double fold_coefficient(const SFunction& S, double eta) {
  const auto s = S.jet(eta);
  return s[1] + 2.0 * eta * s[2];
}

}  // namespace

std::string to_string(CollapseRegime regime) {
  switch (regime) {
    case CollapseRegime::NoCollapse:
      return "NoCollapse";
    case CollapseRegime::OnAxis:
      return "OnAxis";
    case CollapseRegime::RingFirst:
      return "RingFirst";
  }
  return "unknown";
}

ChiRoot chi_root(const SFunction& S, double x, double z) {
  if (!(z >= 0.0)) throw DomainError("chi_root: z must be nonnegative");
  const double ax = std::abs(x);
  ChiRoot out;
  if (z == 0.0 || ax == 0.0) {
    out.chi = x;
    out.slope = 1.0 + 2.0 * z * z * S.d1(0.0);
    if (ax == 0.0 && !(out.slope > 0.0)) throw FoldError("chi_root: axis has collapsed", 0.0);
    return out;
  }
  double chi = ax;
  double z_done = 0.0;
  const double dz = z / kContinuationSteps;
  double h = dz;
  while (z_done < z) {
    double z_next = z_done + h;
    if (z_next > z || z - z_next < 1e-9 * dz) z_next = z;
    if (const auto r = newton_chi(S, ax, z_next, chi)) {
      chi = *r;
      z_done = z_next;
      h = std::min(dz, 2.0 * h);
    } else {
      h *= 0.5;
      if (h < 1e-12 * dz) throw FoldError("chi_root: ray map folds", z_done);
    }
  }
  const auto s = S.jet(chi * chi);
  out.chi = x < 0.0 ? -chi : chi;
  out.slope = 1.0 + 2.0 * z * z * (s[1] + 2.0 * chi * chi * s[2]);
  out.near_fold = out.slope < 1e-6;
  return out;
}

double mu_root(const SFunction& S, double chi, double z) {
  const double eta0 = chi * chi;
  const auto s0 = S.jet(eta0);
  const double target = 2.0 * z * z * eta0 * s0[1] * s0[1];
  if (target == 0.0) return std::abs(chi);
  // S must climb by `target` from eta0; move toward increasing S and stop if
  // S_eta changes sign first.
  const double dir = s0[1] > 0.0 ? 1.0 : -1.0;
  const double upper = 4.0 * S.eta_max();
  auto F = [&](double delta) { return (S.difference(eta0, eta0 + delta) - target) / target; };
  double prev = 0.0;
  double step = target / std::abs(s0[1]);
  for (int k = 0; k < 4000; ++k) {
    double delta = prev + dir * step;
    bool last = false;
    if (eta0 + delta <= 0.0) {
      delta = -eta0;
      last = true;
    } else if (eta0 + delta >= upper) {
      delta = upper - eta0;
      last = true;
    }
    if (F(delta) >= 0.0) {
      numerics::RootConfig rc;
      rc.abs_tol = 1e-14;
      rc.rel_tol = 1e-15;
      const double d = numerics::polish_root(F, {std::min(prev, delta), std::max(prev, delta)}, rc);
      return std::sqrt(std::max(0.0, eta0 + d));
    }
    if (dir * S.d1(eta0 + delta) <= 0.0 || last) break;
    prev = delta;
    step = std::min(2.0 * step, 0.05);
  }
  throw UnreachableError("mu_root: S cannot reach the required value on this branch");
}

Field2D field_at(const SFunction& S, const InitialProfile& profile, double x, double z) {
  if (!(z >= 0.0)) throw DomainError("field_at: z must be nonnegative");
  Field2D out;
  if (z == 0.0) {
    out.I = profile(x);
    out.chi = out.mu = x;
    return out;
  }
  if (x == 0.0) {
    const double d = 1.0 + 2.0 * z * z * S.d1(0.0);
    if (!(d > 0.0)) throw CollapseReachedError("field_at: axis singularity reached");
    out.I = profile(0.0) / d;
    return out;
  }
  const ChiRoot cr = chi_root(S, x, z);
  const double chi = std::abs(cr.chi);
  const double mu = mu_root(S, chi, z);
  const double s_chi = S.d1(chi * chi);
  const double denom = 1.0 + 2.0 * z * z * s_chi;
  double ratio = 1.0;
  if (mu != chi) {
    const double s_mu = S.d1(mu * mu);
    ratio = s_mu == 0.0 ? std::numeric_limits<double>::infinity() : s_chi / s_mu;
    if (s_mu == 0.0) out.near_fold = true;
  }
  out.I = profile(mu) * ratio / denom;
  out.v = (std::abs(x) - chi) / z;
  if (x < 0.0) out.v = -out.v;
  out.chi = cr.chi;
  out.mu = mu;
  out.near_fold = out.near_fold || cr.near_fold;
  return out;
}

std::optional<double> on_axis_zsf(const SFunction& S) {
  const double s1 = S.d1(0.0);
  if (!(s1 < 0.0)) return std::nullopt;
  return 1.0 / std::sqrt(-2.0 * s1);
}

namespace {

struct RawCandidate {
  double eta;
  double lo;
  double hi;
  bool local_minimum;
  double residual;
};

std::vector<RawCandidate> scan_candidates(const SFunction& S) {
  auto g = [&S](double eta) {
    const auto s = S.jet(eta);
    return 3.0 * s[2] + 2.0 * eta * s[3];
  };
  const double hi = S.eta_max();
  std::vector<RawCandidate> out;
  const auto brackets = numerics::sign_changes(g, 0.0, hi, kRingScanNodes);
  double scale = 0.0;
  if (S.provenance() == SProvenance::Numeric) {
    for (int i = 0; i <= 200; ++i) scale = std::max(scale, std::abs(g(hi * i / 200.0)));
  }
  for (const auto& br : brackets) {
    if (br.hi <= 0.0) continue;
    const double glo = g(br.lo);
    const double ghi = g(br.hi);
    // Stencil noise produces spurious sign flips where S is flat.
    if (S.provenance() == SProvenance::Numeric && std::max(std::abs(glo), std::abs(ghi)) < 1e-6 * scale) continue;
    numerics::RootConfig rc;
    rc.abs_tol = 1e-18;
    rc.rel_tol = 1e-13;
    const double eta = numerics::polish_root(g, br, rc);
    out.push_back({eta, br.lo, br.hi, glo < 0.0 && ghi > 0.0, std::abs(g(eta))});
  }
  return out;
}

}  // namespace

std::vector<double> ring_candidates(const SFunction& S) {
  std::vector<double> out;
  for (const auto& c : scan_candidates(S)) out.push_back(c.eta);
  return out;
}

std::optional<SingularityPoint> singularity_position(const SFunction& S, double eta_cr) {
  const auto s = S.jet(eta_cr);
  const double g = s[1] + 2.0 * eta_cr * s[2];
  if (!(g < 0.0)) return std::nullopt;
  const double z = std::sqrt(-1.0 / (2.0 * g));
  const double x = std::sqrt(eta_cr) * (1.0 + 2.0 * z * z * s[1]);
  return SingularityPoint{x, z};
}

std::optional<SingularityPoint> singularity_position_printed(const SFunction& S, double eta_cr) {
  const auto s = S.jet(eta_cr);
  const double g = s[1] + 2.0 * s[2];
  if (!(g < 0.0)) return std::nullopt;
  return SingularityPoint{2.0 * std::sqrt(eta_cr) * s[2] / g, std::sqrt(-1.0 / (2.0 * g))};
}

CollapseReport classify_collapse(const SFunction& S) {
  CollapseReport rep;
  rep.z_axis = on_axis_zsf(S);
  rep.diagnostics.s_eta_at_axis = S.d1(0.0);
  rep.diagnostics.eta_max = S.eta_max();
  rep.diagnostics.scan_nodes = kRingScanNodes;
  rep.diagnostics.provenance = to_string(S.provenance());
  for (const auto& raw : scan_candidates(S)) {
    RingCandidate c;
    c.eta_cr = raw.eta;
    c.fold_coefficient = fold_coefficient(S, raw.eta);
    c.local_minimum = raw.local_minimum;
    c.residual = raw.residual;
    c.bracket_lo = raw.lo;
    c.bracket_hi = raw.hi;
    c.corrected = singularity_position(S, raw.eta);
    c.printed = singularity_position_printed(S, raw.eta);
    // A negative fold coefficient at a local maximum never produces the first fold.
    if (c.corrected && c.local_minimum) rep.ring_events.push_back({c.eta_cr, c.corrected->x, c.corrected->z});
    rep.candidates.push_back(c);
  }
  std::optional<SingularityPoint> first;
  if (rep.z_axis) first = SingularityPoint{0.0, *rep.z_axis};
  bool ring_first = false;
  for (const auto& e : rep.ring_events) {
    if (!first || e.z_ring < first->z) {
      first = SingularityPoint{e.x_ring, e.z_ring};
      ring_first = true;
    }
  }
  rep.first_singularity = first;
  if (!first) {
    rep.regime = CollapseRegime::NoCollapse;
  } else {
    rep.regime = ring_first ? CollapseRegime::RingFirst : CollapseRegime::OnAxis;
  }
  return rep;
}

BeamProfile profile_at_2d(const SFunction& S, const InitialProfile& profile, double z,
                          std::span<const double> x_grid) {
  BeamProfile prof;
  prof.z = z;
  prof.nu = 2;
  for (double x : x_grid) {
    try {
      const Field2D f = field_at(S, profile, x, z);
      prof.push(x, f.I, f.v, f.near_fold ? PointFlag::NearFold : PointFlag::Ok);
    } catch (const FoldError&) {
      prof.push(x, std::nan(""), std::nan(""), PointFlag::Multivalued);
    } catch (const Error&) {
      prof.push(x, std::nan(""), std::nan(""), PointFlag::Failed);
    }
  }
  return prof;
}

}  // namespace collapse_kit
