#include "collapse_kit/eikonal_approx_1d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "collapse_kit/numerics.hpp"

namespace collapse_kit {

namespace {

constexpr double kE = std::numbers::e;

// phi_lower' = varphi / I, regular at I = 0 for the saturated model.
double rho(const NonlinearityModel& model, double I) {
  if (model.kind() == ModelKind::SaturatedExp) return std::exp(-model.b() * I);
  return varphi(model, I) / I;
}

numerics::RootConfig tight() {
  numerics::RootConfig rc;
  rc.abs_tol = 1e-14;
  rc.rel_tol = 1e-14;
  return rc;
}

// First root x' >= x of g(x') = x' + v(x') z - x on the ray family; g(x) <= 0.
double ray_origin(const std::function<double(double)>& g, double x, double edge) {
  const double gx = g(x);
  if (gx >= 0.0) return x;
  double hi = std::min(edge, x + 0.25 * (1.0 + x));
  double ghi = g(hi);
  while (ghi <= 0.0) {
    if (hi >= edge) throw FoldError("no ray reaches this point", 0.0);
    hi = std::min(edge, x + 2.0 * (hi - x));
    ghi = g(hi);
  }
  const auto brackets = numerics::sign_changes(g, x, hi, 32);
  if (brackets.empty()) throw FoldError("ray origin bracket lost", 0.0);
  numerics::RootConfig rc = tight();
  rc.abs_tol = 1e-13;
  return numerics::polish_root(g, brackets.front(), rc);
}

double first_root_above(const std::function<double(double)>& h, double lo, double hi) {
  const auto brackets = numerics::sign_changes(h, lo, hi, 512, true);
  if (brackets.empty()) throw FoldError("no single-valued intensity root", 0.0);
  return numerics::polish_root(h, brackets.front(), tight());
}

// Integral of sqrt(phi_I) / sqrt(C (phi(I') - phi(lo))) over [lo, hi] with
// I' = lo + s^2; the offset s^2 is passed exactly so the integrand stays
// accurate next to the square-root endpoint, where it tends to 2 / sqrt(C).
double sqrt_substituted_integral(const NonlinearityModel& model, double C, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  auto g = [&](double s) {
    const double d = s * s;
    if (d == 0.0) return 2.0 / std::sqrt(C);
    return 2.0 * s * std::sqrt(rho(model, lo + d) / (C * phi_lower_increment(model, lo, d)));
  };
  numerics::QuadConfig qc;
  qc.abs_tol = 1e-15;
  qc.rel_tol = 1e-13;
  return numerics::adaptive_quad(g, 0.0, std::sqrt(hi - lo), qc);
}

struct GenericRay {
  double I = 0.0;
  double v = 0.0;
  bool in_support = true;
};

// Field carried by the ray leaving the boundary at x' >= 0, at distance z.
GenericRay generic_ray(const NonlinearityModel& model, double C, double I0, double xp, double z) {
  if (!(I0 > 0.0)) return {0.0, 0.0, false};
  if (z == 0.0) return {I0, 0.0, true};
  const double a = model.alpha();
  auto h = [&](double I) { return a * z * z * I * I * rho(model, I) - C * phi_lower_difference(model, I0, I); };
  const numerics::Interval focus = model.focusing_domain();
  double cap = std::min(focus.hi, model.domain().hi);
  cap = std::min(cap, I0 + std::max(1e3, 1e3 * I0));
  const double I = first_root_above(h, I0, cap);
  const double K = sqrt_substituted_integral(model, C, I0, I);
  return {I, -xp * std::sqrt(a) * K, true};
}

struct SaturatedRay {
  double I = 0.0;
  double v = 0.0;
  bool in_support = true;
};

SaturatedRay saturated_ray(const ExactSolutionParams& p, double xp, double z) {
  const BoundaryValue bv = boundary_profile(p, xp);
  if (!bv.in_support || !(bv.I > 0.0)) return {0.0, 0.0, false};
  if (z == 0.0) return {bv.I, 0.0, true};
  const double b = p.b;
  const double a = p.alpha;
  const double lx = std::log1p(xp * xp);
  auto h = [&](double I) { return b * I + lx - std::log(a * I * I * z * z + 2.0 * kE); };
  double span = 4.0 / b;
  while (h(bv.I + span) <= 0.0) span *= 2.0;
  const double I = first_root_above(h, bv.I, bv.I + span);
  const double v = -std::sqrt(2.0 * a / kE) / b * xp * std::atan(I * z * std::sqrt(a / (2.0 * kE)));
  return {I, v, true};
}

}  // namespace

Invariants1D first_integrals(const NonlinearityModel& model, const InitialProfile& profile, double x, double z,
                             double I, double v) {
  const double C = profile.generator_constant();
  const double a = model.alpha();
  const double chi = x - v * z;
  const double tau = z * I;
  Invariants1D out;
  out.J1 = chi;
  out.J2 = a * tau * tau * rho(model, I) - C * phi_lower(model, I);
  // K runs from the intensity where C phi + J2 vanishes up to I.
  const double delta = a * tau * tau * rho(model, I) / C;
  double K = 0.0;
  if (delta > 0.0) {
    auto f = [&](double log_lo) { return phi_lower_difference(model, std::exp(log_lo), I) - delta; };
    double lo = std::log(I) - 1.0;
    while (f(lo) < 0.0) lo -= 2.0 * (std::log(I) - lo);
    const double I_low = std::exp(numerics::polish_root(f, {lo, std::log(I)}, tight()));
    K = sqrt_substituted_integral(model, C, I_low, I);
  }
  out.J3 = v / a + chi / std::sqrt(a) * K;
  return out;
}

FieldValue solve_generic(const NonlinearityModel& model, const InitialProfile& profile, double x, double z) {
  if (!(z >= 0.0)) throw DomainError("solve_generic: z must be nonnegative");
  const double ax = std::abs(x);
  const double C = profile.generator_constant();
  FieldValue out;
  if (z == 0.0) {
    out.I = profile(ax);
    out.chi = x;
    out.in_support = out.I > 0.0;
    return out;
  }
  auto g = [&](double xp) {
    const GenericRay r = generic_ray(model, C, profile(xp), xp, z);
    return xp + r.v * z - ax;
  };
  const double xp = ray_origin(g, ax, profile.support_edge());
  const GenericRay r = generic_ray(model, C, profile(xp), xp, z);
  out.I = r.I;
  out.v = x < 0.0 ? -r.v : r.v;
  out.chi = x < 0.0 ? -xp : xp;
  out.in_support = r.in_support;
  return out;
}

FieldValue solve_saturated_approx(const ExactSolutionParams& p, double x, double z) {
  p.validate();
  if (!(z >= 0.0)) throw DomainError("solve_saturated_approx: z must be nonnegative");
  const double ax = std::abs(x);
  auto g = [&](double xp) { return xp + saturated_ray(p, xp, z).v * z - ax; };
  const double xp = z == 0.0 ? ax : ray_origin(g, ax, beam_edge(p));
  const SaturatedRay r = saturated_ray(p, xp, z);
  FieldValue out;
  out.I = r.I;
  out.v = x < 0.0 ? -r.v : r.v;
  out.chi = x < 0.0 ? -xp : xp;
  out.in_support = r.in_support;
  return out;
}

double z_self_focus_approx(const ExactSolutionParams& p) {
  p.validate();
  // Scaled unknowns B = bI, zeta = z / z_sf; with u = B zeta / 2 the
  // conditions read zeta arctan(u) = 1 and u^2 = e^{B-1}/2 - 1.
  const numerics::System2 f = [](double, const numerics::Vec2& w) -> numerics::Vec2 {
    const double u = 0.5 * w[0] * w[1];
    return {1.0 - w[1] * std::atan(u), u * u - 0.5 * std::exp(w[0] - 1.0) + 1.0};
  };
  const numerics::NewtonReport rep = numerics::newton2d_solve(f, 0.0, {1.0 + std::numbers::ln2 + 2.0, 1.0});
  return rep.solution[1] * z_self_focus(p);
}

double on_axis_approx(const ExactSolutionParams& p, double z) {
  p.validate();
  if (!(z >= 0.0)) throw DomainError("on_axis_approx: z must be nonnegative");
  const double peak = (1.0 + std::numbers::ln2) / p.b;
  if (z == 0.0) return peak;
  // Log form keeps the sign test free of overflow.
  auto f = [&](double I) { return p.b * I - std::log(2.0 * kE + p.alpha * I * I * z * z); };
  double span = 4.0 / p.b;
  while (f(peak + span) <= 0.0) span *= 2.0;
  return first_root_above(f, peak, peak + span);
}

BeamProfile profile_at_approx(const ExactSolutionParams& p, double z, std::span<const double> x_grid) {
  BeamProfile prof;
  prof.z = z;
  for (double x : x_grid) {
    try {
      const FieldValue f = solve_saturated_approx(p, x, z);
      prof.push(x, f.I, f.v, f.in_support ? PointFlag::Ok : PointFlag::OutOfSupport);
    } catch (const FoldError&) {
      prof.push(x, std::nan(""), std::nan(""), PointFlag::Multivalued);
    } catch (const Error&) {
      prof.push(x, std::nan(""), std::nan(""), PointFlag::Failed);
    }
  }
  return prof;
}

BeamProfile profile_at_generic(const NonlinearityModel& model, const InitialProfile& profile, double z,
                               std::span<const double> x_grid) {
  BeamProfile prof;
  prof.z = z;
  for (double x : x_grid) {
    try {
      const FieldValue f = solve_generic(model, profile, x, z);
      prof.push(x, f.I, f.v, f.in_support ? PointFlag::Ok : PointFlag::OutOfSupport);
    } catch (const FoldError&) {
      prof.push(x, std::nan(""), std::nan(""), PointFlag::Multivalued);
    } catch (const Error&) {
      prof.push(x, std::nan(""), std::nan(""), PointFlag::Failed);
    }
  }
  return prof;
}

}  // namespace collapse_kit
