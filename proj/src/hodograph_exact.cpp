#include "collapse_kit/hodograph_exact.hpp"

#include <algorithm>

#include "collapse_kit/numerics.hpp"

namespace collapse_kit {

namespace {

constexpr double kE = std::numbers::e;

double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// Analytic continuation of I0 past the edge; only used inside Newton.
double boundary_formula(double b, double chi) { return (1.0 - std::log1p(chi * chi) + std::numbers::ln2) / b; }

}  // namespace

void ExactSolutionParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("exact solution: alpha must be positive");
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("exact solution: b must be positive");
}

BoundaryValue boundary_profile(const ExactSolutionParams& p, double chi) {
  p.validate();
  if (std::abs(chi) > beam_edge(p)) return {0.0, false};
  return {std::max(0.0, boundary_formula(p.b, chi)), true};
}

double beam_edge(const ExactSolutionParams&) { return std::sqrt(2.0 * kE - 1.0); }

double z_self_focus(const ExactSolutionParams& p) {
  p.validate();
  return p.b * std::sqrt(kE / (2.0 * p.alpha));
}

InversionResult invert_to_physical(const ExactSolutionParams& p, double x, double z) {
  p.validate();
  const double zsf = z_self_focus(p);
  if (!(z >= 0.0)) throw DomainError("invert_to_physical: z must be nonnegative");
  if (z >= zsf) throw CollapseReachedError("invert_to_physical: z is at or beyond the collapse distance");
  const double ax = std::abs(x);
  InversionResult out;
  if (ax >= beam_edge(p)) {
    out.in_support = false;
    out.chi = ax;
    return out;
  }
  const double c = std::sqrt(2.0 * kE / p.alpha);
  const double b = p.b;
  // Unknowns (tau, chi). Eliminating v between the two hodograph formulas
  // gives I = I0(chi) + (2/b) ln cosh(tau/c) and v = -chi tanh(tau/c) / z_sf.
  const numerics::System2 f = [=](double zz, const numerics::Vec2& u) -> numerics::Vec2 {
    const double t = u[0] / c;
    const double I = boundary_formula(b, u[1]) + 2.0 / b * log_cosh(t);
    return {u[0] - zz * I, u[1] * (1.0 - zz * std::tanh(t) / zsf) - ax};
  };
  numerics::ContinuationConfig ccfg;
  ccfg.initial_step = zsf / 200.0;
  ccfg.min_step = zsf * 1e-6;
  numerics::RootConfig rc;
  rc.abs_tol = 1e-13;
  const numerics::NewtonReport rep = numerics::continue2d(f, {0.0, ax}, 0.0, z, ccfg, rc);
  const double tau = rep.solution[0];
  const double chi = rep.solution[1];
  const double t = tau / c;
  out.tau = tau;
  out.chi = chi;
  out.I = boundary_formula(b, chi) + 2.0 / b * log_cosh(t);
  out.v = -chi * std::tanh(t) / zsf;

  const double r_tau = tau_of<double>(p, out.I, chi_of<double>(p, out.I, out.v)) - z * out.I;
  const double r_chi = chi_of<double>(p, out.I, out.v) - (ax - out.v * z);
  out.residual = std::max(std::abs(r_tau), std::abs(r_chi));
  if (x < 0.0) out.v = -out.v;
  return out;
}

HodographPoint hodograph_point(const ExactSolutionParams& p, double x, double z) {
  const InversionResult r = invert_to_physical(p, x, z);
  return {r.I, r.v, r.tau, x < 0.0 ? -r.chi : r.chi, x, z};
}

double on_axis_intensity(const ExactSolutionParams& p, double z) {
  p.validate();
  const double zsf = z_self_focus(p);
  if (!(z >= 0.0)) throw DomainError("on_axis_intensity: z must be nonnegative");
  if (z >= zsf) throw CollapseReachedError("on_axis_intensity: z is at or beyond the collapse distance");
  const double peak = boundary_formula(p.b, 0.0);
  if (z == 0.0) return peak;
  // z I = tau(I, 0); the root lies below peak / (1 - z/z_sf).
  auto f = [&](double I) { return z * I - tau_of<double>(p, I, 0.0); };
  const double hi = peak / (1.0 - z / zsf) * (1.0 + 1e-12);
  numerics::RootConfig rc;
  rc.abs_tol = 1e-13 * std::max(1.0, z * hi);
  rc.rel_tol = 1e-14;
  if (f(hi) > 0.0) return numerics::bracket_root(f, peak, 4.0 * hi, rc);
  return numerics::polish_root(f, {peak, hi}, rc);
}

BeamProfile profile_at(const ExactSolutionParams& p, double z, std::span<const double> x_grid) {
  BeamProfile prof;
  prof.z = z;
  prof.nu = 1;
  for (double x : x_grid) {
    try {
      const InversionResult r = invert_to_physical(p, x, z);
      prof.push(x, r.I, r.v, r.in_support ? PointFlag::Ok : PointFlag::OutOfSupport);
    } catch (const FoldError&) {
      prof.push(x, std::nan(""), std::nan(""), PointFlag::Multivalued);
    } catch (const CollapseReachedError&) {
      throw;
    } catch (const Error&) {
      prof.push(x, std::nan(""), std::nan(""), PointFlag::Failed);
    }
  }
  return prof;
}

}  // namespace collapse_kit
