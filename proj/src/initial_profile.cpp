#include "collapse_kit/initial_profile.hpp"

#include <cmath>
#include <numbers>

namespace collapse_kit {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Gaussian:
      return "gaussian";
    case ProfileKind::SaturatedBoundary:
      return "saturated-boundary";
    case ProfileKind::PhiLowerFamily:
      return "phi-lower-family";
    case ProfileKind::Custom:
      return "custom";
  }
  return "unknown";
}

InitialProfile InitialProfile::gaussian() {
  InitialProfile p;
  p.kind_ = ProfileKind::Gaussian;
  p.name_ = "gaussian";
  p.intensity_ = [](double x) { return std::exp(-x * x); };
  return p;
}

InitialProfile InitialProfile::saturated_boundary(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("saturated boundary profile: b must be positive");
  InitialProfile p;
  p.kind_ = ProfileKind::SaturatedBoundary;
  p.name_ = "saturated-boundary";
  p.b_ = b;
  p.generator_constant_ = 2.0 * b * std::numbers::e;
  p.support_ = std::sqrt(2.0 * std::numbers::e - 1.0);
  p.intensity_ = [b](double x) {
    // ln((x^2+1)/2) written with log1p keeps the edge zero clean.
    const double value = (1.0 - std::log1p(x * x) + std::numbers::ln2) / b;
    return value > 0.0 ? value : 0.0;
  };
  return p;
}

InitialProfile InitialProfile::phi_lower_family(const NonlinearityModel& model) {
  InitialProfile p;
  p.kind_ = ProfileKind::PhiLowerFamily;
  p.name_ = "phi-lower-family";
  switch (model.kind()) {
    case ModelKind::Kerr:
      p.intensity_ = [](double x) { return std::exp(-x * x); };
      return p;
    case ModelKind::SaturatedExp: {
      // (e^{-b} - e^{-bN}) / b = -x^2
      const double b = model.b();
      p.support_ = std::sqrt(-std::expm1(-b) / b);
      p.intensity_ = [b](double x) {
        const double arg = std::exp(-b) + b * x * x;
        return arg < 1.0 ? -std::log(arg) / b : 0.0;
      };
      return p;
    }
    default:
      break;
  }
  const numerics::Interval focus = model.focusing_domain();
  if (!(focus.contains(1.0))) throw ProfileError("phi-lower family: peak intensity 1 lies outside the focusing domain");
  const double floor = std::max(focus.lo, 1e-300);
  if (floor > 0.0 && model.kind() == ModelKind::Tabulated && model.domain().lo > 0.0) {
    p.support_ = std::sqrt(-phi_lower_difference(model, 1.0, model.domain().lo));
  }
  p.intensity_ = [model, floor, support = p.support_](double x) {
    if (std::abs(x) >= support) return 0.0;
    if (x == 0.0) return 1.0;
    const double target = -x * x;
    // phi_lower is increasing where varphi > 0; bracket in log I.
    auto f = [&](double log_i) { return phi_lower_difference(model, 1.0, std::exp(log_i)) - target; };
    double lo = -1.0;
    const double log_floor = std::log(floor);
    while (f(lo) > 0.0) {
      lo *= 2.0;
      if (lo < log_floor) return 0.0;
    }
    numerics::RootConfig cfg;
    cfg.abs_tol = 1e-14;
    cfg.rel_tol = 1e-14;
    return std::exp(numerics::polish_root(f, {lo, 0.0}, cfg));
  };
  return p;
}

InitialProfile InitialProfile::custom(std::string name, std::function<double(double)> intensity, double support) {
  if (!intensity) throw InputError("custom profile: empty intensity function");
  if (!(support > 0.0)) throw InputError("custom profile: support must be positive");
  InitialProfile p;
  p.kind_ = ProfileKind::Custom;
  p.name_ = std::move(name);
  p.intensity_ = std::move(intensity);
  p.support_ = support;
  return p;
}

double InitialProfile::operator()(double x) const {
  const double ax = std::abs(x);
  if (ax > support_) return 0.0;
  return intensity_(ax);
}

}  // namespace collapse_kit
