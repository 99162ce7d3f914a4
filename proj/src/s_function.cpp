#include "collapse_kit/s_function.hpp"

#include <cmath>
#include <vector>

namespace collapse_kit {

namespace {

constexpr int kStencilNodes = 13;
constexpr double kStencilStep = 0.05;

}  // namespace

std::string to_string(SProvenance provenance) {
  return provenance == SProvenance::ClosedFormGaussianKerrMPI ? "closed-form-gaussian-kerr-mpi" : "numeric";
}

double SFunction::derivative(double eta, int order) const {
  if (order < 0 || order > 3) throw DomainError("S-function: derivative order must be 0..3");
  return jet(eta)[static_cast<std::size_t>(order)];
}

std::array<double, 4> SFunction::jet(double eta) const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw DomainError("S-function: eta must be nonnegative");
  if (provenance_ == SProvenance::Numeric) return numeric_jet(eta);
  const double a = alpha_ * std::exp(-eta);
  const double k = photon_order_;
  const double g = alpha_ * gamma_ * std::exp(-k * eta);
  return {a - g / k + beta_ * (eta - 2.0), -a + g + beta_, a - g * k, -a + g * k * k};
}

std::array<double, 4> SFunction::numeric_jet(double eta) const {
  // u = sqrt(N) and g = alpha Phi(N) sampled in eta on a shifted stencil that
  // never crosses eta = 0.
  double first = eta - 0.5 * (kStencilNodes - 1) * kStencilStep;
  if (first < 0.0) first = 0.0;
  std::array<double, kStencilNodes> nodes{};
  std::array<double, kStencilNodes> u{};
  std::array<double, kStencilNodes> g{};
  for (int j = 0; j < kStencilNodes; ++j) {
    nodes[j] = first + j * kStencilStep;
    const double n = (*profile_)(std::sqrt(nodes[j]));
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw ProfileError("S-function: initial profile is not positive at chi = " + std::to_string(std::sqrt(nodes[j])));
    }
    u[j] = std::sqrt(n);
    g[j] = alpha_ * big_phi(*model_, n);
  }
  std::array<double, 6> du{};
  std::array<double, 4> dg{};
  for (int order = 0; order <= 5; ++order) {
    const std::vector<double> w = numerics::fd_weights(eta, nodes, order);
    double su = 0.0, sg = 0.0;
    for (int j = 0; j < kStencilNodes; ++j) {
      su += w[j] * u[j];
      sg += w[j] * g[j];
    }
    du[order] = su;
    if (order <= 3) dg[order] = sg;
  }
  // D = 4 w / u with w = eta u'' + u'.
  const double w0 = eta * du[2] + du[1];
  const double w1 = eta * du[3] + 2.0 * du[2];
  const double w2 = eta * du[4] + 3.0 * du[3];
  const double w3 = eta * du[5] + 4.0 * du[4];
  const double q0 = w0 / du[0];
  const double q1 = (w1 - q0 * du[1]) / du[0];
  const double q2 = (w2 - 2.0 * q1 * du[1] - q0 * du[2]) / du[0];
  const double q3 = (w3 - 3.0 * q2 * du[1] - 3.0 * q1 * du[2] - q0 * du[3]) / du[0];
  const double c = 4.0 * beta_;
  return {dg[0] + c * q0, dg[1] + c * q1, dg[2] + c * q2, dg[3] + c * q3};
}

double SFunction::difference(double from, double to) const {
  if (!(from >= 0.0) || !(to >= 0.0)) throw DomainError("S-function: eta must be nonnegative");
  const double d = to - from;
  if (provenance_ == SProvenance::ClosedFormGaussianKerrMPI) {
    const double k = photon_order_;
    return alpha_ * std::exp(-from) * std::expm1(-d) -
           alpha_ * gamma_ / k * std::exp(-k * from) * std::expm1(-k * d) + beta_ * d;
  }
  if (std::abs(d) < 1e-3) {
    const auto s = jet(from);
    return d * (s[1] + d * (s[2] / 2.0 + d * s[3] / 6.0));
  }
  return value(to) - value(from);
}

SFunction build_s_function(const NonlinearityModel& model, const InitialProfile& profile, bool force_numeric) {
  SFunction s;
  s.alpha_ = model.alpha();
  s.beta_ = model.beta();
  if (std::abs(profile(0.0) - 1.0) > 1e-12) throw ProfileError("S-function: profile must satisfy N(0) = 1");
  const bool kerr_like = model.kind() == ModelKind::Kerr || model.kind() == ModelKind::KerrMPI;
  if (kerr_like && profile.kind() == ProfileKind::Gaussian && !force_numeric) {
    s.provenance_ = SProvenance::ClosedFormGaussianKerrMPI;
    if (model.kind() == ModelKind::KerrMPI) {
      s.gamma_ = model.gamma();
      s.photon_order_ = model.photon_order();
    }
    return s;
  }
  const double chi_max = std::sqrt(s.eta_max_);
  for (int i = 0; i <= 256; ++i) {
    const double chi = chi_max * i / 256.0;
    const double n = profile(chi);
    if (!(n > 0.0)) throw ProfileError("S-function: initial profile is not positive at chi = " + std::to_string(chi));
    model.require_in_domain(n);
  }
  s.provenance_ = SProvenance::Numeric;
  s.fd_step_ = kStencilStep;
  if (model.kind() == ModelKind::KerrMPI) {
    s.gamma_ = model.gamma();
    s.photon_order_ = model.photon_order();
  }
  s.model_ = std::make_shared<const NonlinearityModel>(model);
  s.profile_ = std::make_shared<const InitialProfile>(profile);
  return s;
}

}  // namespace collapse_kit
