#pragma once

// The (1+2) potential S as a function of eta = chi^2:
//   S = alpha Phi(N) + beta (chi (sqrt N)_chi)_chi / (chi sqrt N).

#include <array>
#include <memory>
#include <string>

#include "collapse_kit/initial_profile.hpp"
#include "collapse_kit/nonlinearity.hpp"

namespace collapse_kit {

enum class SProvenance { ClosedFormGaussianKerrMPI, Numeric };

std::string to_string(SProvenance provenance);

class SFunction {
 public:
  static constexpr double kDefaultEtaMax = 25.0;

  double value(double eta) const { return derivative(eta, 0); }
  double d1(double eta) const { return derivative(eta, 1); }
  double d2(double eta) const { return derivative(eta, 2); }
  double d3(double eta) const { return derivative(eta, 3); }
  /// Derivative of order 0..3 with respect to eta (eta >= 0).
  double derivative(double eta, int order) const;
  /// S and its first three derivatives in one pass.
  std::array<double, 4> jet(double eta) const;
  /// S(to) - S(from), accurate when to and from nearly coincide.
  double difference(double from, double to) const;

  SProvenance provenance() const { return provenance_; }
  /// Stencil spacing of the numeric path (0 for the closed form).
  double fd_step() const { return fd_step_; }
  double eta_max() const { return eta_max_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  int photon_order() const { return photon_order_; }

  friend SFunction build_s_function(const NonlinearityModel& model, const InitialProfile& profile,
                                    bool force_numeric);

 private:
  SFunction() = default;
  std::array<double, 4> numeric_jet(double eta) const;

  SProvenance provenance_ = SProvenance::ClosedFormGaussianKerrMPI;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double gamma_ = 0.0;
  int photon_order_ = 1;
  double fd_step_ = 0.0;
  double eta_max_ = kDefaultEtaMax;
  std::shared_ptr<const NonlinearityModel> model_;
  std::shared_ptr<const InitialProfile> profile_;
};

/// Closed form for a Gaussian profile with a Kerr or Kerr-MPI model;
/// otherwise stencil derivatives of the assembled expression. Throws
/// ProfileError when N(0) != 1 or N is not positive on [0, eta_max].
SFunction build_s_function(const NonlinearityModel& model, const InitialProfile& profile,
                           bool force_numeric = false);

}  // namespace collapse_kit
