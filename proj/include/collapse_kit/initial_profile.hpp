#pragma once

// Collimated boundary intensity I(x, z = 0) = N(x), even in x.

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "collapse_kit/nonlinearity.hpp"

namespace collapse_kit {

enum class ProfileKind { Gaussian, SaturatedBoundary, PhiLowerFamily, Custom };

std::string to_string(ProfileKind kind);

class InitialProfile {
 public:
  /// N = exp(-x^2).
  static InitialProfile gaussian();
  /// N = (1 - ln((x^2 + 1) / 2)) / b on |x| <= sqrt(2e - 1), zero outside.
  static InitialProfile saturated_boundary(double b);
  /// Profile with phi_lower(N(x)) = -x^2 for the given model (peak N(0) = 1).
  /// For Kerr this is the Gaussian.
  static InitialProfile phi_lower_family(const NonlinearityModel& model);
  /// User supplied even profile; `support` bounds |x| where N > 0.
  static InitialProfile custom(std::string name, std::function<double(double)> intensity,
                               double support = std::numeric_limits<double>::infinity());

  ProfileKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  /// N(|x|); zero outside the support.
  double operator()(double x) const;
  double peak() const { return (*this)(0.0); }
  /// Half-width of the support (infinity for unbounded profiles).
  double support_edge() const { return support_; }
  /// Constant of the first-order generator used by the generic 1-D solver;
  /// 2be for the saturated boundary profile, 1 otherwise.
  double generator_constant() const { return generator_constant_; }
  /// b of the saturated boundary profile.
  std::optional<double> saturation_b() const { return b_; }

 private:
  InitialProfile() = default;

  ProfileKind kind_ = ProfileKind::Gaussian;
  std::string name_;
  std::function<double(double)> intensity_;
  double support_ = std::numeric_limits<double>::infinity();
  double generator_constant_ = 1.0;
  std::optional<double> b_;
};

}  // namespace collapse_kit
