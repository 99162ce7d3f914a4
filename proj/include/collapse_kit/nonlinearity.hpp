#pragma once

// Refractive-index models in dimensionless form. With alpha = n2 I0 the
// eikonal equations only see the derivative function varphi = dn/dI; the
// other antiderivatives below appear in the exact and approximate solutions.
//
// Three different "phi" functions are in play and are kept apart by name:
//   varphi(I)     = dn/dI
//   phi_lower(I)  with d(phi_lower)/dI = varphi(I) / I, phi_lower(1) = 0
//   big_phi(I)    with d(big_phi)/dI = varphi(I),      big_phi(0) = 0

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "collapse_kit/numerics.hpp"

namespace collapse_kit {

enum class ModelKind { SaturatedExp, Kerr, KerrMPI, Tabulated };

std::string to_string(ModelKind kind);

/// Not-a-knot cubic spline through (I, varphi) samples. C2 everywhere and
/// exact for cubic data, so up to three derivatives stay defined.
class TabulatedResponse {
 public:
  /// At least four strictly increasing abscissae.
  TabulatedResponse(std::vector<double> intensity, std::vector<double> values);

  /// Two-column text file (I, varphi); '#' starts a comment, columns may be
  /// separated by whitespace or commas.
  static TabulatedResponse load(const std::filesystem::path& path);

  double value(double I) const;
  double derivative(double I, int order) const;
  /// Integral of the spline from the first abscissa to I.
  double integral(double I) const;

  double first() const { return x_.front(); }
  double last() const { return x_.back(); }
  std::span<const double> abscissae() const { return x_; }

 private:
  std::size_t segment(double I) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
  std::vector<double> cumulative_;
};

class NonlinearityModel {
 public:
  /// n(I) = (1 - e^{-bI}(1 + bI)) / b^2, varphi = I e^{-bI}.
  static NonlinearityModel saturated_exp(double alpha, double b, double beta = 0.0);
  /// n(I) = I, varphi = 1.
  static NonlinearityModel kerr(double alpha, double beta = 0.0);
  /// n(I) = I - gamma I^K / K, varphi = 1 - gamma I^{K-1}.
  static NonlinearityModel kerr_mpi(double alpha, double beta, double gamma, int photon_order);
  static NonlinearityModel tabulated(double alpha, double beta, TabulatedResponse table);

  ModelKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double b() const { return b_; }
  double gamma() const { return gamma_; }
  int photon_order() const { return photon_order_; }
  const TabulatedResponse* table() const { return table_.get(); }

  /// Intensities accepted by every evaluation; outside it DomainError.
  numerics::Interval domain() const { return domain_; }
  /// Sub-interval on which varphi > 0 (self-focusing response).
  numerics::Interval focusing_domain() const;

  void require_in_domain(double I) const;

 private:
  NonlinearityModel() = default;

  ModelKind kind_ = ModelKind::Kerr;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double b_ = 0.0;
  double gamma_ = 0.0;
  int photon_order_ = 0;
  std::shared_ptr<const TabulatedResponse> table_;
  numerics::Interval domain_{0.0, std::numeric_limits<double>::infinity()};
};

double varphi(const NonlinearityModel& model, double I);
/// d varphi / dI.
double varphi_derivative(const NonlinearityModel& model, double I);
double refractive_index(const NonlinearityModel& model, double I);
/// I / (alpha varphi(I)); for SaturatedExp the regular form e^{bI} / alpha.
double psi(const NonlinearityModel& model, double I);
/// True iff sigma = psi / psi_I is affine in I on the model domain.
bool check_saturated_condition(const NonlinearityModel& model);
double phi_lower(const NonlinearityModel& model, double I);
/// phi_lower(to) - phi_lower(from) without cancellation for nearby arguments.
double phi_lower_difference(const NonlinearityModel& model, double from, double to);
/// phi_lower(from + delta) - phi_lower(from) with delta taken exactly.
double phi_lower_increment(const NonlinearityModel& model, double from, double delta);
double big_phi(const NonlinearityModel& model, double I);

}  // namespace collapse_kit
