#include <doctest.h>

#include <cmath>

#include "collapse_kit/s_function.hpp"

using namespace collapse_kit;

namespace {

// S for a Gaussian with the Kerr + ionization response, written out directly.
double s_direct(double eta, double alpha, double beta, double gamma, int K) {
  const double n = std::exp(-eta);
  return alpha * (n - gamma * std::pow(n, K) / K) + beta * (eta - 2.0);
}

// S from its defining chi-space expression, with chi derivatives by central differences.
double s_from_chi(const NonlinearityModel& m, const InitialProfile& p, double eta) {
  const double chi = std::sqrt(eta);
  const double h = 1e-3;
  auto u = [&](double c) { return std::sqrt(p(c)); };
  auto flux = [&](double c) { return c * (u(c + h / 2) - u(c - h / 2)) / h; };
  const double lap = (flux(chi + h / 2) - flux(chi - h / 2)) / h;
  return m.alpha() * big_phi(m, p(chi)) + m.beta() * lap / (chi * u(chi));
}

}  // namespace

TEST_CASE("closed-form S matches the direct expression and its derivatives") {
  const auto m = NonlinearityModel::kerr_mpi(0.01, 0.001, 0.6, 8);
  const auto S = build_s_function(m, InitialProfile::gaussian());
  CHECK(S.provenance() == SProvenance::ClosedFormGaussianKerrMPI);
  const double h = 1e-4;
  for (double eta : {0.1, 0.5, 1.5, 4.0}) {
    auto f = [&](double e) { return s_direct(e, 0.01, 0.001, 0.6, 8); };
    CHECK(S.value(eta) == doctest::Approx(f(eta)).epsilon(1e-14));
    CHECK(S.d1(eta) == doctest::Approx((f(eta + h) - f(eta - h)) / (2 * h)).epsilon(1e-7));
    CHECK(S.d2(eta) == doctest::Approx((f(eta + h) - 2 * f(eta) + f(eta - h)) / (h * h)).epsilon(1e-5));
  }
}

TEST_CASE("numeric S agrees with the closed form for the worked cases") {
  for (const auto& m : {NonlinearityModel::kerr_mpi(0.01, 0.001, 0.1, 6), NonlinearityModel::kerr_mpi(0.01, 0.001, 0.6, 8)}) {
    const auto closed = build_s_function(m, InitialProfile::gaussian());
    const auto numeric = build_s_function(m, InitialProfile::gaussian(), true);
    CHECK(numeric.provenance() == SProvenance::Numeric);
    for (double eta : {0.0, 0.05, 0.7, 2.0, 6.0, 12.0}) {
      const auto a = closed.jet(eta);
      const auto b = numeric.jet(eta);
      for (int k = 0; k < 4; ++k) {
        INFO("eta = " << eta << ", order " << k);
        // Near eta = 0 the stencil is one-sided and the high orders lose accuracy.
        CHECK(std::abs(a[k] - b[k]) <= (eta >= 0.5 || k < 2 ? 1e-7 : 1e-5));
      }
    }
  }
}

TEST_CASE("S_eta at eta = 1 for case 1 parameters agrees to 1e-6") {
  const auto m = NonlinearityModel::kerr_mpi(0.01, 0.001, 0.1, 6);
  const auto closed = build_s_function(m, InitialProfile::gaussian());
  const auto numeric = build_s_function(m, InitialProfile::gaussian(), true);
  CHECK(std::abs(closed.d1(1.0) - numeric.d1(1.0)) <= 1e-6);
}

TEST_CASE("Kerr limit without diffraction is alpha e^{-eta}") {
  const auto S = build_s_function(NonlinearityModel::kerr_mpi(0.3, 0.0, 0.0, 6), InitialProfile::gaussian());
  for (double eta : {0.0, 0.4, 3.0}) CHECK(S.value(eta) == doctest::Approx(0.3 * std::exp(-eta)).epsilon(1e-15));
}

TEST_CASE("numeric S error scales with the coupling") {
  // The one-sided stencil at eta = 0 limits the third derivative to about 2e-5 relative.
  const auto m = NonlinearityModel::kerr(0.5, 0.01);
  const auto closed = build_s_function(m, InitialProfile::gaussian());
  const auto numeric = build_s_function(m, InitialProfile::gaussian(), true);
  for (double eta : {0.0, 0.7, 6.0}) {
    const auto a = closed.jet(eta);
    const auto b = numeric.jet(eta);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-4 * std::max(std::abs(a[k]), 1e-3));
  }
}

TEST_CASE("numeric S for a saturated response matches the chi-space definition") {
  const auto m = NonlinearityModel::saturated_exp(0.2, 0.5, 0.01);
  const auto p = InitialProfile::phi_lower_family(NonlinearityModel::kerr(1.0));
  const auto S = build_s_function(m, p);
  CHECK(S.provenance() == SProvenance::Numeric);
  for (double eta : {0.3, 1.0, 3.0}) CHECK(S.value(eta) == doctest::Approx(s_from_chi(m, p, eta)).epsilon(1e-6));
}

TEST_CASE("difference equals value subtraction and resolves tiny steps") {
  for (bool numeric : {false, true}) {
    const auto S = build_s_function(NonlinearityModel::kerr_mpi(0.01, 0.001, 0.6, 8), InitialProfile::gaussian(), numeric);
    CHECK(S.difference(0.4, 1.9) == doctest::Approx(S.value(1.9) - S.value(0.4)).epsilon(1e-12));
    const double d = 1e-9;
    CHECK(S.difference(0.8, 0.8 + d) == doctest::Approx(d * S.d1(0.8)).epsilon(1e-6));
  }
}

TEST_CASE("S builder rejects unusable profiles") {
  const auto m = NonlinearityModel::kerr(0.01, 0.001);
  CHECK_THROWS_AS(build_s_function(m, InitialProfile::saturated_boundary(1.0)), ProfileError);
  const auto S = build_s_function(m, InitialProfile::gaussian());
  CHECK_THROWS_AS(S.d1(-1.0), DomainError);
  CHECK_THROWS_AS(S.derivative(1.0, 4), DomainError);
}
