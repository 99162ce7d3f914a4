#include <doctest.h>

#include <cmath>
#include <numbers>

#include "collapse_kit/initial_profile.hpp"

using namespace collapse_kit;

TEST_CASE("gaussian profile") {
  const auto g = InitialProfile::gaussian();
  CHECK(g.kind() == ProfileKind::Gaussian);
  CHECK(g(0.0) == 1.0);
  CHECK(g(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(g(-0.7) == g(0.7));
  CHECK(std::isinf(g.support_edge()));
  CHECK(g.generator_constant() == 1.0);
}

TEST_CASE("saturated boundary profile") {
  const double b = 0.8;
  const auto p = InitialProfile::saturated_boundary(b);
  const double e = std::numbers::e;
  CHECK(p.peak() == doctest::Approx((1.0 + std::log(2.0)) / b).epsilon(1e-14));
  CHECK(p.support_edge() == doctest::Approx(std::sqrt(2.0 * e - 1.0)).epsilon(1e-15));
  CHECK(p(p.support_edge() * (1.0 - 1e-9)) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(p(p.support_edge() + 0.1) == 0.0);
  CHECK(p(1.3) == doctest::Approx((1.0 - std::log((1.3 * 1.3 + 1.0) / 2.0)) / b).epsilon(1e-14));
  CHECK(p.generator_constant() == doctest::Approx(2.0 * b * e));
  REQUIRE(p.saturation_b());
  CHECK(*p.saturation_b() == b);
}

TEST_CASE("phi_lower family satisfies phi_lower(N(x)) = -x^2") {
  const std::vector<NonlinearityModel> models{NonlinearityModel::kerr(1.0), NonlinearityModel::saturated_exp(1.0, 0.6),
                                              NonlinearityModel::kerr_mpi(1.0, 0.0, 0.2, 6)};
  for (const auto& m : models) {
    const auto p = InitialProfile::phi_lower_family(m);
    CHECK(p.peak() == doctest::Approx(1.0).epsilon(1e-13));
    for (double x : {0.2, 0.6, 0.9}) {
      if (std::abs(x) >= p.support_edge()) continue;
      CHECK(phi_lower(m, p(x)) == doctest::Approx(-x * x).epsilon(1e-10));
    }
  }
  const auto kerr = InitialProfile::phi_lower_family(NonlinearityModel::kerr(2.0));
  CHECK(kerr(0.8) == doctest::Approx(std::exp(-0.64)).epsilon(1e-14));
  const double b = 0.6;
  const auto sat = InitialProfile::phi_lower_family(NonlinearityModel::saturated_exp(1.0, b));
  CHECK(sat.support_edge() == doctest::Approx(std::sqrt(-std::expm1(-b) / b)));
}

TEST_CASE("custom profile is even and vanishes outside its support") {
  const auto c = InitialProfile::custom("tent", [](double x) { return 1.0 - x; }, 1.0);
  CHECK(c.kind() == ProfileKind::Custom);
  CHECK(c.name() == "tent");
  CHECK(c(-0.25) == doctest::Approx(0.75));
  CHECK(c(1.5) == 0.0);
}
