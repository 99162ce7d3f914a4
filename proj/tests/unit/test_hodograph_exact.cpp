#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "collapse_kit/hodograph_exact.hpp"

using namespace collapse_kit;

namespace {
const double kE = std::numbers::e;
}

TEST_CASE("collapse distance and beam edge formulas") {
  for (const ExactSolutionParams p : {ExactSolutionParams{3.0, 1.0}, ExactSolutionParams{0.001, 0.2}}) {
    CHECK(z_self_focus(p) == doctest::Approx(p.b * std::sqrt(kE / (2.0 * p.alpha))).epsilon(1e-15));
  }
  CHECK(z_self_focus({3.0, 1.0}) == doctest::Approx(0.6730876402).epsilon(1e-9));
  CHECK(beam_edge() == doctest::Approx(std::sqrt(2.0 * kE - 1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(z_self_focus({-1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(z_self_focus({1.0, 0.0}), DomainError);
}

TEST_CASE("boundary profile") {
  const ExactSolutionParams p{3.0, 2.0};
  CHECK(boundary_profile(p, 0.0).I == doctest::Approx((1.0 + std::log(2.0)) / 2.0));
  CHECK(boundary_profile(p, 1.0).I == doctest::Approx(0.5));
  CHECK_FALSE(boundary_profile(p, 3.0).in_support);
}

TEST_CASE("inversion recovers points generated from the hodograph side") {
  const ExactSolutionParams p{3.0, 1.0};
  // Choose (I, v), evaluate chi and tau from the solution formulas, map to (x, z).
  for (double I : {0.5, 1.2, 2.5}) {
    for (double v : {-0.05, -0.3, -0.8}) {
      const double chi = chi_of(p, I, v);
      const double tau = tau_of(p, I, chi);
      const double z = tau / I;
      if (z <= 0.0 || z >= z_self_focus(p)) continue;
      const double x = chi + v * z;
      const InversionResult r = invert_to_physical(p, x, z);
      INFO("I = " << I << ", v = " << v << ", x = " << x);
      CHECK(r.I == doctest::Approx(I).epsilon(1e-9));
      CHECK(r.v == doctest::Approx(v).epsilon(1e-9));
      CHECK(r.residual <= 1e-10);
    }
  }
}

TEST_CASE("inversion symmetry and support") {
  const ExactSolutionParams p{3.0, 1.0};
  const double z = 0.4;
  const auto a = invert_to_physical(p, 0.7, z);
  const auto b = invert_to_physical(p, -0.7, z);
  CHECK(a.I == doctest::Approx(b.I).epsilon(1e-14));
  CHECK(a.v == doctest::Approx(-b.v).epsilon(1e-14));
  CHECK(a.v < 0.0);
  CHECK_FALSE(invert_to_physical(p, beam_edge() + 0.01, z).in_support);
  CHECK_THROWS_AS(invert_to_physical(p, 0.1, z_self_focus(p)), CollapseReachedError);
  CHECK_THROWS_AS(invert_to_physical(p, 0.1, -1.0), DomainError);
}

TEST_CASE("on-axis intensity diverges at the collapse distance") {
  const auto t0 = std::chrono::steady_clock::now();
  for (const ExactSolutionParams p : {ExactSolutionParams{3.0, 1.0}, ExactSolutionParams{0.001, 0.2}}) {
    const double zs = z_self_focus(p);
    const double peak = boundary_profile(p, 0.0).I;
    CHECK(on_axis_intensity(p, 0.0) == doctest::Approx(peak));
    CHECK(on_axis_intensity(p, 0.999 * zs) > 100.0 * peak);
    CHECK(on_axis_intensity(p, 0.9995 * zs) > on_axis_intensity(p, 0.999 * zs));
    CHECK(on_axis_intensity(p, 0.5 * zs) == doctest::Approx(invert_to_physical(p, 0.0, 0.5 * zs).I).epsilon(1e-10));
    // On the axis chi = 0, so z I = tau(I, 0).
    const double I = on_axis_intensity(p, 0.5 * zs);
    CHECK(0.5 * zs * I == doctest::Approx(tau_of(p, I, 0.0)).epsilon(1e-12));
    CHECK_THROWS_AS(on_axis_intensity(p, zs), CollapseReachedError);
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 1.0);
}

TEST_CASE("profile_at flags points outside the beam") {
  const ExactSolutionParams p{3.0, 1.0};
  const std::vector<double> xs{-3.0, -1.0, 0.0, 1.0, 3.0};
  const BeamProfile prof = profile_at(p, 0.3, xs);
  CHECK(prof.flags[0] == PointFlag::OutOfSupport);
  CHECK(prof.I[0] == 0.0);
  CHECK(prof.flags[2] == PointFlag::Ok);
  CHECK(prof.I[1] == doctest::Approx(prof.I[3]));
  CHECK(prof.all_valid());
}

TEST_CASE("chi and tau evaluate in long double") {
  const ExactSolutionParams p{3.0, 1.0};
  const long double chi = chi_of<long double>(p, 1.2L, -0.4L);
  CHECK(static_cast<double>(chi) == doctest::Approx(chi_of(p, 1.2, -0.4)).epsilon(1e-15));
  CHECK_THROWS_AS(tau_of(p, 0.1, 0.0), UnreachableError);
}
