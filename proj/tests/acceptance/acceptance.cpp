// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "collapse_kit/cli/config.hpp"
#include "collapse_kit/cli/run.hpp"
#include "collapse_kit/eikonal_approx_1d.hpp"
#include "collapse_kit/errors.hpp"
#include "collapse_kit/hodograph_exact.hpp"
#include "collapse_kit/nlse_approx_2d.hpp"
#include "collapse_kit/reference_nlse.hpp"
#include "collapse_kit/s_function.hpp"
#include "collapse_kit/validation.hpp"

using namespace collapse_kit;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < budget_s, fmt::format("runtime {:.2f} s < {:g} s", secs, budget_s));
  if (!o.passed) ++failures;
  fmt::print("criterion {:>2}: {}  {}\n    {}\n", id, o.passed ? "PASS" : "FAIL", title, o.detail);
  std::fflush(stdout);
}

std::string g(double v) { return fmt::format("{:.6g}", v); }

template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SFunction case1() { return build_s_function(NonlinearityModel::kerr_mpi(0.01, 0.001, 0.1, 6), InitialProfile::gaussian()); }
SFunction case2() { return build_s_function(NonlinearityModel::kerr_mpi(0.01, 0.001, 0.6, 8), InitialProfile::gaussian()); }

double ray_map(const SFunction& S, double chi, double z) { return chi * (1.0 + 2.0 * z * z * S.d1(chi * chi)); }

// Smallest slope of the ray map over a dense chi grid, by differences of Y.
std::pair<double, double> min_slope(const SFunction& S, double z, double chi_max, int n) {
  const double h = chi_max / n;
  double best = 1e300, at = 0.0;
  double prev = ray_map(S, 0.0, z);
  for (int i = 1; i <= n; ++i) {
    const double y = ray_map(S, i * h, z);
    const double slope = (y - prev) / h;
    if (slope < best) {
      best = slope;
      at = (i - 0.5) * h;
    }
    prev = y;
  }
  return {best, at};
}

// Root of Y(chi) = x nearest the origin on a 1e5-node scan, then bisected.
double chi_scan(const SFunction& S, double x, double z) {
  const int n = 100000;
  const double hi = 3.0, h = hi / n;
  auto f = [&](double c) { return ray_map(S, c, z) - x; };
  for (int i = 0; i < n; ++i) {
    if ((f(i * h) > 0.0) != (f((i + 1) * h) > 0.0)) return bisect(f, i * h, (i + 1) * h);
  }
  return std::nan("");
}

// Root of S(mu^2) = S(chi^2) + 2 z^2 chi^2 S_eta(chi^2)^2 nearest chi on a 1e5-node scan.
double mu_scan(const SFunction& S, double chi, double z) {
  const double e = chi * chi;
  const double target = 2.0 * z * z * e * S.d1(e) * S.d1(e);
  auto f = [&](double m) { return S.difference(e, m * m) - target; };
  const int n = 100000;
  const double step = 3.0 / n;
  double best = std::nan("");
  for (int i = 0; i < n; ++i) {
    const double a = i * step, b = (i + 1) * step;
    if ((f(a) > 0.0) != (f(b) > 0.0)) {
      const double r = bisect(f, a, b);
      if (std::isnan(best) || std::abs(r - chi) < std::abs(best - chi)) best = r;
    }
  }
  return best;
}

}  // namespace

int main() {
  fmt::print("acceptance criteria\n");

  criterion(1, "exact collapse distance", 1.0, [](Outcome& o) {
    double worst_id = 0.0, worst_ratio = 1e300;
    for (const ExactSolutionParams p : {ExactSolutionParams{3.0, 1.0}, ExactSolutionParams{0.001, 0.2}}) {
      const double zs = z_self_focus(p);
      worst_id = std::max(worst_id, std::abs(zs - p.b * std::sqrt(std::exp(1.0) / (2.0 * p.alpha))) / zs);
      const double peak = (1.0 + std::log(2.0)) / p.b;
      for (double f : {0.999, 0.9995, 0.9999}) worst_ratio = std::min(worst_ratio, on_axis_intensity(p, f * zs) / peak);
    }
    o.require(worst_id <= 4e-16, "z_sf identity rel. error " + g(worst_id));
    o.require(worst_ratio > 100.0, "min I(0, z >= 0.999 z_sf) / peak = " + g(worst_ratio));
  });

  criterion(2, "hodograph certification", 10.0, [](Outcome& o) {
    const ExactSolutionParams p{3.0, 1.0};
    const HodographResiduals r = residual_hodograph(p);
    o.require(r.bvp.max_abs_residual <= 1e-7,
              fmt::format("first-order system residual {} at (I={}, v={})", g(r.bvp.max_abs_residual),
                          g(r.bvp.argmax_first), g(r.bvp.argmax_second)));
    o.require(r.second_order.max_abs_residual <= 1e-6,
              fmt::format("second-order equation residual {} at (I={}, v={})", g(r.second_order.max_abs_residual),
                          g(r.second_order.argmax_first), g(r.second_order.argmax_second)));
    HodographGrid grid;
    grid.step = 1e-4;
    const HodographResiduals a = residual_hodograph(p, grid);
    grid.step = 5e-5;
    const HodographResiduals b = residual_hodograph(p, grid);
    const double ratio = a.second_order.max_abs_residual / b.second_order.max_abs_residual;
    o.require(ratio >= 3.6 && ratio <= 4.4, "h-halving ratio " + g(ratio));
  });

  criterion(3, "beam edge and energy", 30.0, [](Outcome& o) {
    const ExactSolutionParams p{3.0, 1.0};
    const double zs = z_self_focus(p);
    const double edge = std::sqrt(2.0 * std::exp(1.0) - 1.0);
    double worst = 0.0;
    for (double f : {0.0, 0.3, 0.6}) worst = std::max(worst, std::abs(measure_beam_edge(p, f * zs) - edge));
    o.require(worst <= 1e-10, "edge deviation " + g(worst));
    const auto xs = linspace(0.0, edge, 4001);
    const double e0 = energy_integral(profile_at(p, 0.0, xs));
    double drift = 0.0;
    for (double f : {0.3, 0.6, 0.9}) drift = std::max(drift, std::abs(energy_integral(profile_at(p, f * zs, xs)) - e0) / e0);
    o.require(drift <= 1e-4, "energy relative drift " + g(drift));
  });

  criterion(4, "approximate vs exact collapse distance", 5.0, [](Outcome& o) {
    double lo = 1e300, hi = 0.0;
    int pairs = 0;
    for (double alpha : {0.01, 0.03, 0.1, 0.3, 1.0}) {
      for (double b : {0.5, 2.0}) {
        const ExactSolutionParams p{alpha, b};
        const double r = z_self_focus_approx(p) / z_self_focus(p);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        ++pairs;
      }
    }
    o.require(lo >= 1.02 && hi <= 1.04, fmt::format("ratio in [{}, {}] over {} pairs, alpha 0.01..1", g(lo), g(hi), pairs));
  });

  criterion(5, "radial worked case 1", 5.0, [](Outcome& o) {
    const CollapseReport r = classify_collapse(case1());
    o.require(r.regime == CollapseRegime::OnAxis, "regime " + to_string(r.regime));
    o.require(r.z_axis && std::abs(*r.z_axis - 7.906) <= 1e-3, "z_axis " + g(r.z_axis.value_or(NAN)));
    o.require(r.candidates.size() == 1 && std::abs(r.candidates[0].eta_cr - 1.5) <= 0.05,
              fmt::format("{} candidate(s), first {}", r.candidates.size(),
                          g(r.candidates.empty() ? NAN : r.candidates[0].eta_cr)));
    o.require(!r.candidates.empty() && !r.candidates[0].corrected, "no real singularity position");
  });

  criterion(6, "radial worked case 2", 30.0, [](Outcome& o) {
    const SFunction S = case2();
    const CollapseReport r = classify_collapse(S);
    std::vector<double> etas;
    for (const auto& c : r.candidates) etas.push_back(c.eta_cr);
    std::sort(etas.begin(), etas.end());
    o.require(etas.size() == 2 && std::abs(etas[0] - 0.11) <= 0.01 && std::abs(etas[1] - 1.5) <= 0.05,
              fmt::format("candidates {}", etas.size() == 2 ? g(etas[0]) + ", " + g(etas[1]) : "count " + g(etas.size())));
    o.require(r.z_axis && std::abs(*r.z_axis - 12.91) <= 0.01, "z_axis " + g(r.z_axis.value_or(NAN)));
    o.require(r.regime == CollapseRegime::RingFirst && !r.ring_events.empty(), "regime " + to_string(r.regime));
    if (r.ring_events.empty()) return;
    const RingEvent& ev = r.ring_events.front();
    o.require(ev.z_ring >= 7.9 && ev.z_ring <= 8.5 && ev.z_ring < *r.z_axis, "z_ring " + g(ev.z_ring));

    // Fold onset oracle: first z at which the ray map stops being monotone.
    const int n = 100000;
    const double chi_max = 3.0;
    auto slope_at = [&](double z) { return min_slope(S, z, chi_max, n).first; };
    double lo = 1.0, hi = *r.z_axis - 0.01;
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (slope_at(mid) > 0.0 ? lo : hi) = mid;
    }
    const double z_oracle = 0.5 * (lo + hi);
    const double chi_fold = min_slope(S, hi, chi_max, n).second;
    const double x_oracle = ray_map(S, chi_fold, z_oracle);
    o.require(std::abs(ev.z_ring - z_oracle) <= 1e-3, "oracle z " + g(z_oracle));
    o.require(std::abs(ev.x_ring - x_oracle) <= 1e-3,
              fmt::format("x_ring {} vs oracle x {}; the expected 0.068 is not reproduced", g(ev.x_ring), g(x_oracle)));
  });

  criterion(7, "axis-limit closed form", 1.0, [](Outcome& o) {
    const auto gauss = InitialProfile::gaussian();
    double worst = 0.0;
    for (const SFunction& S : {case1(), case2()}) {
      const CollapseReport r = classify_collapse(S);
      double z_end = r.z_axis.value_or(10.0);
      if (r.first_singularity) z_end = std::min(z_end, r.first_singularity->z);
      for (int k = 1; k <= 20; ++k) {
        const double z = 0.95 * z_end * k / 20.0;
        const double closed = gauss(0.0) / (1.0 + 2.0 * z * z * S.d1(0.0));
        worst = std::max(worst, std::abs(field_at(S, gauss, 1e-8, z).I - closed) / closed);
      }
    }
    o.require(worst <= 1e-6, "worst relative difference " + g(worst));
    const double spot = field_at(case1(), gauss, 0.0, 5.0).I;
    o.require(std::abs(spot - 1.6667) <= 1e-4, "case 1 I(0, 5) = " + g(spot));
  });

  criterion(8, "reference integrator cross-check", 300.0, [](Outcome& o) {
    const auto model = NonlinearityModel::kerr_mpi(0.01, 0.001, 0.1, 6);
    const auto gauss = InitialProfile::gaussian();
    ReferenceConfig rc;
    rc.linear = true;
    rc.snapshots = {1.0, 2.0, 3.0, 4.0, 5.0};
    const ReferenceRun lin = nlse_reference(model, gauss, 5.0, rc);
    const double eps2 = 2.0 * model.beta();
    double law = 0.0;
    for (const BeamProfile& s : lin.snapshots) {
      const double exact = 1.0 / (1.0 + eps2 * s.z * s.z);
      law = std::max(law, std::abs(s.I[0] - exact) / exact);
    }
    o.require(law <= 1e-6, "linear diffraction law error " + g(law));

    rc.linear = false;
    rc.snapshots = {1.0, 2.0, 3.0, 4.0};
    const ReferenceRun run = nlse_reference(model, gauss, 4.0, rc);
    const SFunction S = build_s_function(model, gauss);
    const auto xs = linspace(0.0, 2.0, 401);
    double axis = 0.0, linf = 0.0;
    for (const BeamProfile& ref : run.snapshots) {
      const BeamProfile approx = profile_at_2d(S, gauss, ref.z, xs);
      axis = std::max(axis, std::abs(ref.I[0] - approx.I[0]) / approx.I[0]);
      linf = std::max(linf, compare_profiles(approx, ref).linf_I);
    }
    o.require(axis <= 0.05, "on-axis difference " + g(axis));
    o.require(linf <= 0.08, "L-infinity intensity difference " + g(linf));
  });

  criterion(9, "implicit solvers vs oracles", 60.0, [](Outcome& o) {
    const ExactSolutionParams p{3.0, 1.0};
    const auto model = NonlinearityModel::saturated_exp(p.alpha, p.b);
    const auto profile = InitialProfile::saturated_boundary(p.b);
    std::mt19937_64 rng(7);
    const double edge = beam_edge(p);
    std::uniform_real_distribution<double> ux(-edge, edge), uz(0.0, 0.5 * z_self_focus(p));
    double worst = 0.0;
    int compared = 0;
    for (int i = 0; i < 100; ++i) {
      const double x = ux(rng), z = uz(rng);
      const FieldValue a = solve_saturated_approx(p, x, z);
      const FieldValue b = solve_generic(model, profile, x, z);
      if (a.in_support != b.in_support) {
        worst = INFINITY;
        continue;
      }
      if (!a.in_support) continue;
      ++compared;
      worst = std::max({worst, std::abs(a.I - b.I), std::abs(a.v - b.v)});
    }
    o.require(worst <= 1e-6, fmt::format("generic vs closed form {} over {} points", g(worst), compared));

    double chi_err = 0.0, mu_err = 0.0;
    for (const SFunction& S : {case1(), case2()}) {
      for (double x : {0.05, 0.3, 0.9, 1.6}) {
        for (double z : {1.0, 3.0, 6.0}) chi_err = std::max(chi_err, std::abs(chi_root(S, x, z).chi - chi_scan(S, x, z)));
      }
      for (double chi : {0.1, 0.5, 1.0, 1.4}) {
        for (double z : {1.0, 4.0}) mu_err = std::max(mu_err, std::abs(mu_root(S, chi, z) - mu_scan(S, chi, z)));
      }
    }
    o.require(chi_err <= 1e-8, "chi_root vs scan " + g(chi_err));
    o.require(mu_err <= 1e-8, "mu_root vs scan " + g(mu_err));
  });

  criterion(10, "deterministic classify and sweep output", 60.0, [](Outcome& o) {
    auto capture = [](std::vector<const char*> args) {
      args.insert(args.begin(), "collapse-kit");
      cli::RunConfig cfg;
      if (cli::parse_args(static_cast<int>(args.size()), args.data(), cfg)) throw std::runtime_error("bad arguments");
      std::ostringstream out, err;
      const int status = cli::run(cfg, out, err);
      return std::to_string(status) + "\n" + out.str();
    };
    const std::vector<const char*> classify{"classify", "--alpha", "0.01", "--beta", "0.001", "--gamma", "0.6", "--K", "8"};
    const std::vector<const char*> sweep{"sweep", "--alpha", "0.01", "--beta", "0.001", "--sweep", "gamma=0.1:0.7:7",
                                         "--sweep", "K=6:8:2"};
    const std::string c1 = capture(classify), c2 = capture(classify);
    const std::string s1 = capture(sweep), s2 = capture(sweep);
    o.require(c1 == c2 && c1.rfind("0\n", 0) == 0, fmt::format("classify {} bytes identical", c1.size()));
    o.require(s1 == s2 && s1.rfind("0\n", 0) == 0, fmt::format("sweep {} bytes identical", s1.size()));
  });

  fmt::print("{} of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
