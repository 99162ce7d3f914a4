#pragma once

// Shared numerical kernels: bracketed scalar roots, damped 2-D Newton with
// continuation, adaptive Gauss-Kronrod quadrature and finite differences.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "collapse_kit/errors.hpp"

namespace collapse_kit::numerics {

struct RootConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_iter = 100;
  int bracket_nodes = 512;
  // Scan nodes spaced geometrically in (x - lo) instead of uniformly.
  bool geometric_scan = false;
};

enum class SingularEndpoint { None, SqrtLower };

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 40;
  SingularEndpoint singular_endpoint = SingularEndpoint::None;
};

using ScalarFn = std::function<double(double)>;

struct Bracket {
  double lo;
  double hi;
};

/// Every sub-interval of a `nodes`-point scan of [lo, hi] on which f changes
/// sign (an exact zero at a node yields a degenerate bracket {x, x}).
std::vector<Bracket> sign_changes(const ScalarFn& f, double lo, double hi, int nodes,
                                  bool geometric = false);

/// Refines a bracket with f(lo) f(hi) <= 0 by bisection followed by a
/// safeguarded secant polish.
double polish_root(const ScalarFn& f, Bracket bracket, const RootConfig& cfg = {});

/// First root of f on [lo, hi] located by a node scan and polished.
/// Throws NoRootError when the scan finds no sign change.
double bracket_root(const ScalarFn& f, double lo, double hi, const RootConfig& cfg = {});

using Vec2 = std::array<double, 2>;
/// System F(param, u) = 0 for unknowns u at continuation parameter `param`.
using System2 = std::function<Vec2(double, const Vec2&)>;

struct NewtonReport {
  Vec2 solution{};
  double residual = 0.0;
  int iterations = 0;
  double jacobian_det = 0.0;
};

/// Damped Newton on F(param, .) from `guess`. The Jacobian is built from
/// central differences. Throws FoldError (carrying `param`) when the
/// Jacobian condition number exceeds 1e12 or the residual stagnates.
NewtonReport newton2d_solve(const System2& f, double param, Vec2 guess,
                            const RootConfig& cfg = {});

/// Warm-started Newton over every node of `schedule`; `start` must solve F at
/// schedule.front(). FoldError reports the last accepted node.
Vec2 newton2d(const System2& f, Vec2 start, std::span<const double> schedule,
              const RootConfig& cfg = {});

struct ContinuationConfig {
  double initial_step = 1e-2;
  double min_step = 1e-8;
};

/// Continuation from `from` to `to` with step halving on Newton failure and
/// step recovery after successes.
NewtonReport continue2d(const System2& f, Vec2 start, double from, double to,
                        const ContinuationConfig& ccfg, const RootConfig& cfg = {});

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive 7/15-point Gauss-Kronrod quadrature. With SqrtLower the
/// substitution t = a + s^2 removes an inverse square-root singularity at a.
QuadResult adaptive_quad_report(const ScalarFn& f, double a, double b, const QuadConfig& cfg = {});

double adaptive_quad(const ScalarFn& f, double a, double b, const QuadConfig& cfg = {});

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Central finite difference of order 1 or 2; error O(h^2).
template <class Real, class F>
Real finite_diff(F&& f, Real x, int order, Real h, Interval domain = {}) {
  if (!domain.contains(static_cast<double>(x - h)) || !domain.contains(static_cast<double>(x + h))) {
    throw DomainError("finite_diff: stencil leaves the domain");
  }
  if (order == 1) {
    return (f(x + h) - f(x - h)) / (2 * h);
  }
  if (order == 2) {
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
  }
  throw DomainError("finite_diff: order must be 1 or 2");
}

/// Fornberg weights for the derivative of order `order` at x0 on `nodes`.
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order);

}  // namespace collapse_kit::numerics
