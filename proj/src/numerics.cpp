#include "collapse_kit/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace collapse_kit::numerics {

namespace {

double scan_node(double lo, double hi, int i, int nodes, bool geometric) {
  if (i == 0) return lo;
  if (i == nodes - 1) return hi;
  const double t = static_cast<double>(i) / (nodes - 1);
  if (!geometric) return lo + (hi - lo) * t;
  // Geometric in the offset from lo; the first interior offset is
  // 1e-6 of the span.
  const double span = hi - lo;
  const double first = span * 1e-6;
  return lo + first * std::pow(span / first, t);
}

}  // namespace

std::vector<Bracket> sign_changes(const ScalarFn& f, double lo, double hi, int nodes, bool geometric) {
  std::vector<Bracket> out;
  if (nodes < 2 || !(hi > lo)) return out;
  double x_prev = lo;
  double f_prev = f(lo);
  if (f_prev == 0.0) out.push_back({lo, lo});
  for (int i = 1; i < nodes; ++i) {
    const double x = scan_node(lo, hi, i, nodes, geometric);
    const double fx = f(x);
    if (fx == 0.0) {
      out.push_back({x, x});
    } else if (f_prev != 0.0 && std::signbit(fx) != std::signbit(f_prev) && std::isfinite(fx) &&
               std::isfinite(f_prev)) {
      out.push_back({x_prev, x});
    }
    x_prev = x;
    f_prev = fx;
  }
  return out;
}

double polish_root(const ScalarFn& f, Bracket bracket, const RootConfig& cfg) {
  double a = bracket.lo;
  double b = bracket.hi;
  if (a == b) return a;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb)) {
    throw NoRootError("polish_root: bracket has no sign change", a, b);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < cfg.max_iter + 200; ++it) {
    const double width = std::abs(b - a);
    const double scale = std::max(std::abs(a), std::abs(b));
    // Secant step when it lands well inside the bracket, bisection otherwise.
    double m = 0.5 * (a + b);
    if (width < 1e-3 * (1.0 + scale) && fb != fa) {
      const double s = b - fb * (b - a) / (fb - fa);
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      if (s > lo + 0.05 * width && s < hi - 0.05 * width) m = s;
    }
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
    const double best = std::abs(fa) < std::abs(fb) ? a : b;
    const double fbest = std::min(std::abs(fa), std::abs(fb));
    const double w = std::abs(b - a);
    if (fbest <= cfg.abs_tol && w <= cfg.rel_tol * std::abs(best) + cfg.abs_tol) return best;
    if (w <= 2.0 * eps * std::abs(best) || w < std::numeric_limits<double>::min()) return best;
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

double bracket_root(const ScalarFn& f, double lo, double hi, const RootConfig& cfg) {
  const auto brackets = sign_changes(f, lo, hi, std::max(cfg.bracket_nodes, 2), cfg.geometric_scan);
  if (brackets.empty()) {
    throw NoRootError("bracket_root: no sign change", lo, hi);
  }
  return polish_root(f, brackets.front(), cfg);
}

namespace {

double norm_inf(const Vec2& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }

}  // namespace

NewtonReport newton2d_solve(const System2& f, double param, Vec2 guess, const RootConfig& cfg) {
  Vec2 u = guess;
  Vec2 r = f(param, u);
  double rn = norm_inf(r);
  NewtonReport rep;
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (!std::isfinite(rn)) throw FoldError("newton2d: non-finite residual", param);
    if (rn <= cfg.abs_tol) {
      rep.solution = u;
      rep.residual = rn;
      rep.iterations = it;
      return rep;
    }
    // Central-difference Jacobian.
    double jac[2][2];
    for (int k = 0; k < 2; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(u[k]));
      Vec2 up = u;
      Vec2 um = u;
      up[k] += h;
      um[k] -= h;
      const Vec2 fp = f(param, up);
      const Vec2 fm = f(param, um);
      jac[0][k] = (fp[0] - fm[0]) / (2 * h);
      jac[1][k] = (fp[1] - fm[1]) / (2 * h);
    }
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    // Condition number of the 2x2 Jacobian from its singular values.
    const double fro2 = jac[0][0] * jac[0][0] + jac[0][1] * jac[0][1] + jac[1][0] * jac[1][0] +
                        jac[1][1] * jac[1][1];
    const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
    const double smax2 = 0.5 * (fro2 + disc);
    const double smin2 = std::max(0.0, 0.5 * (fro2 - disc));
    rep.jacobian_det = det;
    if (det == 0.0 || smin2 <= 0.0 || std::sqrt(smax2 / smin2) > 1e12) {
      throw FoldError("newton2d: singular Jacobian", param);
    }
    const Vec2 step{(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
                    (-jac[1][0] * r[0] + jac[0][0] * r[1]) / det};
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      const Vec2 trial{u[0] - lambda * step[0], u[1] - lambda * step[1]};
      const Vec2 rt = f(param, trial);
      const double rtn = norm_inf(rt);
      if (std::isfinite(rtn) && rtn < rn) {
        u = trial;
        r = rt;
        rn = rtn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      // Residual stagnated at rounding level: accept if close enough.
      if (rn <= 1e3 * cfg.abs_tol) {
        rep.solution = u;
        rep.residual = rn;
        rep.iterations = it;
        return rep;
      }
      throw FoldError("newton2d: residual stagnation", param);
    }
  }
  if (rn <= 1e3 * cfg.abs_tol) {
    rep.solution = u;
    rep.residual = rn;
    rep.iterations = cfg.max_iter;
    return rep;
  }
  throw FoldError("newton2d: no convergence", param);
}

Vec2 newton2d(const System2& f, Vec2 start, std::span<const double> schedule, const RootConfig& cfg) {
  Vec2 u = start;
  double last_good = schedule.empty() ? 0.0 : schedule.front();
  for (double param : schedule) {
    try {
      u = newton2d_solve(f, param, u, cfg).solution;
    } catch (const FoldError&) {
      throw FoldError("newton2d: continuation failed", last_good);
    }
    last_good = param;
  }
  return u;
}

NewtonReport continue2d(const System2& f, Vec2 start, double from, double to,
                        const ContinuationConfig& ccfg, const RootConfig& cfg) {
  NewtonReport rep;
  rep.solution = start;
  rep.residual = norm_inf(f(from, start));
  if (from == to) return newton2d_solve(f, from, start, cfg);
  const double dir = to > from ? 1.0 : -1.0;
  double step = std::min(ccfg.initial_step, std::abs(to - from));
  double param = from;
  Vec2 u = start;
  int successes = 0;
  while (dir * (to - param) > 0.0) {
    double next = param + dir * step;
    if (dir * (next - to) > 0.0 || std::abs(to - next) < 1e-3 * step) next = to;
    try {
      rep = newton2d_solve(f, next, u, cfg);
      u = rep.solution;
      param = next;
      if (++successes >= 4 && step < ccfg.initial_step) {
        step = std::min(ccfg.initial_step, 2.0 * step);
        successes = 0;
      }
    } catch (const FoldError&) {
      step *= 0.5;
      successes = 0;
      if (step < ccfg.min_step) {
        throw FoldError("continuation: step underflow", param);
      }
    }
  }
  return rep;
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double value;
  double error;
};

Segment gk15(const ScalarFn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {kron * h, std::abs((kron - gauss) * h)};
}

struct Piece {
  double a;
  double b;
  Segment seg;
  int depth;
};

}  // namespace

QuadResult adaptive_quad_report(const ScalarFn& f, double a, double b, const QuadConfig& cfg) {
  if (a == b) return {};
  ScalarFn g = f;
  double lo = a;
  double hi = b;
  if (cfg.singular_endpoint == SingularEndpoint::SqrtLower) {
    if (b < a) throw DomainError("adaptive_quad: SqrtLower needs a < b");
    g = [&f, a](double s) { return s == 0.0 ? 0.0 : 2.0 * s * f(a + s * s); };
    lo = 0.0;
    hi = std::sqrt(b - a);
  }
  // Globally adaptive: always bisect the piece with the largest error
  // estimate, so the work is bounded by the piece budget.
  constexpr std::size_t kMaxPieces = 2000;
  auto worse = [](const Piece& x, const Piece& y) { return x.seg.error < y.seg.error; };
  std::vector<Piece> heap;
  heap.push_back({lo, hi, gk15(g, lo, hi), 0});
  int evaluations = 15;
  double value = heap.front().seg.value;
  double error = heap.front().seg.error;
  bool exhausted = false;
  while (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value))) {
    if (heap.size() >= kMaxPieces) {
      exhausted = true;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Piece top = heap.back();
    if (top.depth >= cfg.max_depth) {
      heap.back().seg.error = 0.0;  // retire it; its error stays in the total
      std::push_heap(heap.begin(), heap.end(), worse);
      exhausted = true;
      if (std::all_of(heap.begin(), heap.end(), [](const Piece& p) { return p.seg.error == 0.0; })) break;
      continue;
    }
    heap.pop_back();
    const double m = 0.5 * (top.a + top.b);
    const Piece left{top.a, m, gk15(g, top.a, m), top.depth + 1};
    const Piece right{m, top.b, gk15(g, m, top.b), top.depth + 1};
    evaluations += 30;
    value += left.seg.value + right.seg.value - top.seg.value;
    error += left.seg.error + right.seg.error - top.seg.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
  }
  // Re-sum to shed accumulated update rounding.
  value = 0.0;
  for (const Piece& p : heap) value += p.seg.value;
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
  // Pieces at rounding level cannot be refined further; accept a total error
  // within a small multiple of the floor.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
  if (exhausted && error > std::max(tol, floor)) {
    throw IntegrationError("adaptive_quad: subdivision budget exhausted", value, error);
  }
  return {value, error, evaluations};
}

double adaptive_quad(const ScalarFn& f, double a, double b, const QuadConfig& cfg) {
  return adaptive_quad_report(f, a, b, cfg).value;
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order) {
  // Fornberg's recursion, in-place form; c[j][k] is the weight of node j for
  // the k-th derivative.
  const int n = static_cast<int>(nodes.size());
  const int m = order;
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

}  // namespace collapse_kit::numerics
