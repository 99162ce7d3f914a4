#include "collapse_kit/reference_nlse.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "collapse_kit/errors.hpp"

namespace collapse_kit {

namespace {

using cplx = std::complex<double>;

// Radial grid r_j = j dr, j = 0..n-1, psi(r_max) = 0. Finite-volume weights
// make the discrete Laplacian V^{-1} A with A symmetric, so Crank-Nicolson
// conserves sum V_j |psi_j|^2 exactly.
struct Grid {
  int n = 0;
  double dr = 0.0;
  std::vector<double> r;
  std::vector<double> vol;
  std::vector<double> lower;  // A_{j,j-1}
  std::vector<double> upper;  // A_{j,j+1}
  std::vector<double> damping;
  int first_layer_node = 0;
};

Grid make_grid(const ReferenceConfig& cfg) {
  Grid g;
  g.n = cfg.nodes;
  g.dr = cfg.r_max / (cfg.nodes - 1);
  g.r.resize(g.n);
  g.vol.resize(g.n);
  g.lower.assign(g.n, 0.0);
  g.upper.assign(g.n, 0.0);
  g.damping.assign(g.n, 0.0);
  const double layer_start = cfg.r_max * (1.0 - cfg.absorb_fraction);
  const double width = cfg.r_max - layer_start;
  g.first_layer_node = g.n;
  for (int j = 0; j < g.n; ++j) {
    g.r[j] = j * g.dr;
    g.vol[j] = j == 0 ? g.dr * g.dr / 8.0 : g.r[j] * g.dr;
    if (j > 0) g.lower[j] = (g.r[j] - 0.5 * g.dr) / g.dr;
    g.upper[j] = (g.r[j] + 0.5 * g.dr) / g.dr;
    if (g.r[j] > layer_start && width > 0.0) {
      const double s = (g.r[j] - layer_start) / width;
      g.damping[j] = cfg.absorb_strength * s * s * s * s;
      g.first_layer_node = std::min(g.first_layer_node, j);
    }
  }
  return g;
}

class Stepper {
 public:
  Stepper(const Grid& g, const NonlinearityModel& model, double eps, bool linear)
      : g_(g), model_(model), eps_(eps), linear_(linear), c_(g.n), d_(g.n) {}

  void step(std::vector<cplx>& psi, double dz) {
    half_nonlinear(psi, 0.5 * dz);
    linear_step(psi, dz);
    half_nonlinear(psi, 0.5 * dz);
  }

 private:
  void half_nonlinear(std::vector<cplx>& psi, double dz) const {
    const double k = model_.alpha() / eps_;
    for (int j = 0; j < g_.n; ++j) {
      double phase = 0.0;
      if (!linear_) {
        const double I = std::norm(psi[j]);
        model_.require_in_domain(I);
        phase = k * big_phi(model_, I) * dz;
      }
      psi[j] *= std::polar(std::exp(-g_.damping[j] * dz), phase);
    }
  }

  // (V - i th A) psi' = (V + i th A) psi with th = dz eps / 4.
  void linear_step(std::vector<cplx>& psi, double dz) {
    const int m = g_.n - 1;  // last node is pinned to zero
    const cplx ith(0.0, 0.25 * dz * eps_);
    auto diag = [&](int j) { return -(g_.lower[j] + g_.upper[j]); };
    for (int j = 0; j < m; ++j) {
      cplx ap = diag(j) * psi[j];
      if (j > 0) ap += g_.lower[j] * psi[j - 1];
      if (j + 1 < m) ap += g_.upper[j] * psi[j + 1];
      d_[j] = g_.vol[j] * psi[j] + ith * ap;
    }
    // Thomas algorithm: sub a_j = -ith lower_j, main b_j = V_j - ith diag_j, super c_j = -ith upper_j.
    cplx b0 = g_.vol[0] - ith * diag(0);
    c_[0] = -ith * g_.upper[0] / b0;
    d_[0] /= b0;
    for (int j = 1; j < m; ++j) {
      const cplx a = -ith * g_.lower[j];
      const cplx b = g_.vol[j] - ith * diag(j) - a * c_[j - 1];
      c_[j] = -ith * g_.upper[j] / b;
      d_[j] = (d_[j] - a * d_[j - 1]) / b;
    }
    psi[m - 1] = d_[m - 1];
    for (int j = m - 2; j >= 0; --j) psi[j] = d_[j] - c_[j] * psi[j + 1];
    psi[m] = 0.0;
  }

  const Grid& g_;
  const NonlinearityModel& model_;
  double eps_;
  bool linear_;
  std::vector<cplx> c_;
  std::vector<cplx> d_;
};

double interior_power(const Grid& g, const std::vector<cplx>& psi) {
  double p = 0.0;
  for (int j = 0; j < g.first_layer_node; ++j) p += g.vol[j] * std::norm(psi[j]);
  return p;
}

double max_abs(const std::vector<cplx>& psi) {
  double m = 0.0;
  for (const cplx& c : psi) m = std::max(m, std::abs(c));
  return m;
}

BeamProfile snapshot(const Grid& g, const std::vector<cplx>& psi, double z, double eps) {
  BeamProfile prof;
  prof.z = z;
  prof.nu = 2;
  for (int j = 0; j < g.n; ++j) {
    const double I = std::norm(psi[j]);
    double v = 0.0;
    if (j > 0 && j + 1 < g.n && I > 0.0) {
      const cplx dpsi = (psi[j + 1] - psi[j - 1]) / (2.0 * g.dr);
      v = eps * std::imag(std::conj(psi[j]) * dpsi) / I;
    }
    prof.push(g.r[j], I, v, j < g.first_layer_node ? PointFlag::Ok : PointFlag::OutOfSupport);
  }
  return prof;
}

}  // namespace

ReferenceRun nlse_reference(const NonlinearityModel& model, const InitialProfile& profile, double z_end,
                            const ReferenceConfig& cfg) {
  if (!(z_end >= 0.0) || !std::isfinite(z_end)) throw InputError("nlse_reference: z_end must be nonnegative");
  if (cfg.nodes < 16) throw InputError("nlse_reference: at least 16 radial nodes are required");
  if (!(cfg.r_max > 0.0) || !(cfg.absorb_fraction >= 0.0 && cfg.absorb_fraction < 1.0)) {
    throw InputError("nlse_reference: invalid radial domain");
  }
  if (!(cfg.dz_min > 0.0) || !(cfg.dz_initial >= cfg.dz_min) || !(cfg.dz_max >= cfg.dz_initial)) {
    throw InputError("nlse_reference: step bounds must satisfy 0 < dz_min <= dz_initial <= dz_max");
  }
  if (!(cfg.tolerance > 0.0)) throw InputError("nlse_reference: tolerance must be positive");
  if (!(model.beta() > 0.0)) throw DomainError("nlse_reference: diffraction coefficient beta must be positive");
  const double eps = std::sqrt(2.0 * model.beta());

  std::vector<double> stops;
  for (double z : cfg.snapshots) {
    if (!(z >= 0.0) || z > z_end) throw InputError("nlse_reference: snapshot z outside [0, z_end]");
    stops.push_back(z);
  }
  stops.push_back(z_end);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  const Grid g = make_grid(cfg);
  std::vector<cplx> psi(g.n);
  double radius = cfg.r_max;
  const double peak = profile(0.0);
  for (int j = 0; j < g.n; ++j) {
    const double n = profile(g.r[j]);
    if (!(n >= 0.0) || !std::isfinite(n)) throw ProfileError("nlse_reference: initial intensity must be nonnegative");
    if (peak > 0.0 && n <= peak / std::exp(1.0)) radius = std::min(radius, g.r[j]);
    psi[j] = std::sqrt(n);
  }
  if (peak > 0.0 && 3.0 * radius > cfg.r_max) {
    throw InputError("nlse_reference: r_max must be at least three beam radii");
  }
  psi[g.n - 1] = 0.0;

  ReferenceRun run;
  run.r_max = cfg.r_max;
  run.nodes = cfg.nodes;
  run.absorb_width = cfg.r_max * cfg.absorb_fraction;
  const double p0 = interior_power(g, psi);

  Stepper stepper(g, model, eps, cfg.linear);
  std::vector<cplx> full, half;
  double z = 0.0;
  double dz = cfg.dz_initial;
  double p_prev = p0;
  std::size_t next_stop = 0;
  auto record = [&] {
    run.snapshots.push_back(snapshot(g, psi, z, eps));
    const double p = interior_power(g, psi);
    run.power.push_back(p);
    run.power_drift_rate.push_back(z > 0.0 && p0 > 0.0 ? std::abs(p - p0) / p0 / z : 0.0);
  };
  while (next_stop < stops.size() && stops[next_stop] == 0.0) {
    record();
    ++next_stop;
  }
  while (next_stop < stops.size()) {
    const double target = stops[next_stop];
    const bool clipped = z + dz >= target;
    const double h = clipped ? target - z : dz;
    full = psi;
    stepper.step(full, h);
    half = psi;
    stepper.step(half, 0.5 * h);
    stepper.step(half, 0.5 * h);
    double err = 0.0;
    for (int j = 0; j < g.n; ++j) err = std::max(err, std::abs(full[j] - half[j]));
    const double scale = max_abs(psi);
    err = scale > 0.0 ? err / scale : 0.0;
    const double p = interior_power(g, half);
    const double drift = p0 > 0.0 ? std::abs(p - p_prev) / p0 : 0.0;
    if (err > cfg.tolerance || drift > 1e-3) {
      ++run.steps_rejected;
      const double shrink = err > cfg.tolerance ? std::max(0.2, 0.9 * std::cbrt(cfg.tolerance / err)) : 0.5;
      dz = h * shrink;
      if (dz < cfg.dz_min) {
        throw IntegrationError("nlse_reference: step size fell below dz_min at z = " + std::to_string(z), err,
                               cfg.tolerance);
      }
      continue;
    }
    psi.swap(half);
    z = clipped ? target : z + h;
    p_prev = p;
    ++run.steps_accepted;
    run.dz_smallest = run.steps_accepted == 1 ? h : std::min(run.dz_smallest, h);
    run.dz_largest = std::max(run.dz_largest, h);
    if (clipped) {
      record();
      ++next_stop;
    } else {
      const double grow = err > 0.0 ? std::min(2.0, 0.9 * std::cbrt(cfg.tolerance / err)) : 2.0;
      dz = std::clamp(h * grow, cfg.dz_min, cfg.dz_max);
    }
  }
  return run;
}

}  // namespace collapse_kit
