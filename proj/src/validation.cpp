#include "collapse_kit/validation.hpp"

#include <algorithm>
#include <cmath>

namespace collapse_kit {

std::string to_string(EquationId id) {
  switch (id) {
    case EquationId::BVP:
      return "BVP";
    case EquationId::SecOrEq:
      return "SecOrEq";
    case EquationId::Eikonal1D:
      return "Eikonal1D";
    case EquationId::Eikonal2D:
      return "Eikonal2D";
  }
  return "unknown";
}

namespace {

using LD = long double;

struct Residuals {
  LD bvp;
  LD second;
};

Residuals hodograph_residual_at(const ExactSolutionParams& p, LD I, LD v, LD h, LD psi_scale) {
  auto chi = [&](LD i, LD w) { return chi_of<LD>(p, i, w); };
  auto tau = [&](LD i, LD w) { return tau_of<LD>(p, i, chi(i, w)); };
  const LD c0 = chi(I, v);
  const LD chi_ip = chi(I + h, v), chi_im = chi(I - h, v);
  const LD chi_vp = chi(I, v + h), chi_vm = chi(I, v - h);
  const LD chi_I = (chi_ip - chi_im) / (2 * h);
  const LD chi_v = (chi_vp - chi_vm) / (2 * h);
  const LD chi_II = (chi_ip - 2 * c0 + chi_im) / (h * h);
  const LD chi_vv = (chi_vp - 2 * c0 + chi_vm) / (h * h);
  const LD tau_I = (tau(I + h, v) - tau(I - h, v)) / (2 * h);
  const LD tau_v = (tau(I, v + h) - tau(I, v - h)) / (2 * h);
  const LD alpha = p.alpha;
  const LD e_bI = std::exp(LD(p.b) * I);
  const LD psi = psi_scale * e_bI / alpha;
  const LD r1 = tau_v - psi * chi_I;
  const LD r2 = chi_v + tau_I;
  const LD r3 = alpha / psi_scale * chi_vv + e_bI * (LD(p.b) * chi_I + chi_II);
  return {std::max(std::abs(r1), std::abs(r2)), std::abs(r3)};
}

}  // namespace

HodographResiduals residual_hodograph(const ExactSolutionParams& p, const HodographGrid& grid) {
  p.validate();
  if (grid.intensity.n < 1 || grid.phase_gradient.n < 1 || !(grid.step > 0.0)) {
    throw InputError("residual_hodograph: empty grid or non-positive step");
  }
  HodographResiduals out;
  out.bvp.equation = EquationId::BVP;
  out.second_order.equation = EquationId::SecOrEq;
  for (ResidualReport* r : {&out.bvp, &out.second_order}) {
    r->first = grid.intensity;
    r->second = grid.phase_gradient;
    r->step = grid.step;
  }
  const auto Is = linspace(grid.intensity.lo, grid.intensity.hi, grid.intensity.n);
  const auto vs = linspace(grid.phase_gradient.lo, grid.phase_gradient.hi, grid.phase_gradient.n);
  for (double I : Is) {
    for (double v : vs) {
      Residuals r{};
      try {
        r = hodograph_residual_at(p, I, v, grid.step, grid.psi_scale);
      } catch (const UnreachableError&) {
        ++out.bvp.points_trimmed;
        ++out.second_order.points_trimmed;
        continue;
      }
      ++out.bvp.points_checked;
      ++out.second_order.points_checked;
      if (static_cast<double>(r.bvp) > out.bvp.max_abs_residual) {
        out.bvp.max_abs_residual = static_cast<double>(r.bvp);
        out.bvp.argmax_first = I;
        out.bvp.argmax_second = v;
      }
      if (static_cast<double>(r.second) > out.second_order.max_abs_residual) {
        out.second_order.max_abs_residual = static_cast<double>(r.second);
        out.second_order.argmax_first = I;
        out.second_order.argmax_second = v;
      }
    }
  }
  return out;
}

ResidualReport residual_eikonal(std::span<const BeamProfile> slices, const NonlinearityModel& model, int nu) {
  if (nu != 1 && nu != 2) throw InputError("residual_eikonal: nu must be 1 or 2");
  if (slices.size() < 3) throw InputError("residual_eikonal: at least three slices are required");
  const std::size_t m = slices.front().size();
  if (m < 3) throw InputError("residual_eikonal: at least three x nodes are required");
  const double dz = slices[1].z - slices[0].z;
  if (!(dz > 0.0)) throw InputError("residual_eikonal: slices must increase in z");
  for (std::size_t k = 0; k < slices.size(); ++k) {
    const BeamProfile& s = slices[k];
    if (s.size() != m) throw InputError("residual_eikonal: slices have different x grids");
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(s.x[i] - slices.front().x[i]) > 1e-12 * (1.0 + std::abs(s.x[i]))) {
        throw InputError("residual_eikonal: slices have different x grids");
      }
    }
    if (k > 0 && std::abs((s.z - slices[k - 1].z) - dz) > 1e-9 * std::max(1.0, std::abs(s.z))) {
      throw InputError("residual_eikonal: slices are not equispaced in z");
    }
  }
  const std::vector<double>& x = slices.front().x;
  ResidualReport rep;
  rep.equation = nu == 1 ? EquationId::Eikonal1D : EquationId::Eikonal2D;
  rep.first = {x.front(), x.back(), static_cast<int>(m)};
  rep.second = {slices.front().z, slices.back().z, static_cast<int>(slices.size())};
  rep.step = dz;
  auto good = [](const BeamProfile& s, std::size_t i) {
    return s.flags[i] == PointFlag::Ok && std::isfinite(s.I[i]) && std::isfinite(s.v[i]);
  };
  const double alpha = model.alpha();
  for (std::size_t k = 1; k + 1 < slices.size(); ++k) {
    const BeamProfile& s = slices[k];
    const BeamProfile& below = slices[k - 1];
    const BeamProfile& above = slices[k + 1];
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const bool axis = nu == 2 && i == 0 && x[0] == 0.0;
      if (i == 0 && !axis) continue;
      const std::size_t lo = axis ? 1 : i - 1;
      if (!good(s, i) || !good(s, i + 1) || !good(s, lo) || !good(below, i) || !good(above, i)) {
        ++rep.points_trimmed;
        continue;
      }
      const double I = s.I[i];
      const double v = s.v[i];
      const double I_z = (above.I[i] - below.I[i]) / (2.0 * dz);
      const double v_z = (above.v[i] - below.v[i]) / (2.0 * dz);
      double I_x = 0.0;
      double v_x = 0.0;
      double geometric = 0.0;
      if (axis) {
        // Mirror symmetry: I even, v odd, v / x -> v_x.
        v_x = s.v[1] / x[1];
        geometric = I * v_x;
      } else {
        const double dx = x[i + 1] - x[i - 1];
        I_x = (s.I[i + 1] - s.I[i - 1]) / dx;
        v_x = (s.v[i + 1] - s.v[i - 1]) / dx;
        if (nu == 2) geometric = I * v / x[i];
      }
      const double r1 = v_z + v * v_x - alpha * varphi(model, I) * I_x;
      const double r2 = I_z + v * I_x + I * v_x + geometric;
      const double r = std::max(std::abs(r1), std::abs(r2));
      ++rep.points_checked;
      if (r > rep.max_abs_residual) {
        rep.max_abs_residual = r;
        rep.argmax_first = x[i];
        rep.argmax_second = s.z;
      }
    }
  }
  return rep;
}

double measure_beam_edge(const ExactSolutionParams& p, double z) {
  const double edge = beam_edge(p);
  const double x1 = edge - 2e-6;
  const double x2 = edge - 1e-6;
  const double I1 = invert_to_physical(p, x1, z).I;
  const double I2 = invert_to_physical(p, x2, z).I;
  if (!(I1 > I2)) throw DomainError("measure_beam_edge: intensity does not decrease toward the edge");
  return x2 - I2 * (x2 - x1) / (I2 - I1);
}

double energy_integral(const BeamProfile& profile) {
  double sum = 0.0;
  bool have_prev = false;
  double x_prev = 0.0, f_prev = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double x = profile.x[i];
    if (x < 0.0) continue;
    const double I = profile.flags[i] == PointFlag::OutOfSupport ? 0.0 : profile.I[i];
    if (!std::isfinite(I)) throw InputError("energy_integral: profile contains invalid points");
    const double f = profile.nu == 2 ? I * x : I;
    if (have_prev) sum += 0.5 * (f + f_prev) * (x - x_prev);
    x_prev = x;
    f_prev = f;
    have_prev = true;
  }
  return profile.nu == 1 ? 2.0 * sum : sum;
}

ProfileErrors compare_profiles(const BeamProfile& a, const BeamProfile& b, double window) {
  if (std::abs(a.z - b.z) > 1e-12 * std::max(1.0, std::abs(a.z))) {
    throw InputError("compare_profiles: profiles belong to different z");
  }
  if (b.size() < 2) throw InputError("compare_profiles: second profile needs at least two nodes");
  ProfileErrors out;
  double max_Ia = 0.0, max_va = 0.0, sum_Ia2 = 0.0, sum_va2 = 0.0;
  double max_dI = 0.0, max_dv = 0.0, sum_dI2 = 0.0, sum_dv2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.x[i];
    if (std::abs(x) > window || !std::isfinite(a.I[i]) || !std::isfinite(a.v[i])) continue;
    if (x < b.x.front() || x > b.x.back()) continue;
    auto it = std::upper_bound(b.x.begin(), b.x.end(), x);
    std::size_t j = static_cast<std::size_t>(it - b.x.begin());
    j = std::clamp<std::size_t>(j, 1, b.size() - 1);
    const double t = (x - b.x[j - 1]) / (b.x[j] - b.x[j - 1]);
    const double Ib = b.I[j - 1] + t * (b.I[j] - b.I[j - 1]);
    const double vb = b.v[j - 1] + t * (b.v[j] - b.v[j - 1]);
    if (!std::isfinite(Ib) || !std::isfinite(vb)) continue;
    ++out.points;
    max_Ia = std::max(max_Ia, std::abs(a.I[i]));
    max_va = std::max(max_va, std::abs(a.v[i]));
    sum_Ia2 += a.I[i] * a.I[i];
    sum_va2 += a.v[i] * a.v[i];
    max_dI = std::max(max_dI, std::abs(Ib - a.I[i]));
    max_dv = std::max(max_dv, std::abs(vb - a.v[i]));
    sum_dI2 += (Ib - a.I[i]) * (Ib - a.I[i]);
    sum_dv2 += (vb - a.v[i]) * (vb - a.v[i]);
  }
  // A vanishing reference (e.g. v at z = 0) falls back to absolute errors.
  out.linf_I = max_Ia > 0.0 ? max_dI / max_Ia : max_dI;
  out.l2_I = sum_Ia2 > 0.0 ? std::sqrt(sum_dI2 / sum_Ia2) : std::sqrt(sum_dI2);
  out.linf_v = max_va > 0.0 ? max_dv / max_va : max_dv;
  out.l2_v = sum_va2 > 0.0 ? std::sqrt(sum_dv2 / sum_va2) : std::sqrt(sum_dv2);
  return out;
}

}  // namespace collapse_kit
