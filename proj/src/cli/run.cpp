#include "collapse_kit/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <thread>

#include "collapse_kit/cli/emit.hpp"
#include "collapse_kit/eikonal_approx_1d.hpp"
#include "collapse_kit/hodograph_exact.hpp"
#include "collapse_kit/nlse_approx_2d.hpp"
#include "collapse_kit/reference_nlse.hpp"
#include "collapse_kit/s_function.hpp"
#include "collapse_kit/validation.hpp"

namespace collapse_kit::cli {

using nlohmann::json;

namespace {

ExactSolutionParams exact_params(const RunConfig& cfg) { return {cfg.alpha, cfg.b}; }

bool closed_form_1d(const RunConfig& cfg) {
  return cfg.model == ModelChoice::Saturated && cfg.profile == ProfileChoice::SaturatedBoundary;
}

ReferenceConfig reference_config(const RunConfig& cfg) {
  ReferenceConfig rc;
  rc.nodes = cfg.reference_nodes;
  rc.r_max = cfg.reference_r_max;
  return rc;
}

// Reference snapshot resampled onto x by linear interpolation (zero beyond r_max).
BeamProfile resample(const BeamProfile& src, const std::vector<double>& xs) {
  BeamProfile out;
  out.z = src.z;
  out.nu = src.nu;
  for (double x : xs) {
    const double r = std::abs(x);
    if (r >= src.x.back()) {
      out.push(x, 0.0, 0.0, PointFlag::OutOfSupport);
      continue;
    }
    const auto it = std::upper_bound(src.x.begin(), src.x.end(), r);
    const std::size_t j = static_cast<std::size_t>(it - src.x.begin());
    const double t = (r - src.x[j - 1]) / (src.x[j] - src.x[j - 1]);
    const double I = src.I[j - 1] + t * (src.I[j] - src.I[j - 1]);
    double v = src.v[j - 1] + t * (src.v[j] - src.v[j - 1]);
    if (x < 0.0) v = -v;
    out.push(x, I, v, src.flags[j - 1] == PointFlag::Ok ? PointFlag::Ok : PointFlag::OutOfSupport);
  }
  return out;
}

json model_json(const RunConfig& cfg) {
  json m{{"model", to_string(cfg.model)}, {"alpha", cfg.alpha}, {"beta", cfg.beta}};
  if (cfg.model == ModelChoice::Saturated) m["b"] = cfg.b;
  if (cfg.model == ModelChoice::KerrMPI) {
    m["gamma"] = cfg.gamma;
    m["K"] = cfg.K;
  }
  if (cfg.model == ModelChoice::Tabulated) m["table"] = cfg.table;
  m["profile"] = to_string(cfg.profile);
  return m;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- profile

std::vector<BeamProfile> compute_profiles(const RunConfig& cfg) {
  const auto model = make_model(cfg);
  const auto profile = make_profile(cfg, model);
  const auto xs = linspace(cfg.x_min, cfg.x_max, cfg.nx);
  std::vector<BeamProfile> out;
  switch (*cfg.solver) {
    case Solver::Exact1D:
      for (double z : cfg.z_list) out.push_back(profile_at(exact_params(cfg), z, xs));
      break;
    case Solver::Approx1D:
      for (double z : cfg.z_list) {
        out.push_back(closed_form_1d(cfg) ? profile_at_approx(exact_params(cfg), z, xs)
                                          : profile_at_generic(model, profile, z, xs));
      }
      break;
    case Solver::Approx2D: {
      const SFunction S = build_s_function(model, profile);
      for (double z : cfg.z_list) out.push_back(profile_at_2d(S, profile, z, xs));
      break;
    }
    case Solver::Reference: {
      ReferenceConfig rc = reference_config(cfg);
      rc.snapshots = cfg.z_list;
      const double z_end = *std::max_element(cfg.z_list.begin(), cfg.z_list.end());
      const ReferenceRun run = nlse_reference(model, profile, z_end, rc);
      for (double z : cfg.z_list) {
        const auto it = std::find_if(run.snapshots.begin(), run.snapshots.end(),
                                     [z](const BeamProfile& s) { return s.z == z; });
        out.push_back(resample(*it, xs));
      }
      break;
    }
  }
  return out;
}

int cmd_profile(const RunConfig& cfg, std::ostream& out) {
  const auto profiles = compute_profiles(cfg);
  if (cfg.format == Format::Csv) {
    for (const auto& p : profiles) {
      std::ostringstream os;
      write_profile_csv(os, p);
      const std::string path = profile_filename(cfg.output, p.z);
      write_output(path, os.str(), out);
      out << path << '\n';
    }
    return kExitOk;
  }
  json arr = json::array();
  for (const auto& p : profiles) arr.push_back(to_json(p));
  write_output(cfg.output,
               dump({{"command", "profile"}, {"solver", to_string(*cfg.solver)}, {"model", model_json(cfg)},
                     {"profiles", arr}}),
               out);
  return kExitOk;
}

// ---------------------------------------------------------------- onaxis

int cmd_onaxis(const RunConfig& cfg, std::ostream& out) {
  const auto model = make_model(cfg);
  const auto profile = make_profile(cfg, model);
  std::vector<double> values;
  switch (*cfg.solver) {
    case Solver::Exact1D:
      for (double z : cfg.z_list) values.push_back(on_axis_intensity(exact_params(cfg), z));
      break;
    case Solver::Approx1D:
      for (double z : cfg.z_list) {
        values.push_back(closed_form_1d(cfg) ? on_axis_approx(exact_params(cfg), z)
                                             : solve_generic(model, profile, 0.0, z).I);
      }
      break;
    case Solver::Approx2D: {
      const SFunction S = build_s_function(model, profile);
      for (double z : cfg.z_list) values.push_back(field_at(S, profile, 0.0, z).I);
      break;
    }
    case Solver::Reference: {
      ReferenceConfig rc = reference_config(cfg);
      rc.snapshots = cfg.z_list;
      const ReferenceRun run =
          nlse_reference(model, profile, *std::max_element(cfg.z_list.begin(), cfg.z_list.end()), rc);
      for (double z : cfg.z_list) {
        for (const auto& s : run.snapshots) {
          if (s.z == z) {
            values.push_back(s.I[0]);
            break;
          }
        }
      }
      break;
    }
  }
  if (cfg.format == Format::Csv) {
    std::ostringstream os;
    os << "z,I\n";
    for (std::size_t i = 0; i < values.size(); ++i) os << csv_number(cfg.z_list[i]) << ',' << csv_number(values[i]) << '\n';
    write_output(cfg.output, os.str(), out);
    return kExitOk;
  }
  json pts = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) pts.push_back({{"z", cfg.z_list[i]}, {"I", values[i]}});
  write_output(cfg.output,
               dump({{"command", "onaxis"}, {"solver", to_string(*cfg.solver)}, {"model", model_json(cfg)},
                     {"points", pts}}),
               out);
  return kExitOk;
}

// ---------------------------------------------------------------- zsf

int cmd_zsf(const RunConfig& cfg, std::ostream& out) {
  struct Entry {
    std::string method;
    double z;
    std::optional<double> x;
  };
  std::vector<Entry> entries;
  std::string regime;
  switch (*cfg.solver) {
    case Solver::Exact1D:
      entries.push_back({"exact1d", z_self_focus(exact_params(cfg)), 0.0});
      break;
    case Solver::Approx1D:
      entries.push_back({"approx1d", z_self_focus_approx(exact_params(cfg)), 0.0});
      break;
    case Solver::Approx2D: {
      const auto model = make_model(cfg);
      const auto profile = make_profile(cfg, model);
      const CollapseReport rep = classify_collapse(build_s_function(model, profile));
      regime = to_string(rep.regime);
      if (rep.z_axis) entries.push_back({"approx2d-axis", *rep.z_axis, 0.0});
      for (const auto& e : rep.ring_events) entries.push_back({"approx2d-ring", e.z_ring, e.x_ring});
      break;
    }
    case Solver::Reference:
      throw UsageError("zsf is not available for the reference solver");
  }
  if (cfg.format == Format::Text) {
    std::string text;
    if (!regime.empty()) text += fmt::format("regime {}\n", regime);
    for (const auto& e : entries) {
      text += fmt::format("{} z_sf {:.8g}", e.method, e.z);
      if (e.x && *e.x != 0.0) text += fmt::format(" x {:.8g}", *e.x);
      text += '\n';
    }
    if (entries.empty()) text += "no collapse\n";
    write_output(cfg.output, text, out);
    return kExitOk;
  }
  json arr = json::array();
  for (const auto& e : entries) arr.push_back({{"method", e.method}, {"z", e.z}, {"x", e.x.value_or(0.0)}});
  json doc{{"command", "zsf"}, {"solver", to_string(*cfg.solver)}, {"model", model_json(cfg)}, {"values", arr}};
  if (!regime.empty()) doc["regime"] = regime;
  write_output(cfg.output, dump(doc), out);
  return kExitOk;
}

// ---------------------------------------------------------------- classify / sweep

json classify_json(const RunConfig& cfg) {
  const auto model = make_model(cfg);
  const auto profile = make_profile(cfg, model);
  return to_json(classify_collapse(build_s_function(model, profile)));
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  write_output(cfg.output, dump({{"command", "classify"}, {"model", model_json(cfg)}, {"report", classify_json(cfg)}}),
               out);
  return kExitOk;
}

void set_parameter(RunConfig& cfg, const std::string& name, double value) {
  if (name == "alpha") cfg.alpha = value;
  if (name == "b") cfg.b = value;
  if (name == "beta") cfg.beta = value;
  if (name == "gamma") cfg.gamma = value;
  if (name == "K") cfg.K = static_cast<int>(std::lround(value));
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::vector<double>> axes;
  std::size_t total = 1;
  for (const auto& r : cfg.sweep) {
    axes.push_back(linspace(r.start, r.stop, r.n));
    total *= axes.back().size();
  }
  struct Row {
    std::vector<double> values;
    json report;
    std::string error;
  };
  std::vector<Row> rows(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    rows[i].values.resize(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      rows[i].values[k] = axes[k][rest % axes[k].size()];
      rest /= axes[k].size();
    }
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      RunConfig c = cfg;
      for (std::size_t k = 0; k < axes.size(); ++k) set_parameter(c, cfg.sweep[k].parameter, rows[i].values[k]);
      if (cfg.model == ModelChoice::Kerr || cfg.model == ModelChoice::KerrMPI) {
        c.model = c.gamma != 0.0 ? ModelChoice::KerrMPI : ModelChoice::Kerr;
      }
      try {
        rows[i].report = classify_json(c);
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_workers = worker_count(total);
  for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (cfg.format == Format::Csv) {
    std::ostringstream os;
    for (const auto& r : cfg.sweep) os << r.parameter << ',';
    os << "regime,z_axis,first_x,first_z,ring_events,error\n";
    for (const auto& row : rows) {
      for (double v : row.values) os << csv_number(v) << ',';
      if (row.error.empty()) {
        const json& rep = row.report;
        const auto num = [](const json& j) { return j.is_null() ? std::string() : csv_number(j.get<double>()); };
        const json& first = rep["first_singularity"];
        os << rep["regime"].get<std::string>() << ',' << num(rep["z_axis"]) << ','
           << (first.is_null() ? std::string() : csv_number(first["x"].get<double>())) << ','
           << (first.is_null() ? std::string() : csv_number(first["z"].get<double>())) << ','
           << rep["ring_events"].size() << ",\n";
      } else {
        std::string quoted = row.error;
        std::size_t pos = 0;
        while ((pos = quoted.find('"', pos)) != std::string::npos) {
          quoted.insert(pos, 1, '"');
          pos += 2;
        }
        os << ",,,,,\"" << quoted << "\"\n";
      }
    }
    write_output(cfg.output, os.str(), out);
  } else {
    json params = json::array();
    for (const auto& r : cfg.sweep) params.push_back(r.parameter);
    json arr = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      json p = json::object();
      for (std::size_t k = 0; k < cfg.sweep.size(); ++k) p[cfg.sweep[k].parameter] = rows[i].values[k];
      arr.push_back({{"index", i},
                     {"params", p},
                     {"report", rows[i].error.empty() ? rows[i].report : json(nullptr)},
                     {"error", rows[i].error.empty() ? json(nullptr) : json(rows[i].error)}});
    }
    write_output(cfg.output,
                 dump({{"command", "sweep"}, {"model", model_json(cfg)}, {"parameters", params}, {"rows", arr}}),
                 out);
  }
  const bool any_error = std::any_of(rows.begin(), rows.end(), [](const Row& r) { return !r.error.empty(); });
  return any_error ? kExitNumerical : kExitOk;
}

// ---------------------------------------------------------------- validate

struct Check {
  std::string name;
  double value;
  double lo;
  double hi;
};

json check_json(const Check& c) {
  const bool pass = c.value >= c.lo && c.value <= c.hi;
  json j{{"name", c.name}, {"value", c.value}, {"passed", pass}};
  j["min"] = std::isfinite(c.lo) ? json(c.lo) : json(nullptr);
  j["max"] = std::isfinite(c.hi) ? json(c.hi) : json(nullptr);
  return j;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

void battery_hodograph(std::vector<Check>& checks, json& reports) {
  const ExactSolutionParams p{3.0, 1.0};
  const HodographResiduals r = residual_hodograph(p);
  reports.push_back(to_json(r.bvp));
  reports.push_back(to_json(r.second_order));
  checks.push_back({"hodograph.bvp_max_residual", r.bvp.max_abs_residual, 0.0, 1e-7});
  checks.push_back({"hodograph.second_order_max_residual", r.second_order.max_abs_residual, 0.0, 1e-6});
  HodographGrid control;
  control.psi_scale = 1.01;
  const HodographResiduals c = residual_hodograph(p, control);
  checks.push_back({"hodograph.perturbed_psi_control", c.bvp.max_abs_residual, 1e-3, kInf});
  HodographGrid coarse, fine;
  coarse.step = 1e-4;
  fine.step = 5e-5;
  const HodographResiduals a = residual_hodograph(p, coarse);
  const HodographResiduals b = residual_hodograph(p, fine);
  checks.push_back({"hodograph.bvp_convergence_ratio", a.bvp.max_abs_residual / b.bvp.max_abs_residual, 3.0, 5.0});
  checks.push_back({"hodograph.second_order_convergence_ratio",
                    a.second_order.max_abs_residual / b.second_order.max_abs_residual, 3.0, 5.0});
}

void battery_energy(std::vector<Check>& checks) {
  const ExactSolutionParams p{3.0, 1.0};
  const double zs = z_self_focus(p);
  const double edge = beam_edge(p);
  double worst_edge = 0.0;
  for (double f : {0.0, 0.3, 0.6}) worst_edge = std::max(worst_edge, std::abs(measure_beam_edge(p, f * zs) - edge));
  checks.push_back({"energy.edge_deviation", worst_edge, 0.0, 1e-10});
  const auto xs = linspace(0.0, edge, 4001);
  const double e0 = energy_integral(profile_at(p, 0.0, xs));
  double worst = 0.0;
  for (double f : {0.3, 0.6, 0.9}) worst = std::max(worst, std::abs(energy_integral(profile_at(p, f * zs, xs)) - e0) / e0);
  checks.push_back({"energy.relative_drift", worst, 0.0, 1e-4});
}

void battery_eikonal(std::vector<Check>& checks, json& reports) {
  const ExactSolutionParams p{3.0, 1.0};
  const auto model = NonlinearityModel::saturated_exp(p.alpha, p.b);
  const double zs = z_self_focus(p);
  const auto xs = linspace(-2.0, 2.0, 4001);
  double worst = 0.0;
  for (double f : {0.1, 0.25, 0.5}) {
    std::vector<BeamProfile> slices;
    for (int k = -1; k <= 1; ++k) slices.push_back(profile_at(p, f * zs + k * 1e-3, xs));
    const ResidualReport r = residual_eikonal(slices, model, 1);
    reports.push_back(to_json(r));
    worst = std::max(worst, r.max_abs_residual);
  }
  checks.push_back({"eikonal.exact_1d_max_residual", worst, 0.0, 1e-4});
  // Approximate radial solution in the geometric-optics limit: first order in alpha.
  double res[2] = {0.0, 0.0};
  const double alphas[2] = {0.01, 0.005};
  const auto rs = linspace(0.0, 2.0, 2001);
  for (int i = 0; i < 2; ++i) {
    const auto m = NonlinearityModel::kerr_mpi(alphas[i], 0.0, 0.1, 6);
    const auto profile = InitialProfile::gaussian();
    const SFunction S = build_s_function(m, profile);
    std::vector<BeamProfile> slices;
    for (int k = -1; k <= 1; ++k) slices.push_back(profile_at_2d(S, profile, 2.0 + k * 1e-3, rs));
    const ResidualReport r = residual_eikonal(slices, m, 2);
    reports.push_back(to_json(r));
    res[i] = r.max_abs_residual;
  }
  checks.push_back({"eikonal.approx_2d_residual_over_alpha_squared", res[0] / (alphas[0] * alphas[0]), 0.0, 20.0});
  checks.push_back({"eikonal.approx_2d_alpha_halving_ratio", res[0] / res[1], 3.0, 5.0});
}

void battery_reference(const RunConfig& cfg, std::vector<Check>& checks) {
  const auto model = NonlinearityModel::kerr_mpi(0.01, 0.001, 0.1, 6);
  const auto gaussian = InitialProfile::gaussian();
  ReferenceConfig rc = reference_config(cfg);
  rc.linear = true;
  rc.snapshots = {1.0, 2.0, 3.0, 4.0, 5.0};
  const ReferenceRun lin = nlse_reference(model, gaussian, 5.0, rc);
  double worst = 0.0, drift = 0.0;
  const double eps2 = 2.0 * model.beta();
  for (std::size_t i = 0; i < lin.snapshots.size(); ++i) {
    const double z = lin.snapshots[i].z;
    const double exact = 1.0 / (1.0 + eps2 * z * z);
    worst = std::max(worst, std::abs(lin.snapshots[i].I[0] - exact) / exact);
    drift = std::max(drift, lin.power_drift_rate[i]);
  }
  checks.push_back({"reference.linear_law_relative_error", worst, 0.0, 1e-6});
  checks.push_back({"reference.linear_power_drift_per_z", drift, 0.0, 1e-6});

  rc.linear = false;
  rc.snapshots = {1.0, 2.0, 3.0, 4.0};
  const ReferenceRun run = nlse_reference(model, gaussian, 4.0, rc);
  const SFunction S = build_s_function(model, gaussian);
  const auto xs = linspace(0.0, 2.0, 401);
  double axis = 0.0, linf = 0.0;
  drift = 0.0;
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const BeamProfile& ref = run.snapshots[i];
    const BeamProfile approx = profile_at_2d(S, gaussian, ref.z, xs);
    axis = std::max(axis, std::abs(ref.I[0] - approx.I[0]) / approx.I[0]);
    linf = std::max(linf, compare_profiles(approx, ref).linf_I);
    drift = std::max(drift, run.power_drift_rate[i]);
  }
  checks.push_back({"reference.case1_on_axis_relative_difference", axis, 0.0, 0.05});
  checks.push_back({"reference.case1_linf_intensity_difference", linf, 0.0, 0.08});
  checks.push_back({"reference.nonlinear_power_drift_per_z", drift, 0.0, 1e-6});
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto wants = [&](const std::string& name) {
    return cfg.battery.empty() || std::find(cfg.battery.begin(), cfg.battery.end(), name) != cfg.battery.end();
  };
  std::vector<Check> checks;
  json reports = json::array();
  if (wants("hodograph")) battery_hodograph(checks, reports);
  if (wants("energy")) battery_energy(checks);
  if (wants("eikonal")) battery_eikonal(checks, reports);
  if (wants("reference")) battery_reference(cfg, checks);
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back(check_json(c));
    if (!arr.back()["passed"].get<bool>()) {
      all = false;
      err << "threshold failed: " << c.name << " = " << fmt::format("{:.6e}", c.value) << '\n';
    }
  }
  write_output(cfg.output,
               dump({{"command", "validate"}, {"passed", all}, {"checks", arr}, {"residual_reports", reports}}), out);
  return all ? kExitOk : kExitThreshold;
}

}  // namespace

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COLLAPSE_KIT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

int run(RunConfig cfg, std::ostream& out, std::ostream& err) {
  try {
    resolve(cfg);
    switch (cfg.command) {
      case Command::Profile:
        return cmd_profile(cfg, out);
      case Command::OnAxis:
        return cmd_onaxis(cfg, out);
      case Command::Zsf:
        return cmd_zsf(cfg, out);
      case Command::Classify:
        return cmd_classify(cfg, out);
      case Command::Sweep:
        return cmd_sweep(cfg, out);
      case Command::Validate:
        return cmd_validate(cfg, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitNumerical;
}

}  // namespace collapse_kit::cli
