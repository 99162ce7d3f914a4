#include "collapse_kit/cli/config.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

namespace collapse_kit::cli {

namespace {

const std::map<std::string, Command> kCommands{{"profile", Command::Profile},   {"onaxis", Command::OnAxis},
                                               {"zsf", Command::Zsf},           {"classify", Command::Classify},
                                               {"sweep", Command::Sweep},       {"validate", Command::Validate}};
const std::map<std::string, Solver> kSolvers{{"exact1d", Solver::Exact1D},
                                             {"approx1d", Solver::Approx1D},
                                             {"approx2d", Solver::Approx2D},
                                             {"reference", Solver::Reference}};
const std::map<std::string, ModelChoice> kModels{{"auto", ModelChoice::Auto},
                                                 {"saturated", ModelChoice::Saturated},
                                                 {"kerr", ModelChoice::Kerr},
                                                 {"kerr-mpi", ModelChoice::KerrMPI},
                                                 {"tabulated", ModelChoice::Tabulated}};
const std::map<std::string, ProfileChoice> kProfiles{{"auto", ProfileChoice::Auto},
                                                     {"gaussian", ProfileChoice::Gaussian},
                                                     {"saturated-boundary", ProfileChoice::SaturatedBoundary},
                                                     {"phi-lower", ProfileChoice::PhiLower}};
const std::map<std::string, Format> kFormats{
    {"auto", Format::Auto}, {"csv", Format::Csv}, {"json", Format::Json}, {"text", Format::Text}};

template <class E>
std::string name_of(const std::map<std::string, E>& table, E value) {
  for (const auto& [k, v] : table) {
    if (v == value) return k;
  }
  return "unknown";
}

bool is_1d(Solver s) { return s == Solver::Exact1D || s == Solver::Approx1D; }

}  // namespace

std::string to_string(Command c) { return name_of(kCommands, c); }
std::string to_string(Solver s) { return name_of(kSolvers, s); }
std::string to_string(ModelChoice m) { return name_of(kModels, m); }
std::string to_string(ProfileChoice p) { return name_of(kProfiles, p); }
std::string to_string(Format f) { return name_of(kFormats, f); }

SweepRange parse_sweep_range(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("sweep range must look like name=start:stop:n, got '" + text + "'");
  SweepRange r;
  r.parameter = text.substr(0, eq);
  if (r.parameter != "alpha" && r.parameter != "b" && r.parameter != "beta" && r.parameter != "gamma" &&
      r.parameter != "K") {
    throw UsageError("sweep parameter must be one of alpha, b, beta, gamma, K; got '" + r.parameter + "'");
  }
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : rest.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("sweep range must look like name=start:stop:n, got '" + text + "'");
  try {
    std::size_t used = 0;
    const std::string a = rest.substr(0, c1), b = rest.substr(c1 + 1, c2 - c1 - 1), n = rest.substr(c2 + 1);
    r.start = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    r.stop = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    r.n = std::stoi(n, &used);
    if (used != n.size()) throw std::invalid_argument(n);
  } catch (const std::logic_error&) {
    throw UsageError("malformed sweep range '" + text + "'");
  }
  if (r.n < 1) throw UsageError("sweep range '" + text + "' needs n >= 1");
  if (r.parameter == "K" && (r.start != std::floor(r.start) || r.stop != std::floor(r.stop))) {
    throw UsageError("sweep over K needs integer endpoints");
  }
  return r;
}

std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& out) {
  CLI::App app{"Beam self-focusing solutions, collapse classification and certification checks", "collapse-kit"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  RunConfig cfg;
  std::optional<Solver> solver;
  std::vector<std::string> sweep;

  app.add_option("command", cfg.command, "profile | onaxis | zsf | classify | sweep | validate")
      ->required()
      ->transform(CLI::CheckedTransformer(kCommands));
  app.add_option("--solver", solver, "exact1d | approx1d | approx2d | reference")
      ->transform(CLI::CheckedTransformer(kSolvers));
  app.add_option("--model", cfg.model, "auto | saturated | kerr | kerr-mpi | tabulated")
      ->transform(CLI::CheckedTransformer(kModels));
  app.add_option("--alpha", cfg.alpha, "nonlinear coupling");
  app.add_option("--b", cfg.b, "saturation parameter");
  app.add_option("--beta", cfg.beta, "diffraction coefficient");
  app.add_option("--gamma", cfg.gamma, "multiphoton ionization strength");
  app.add_option("--K", cfg.K, "photon order");
  app.add_option("--table", cfg.table, "two-column (I, varphi) file for the tabulated model");
  app.add_option("--profile", cfg.profile, "auto | gaussian | saturated-boundary | phi-lower")
      ->transform(CLI::CheckedTransformer(kProfiles));
  app.add_option("--z", cfg.z_list, "propagation distances (comma separated)")->delimiter(',');
  app.add_option("--x-min", cfg.x_min, "transverse grid start");
  app.add_option("--x-max", cfg.x_max, "transverse grid end");
  app.add_option("--nx", cfg.nx, "transverse grid nodes");
  app.add_option("--sweep", sweep, "parameter range name=start:stop:n (repeatable)");
  app.add_option("--output,-o", cfg.output, "output path or file stem; stdout when omitted");
  app.add_option("--format", cfg.format, "auto | csv | json | text")->transform(CLI::CheckedTransformer(kFormats));
  app.add_option("--battery", cfg.battery, "validate subset: hodograph, eikonal, energy, reference")
      ->delimiter(',');
  app.add_option("--reference-nodes", cfg.reference_nodes, "radial nodes of the reference integrator");
  app.add_option("--reference-r-max", cfg.reference_r_max, "radial extent of the reference integrator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.solver = solver;
  try {
    for (const auto& s : sweep) cfg.sweep.push_back(parse_sweep_range(s));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  out = std::move(cfg);
  return std::nullopt;
}

void resolve(RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Classify:
    case Command::Sweep:
      if (!cfg.solver) cfg.solver = Solver::Approx2D;
      if (*cfg.solver != Solver::Approx2D) {
        throw UsageError(to_string(cfg.command) + " needs --solver approx2d");
      }
      break;
    case Command::Validate:
      break;
    default:
      if (!cfg.solver) throw UsageError(to_string(cfg.command) + " needs --solver");
      break;
  }
  if (cfg.command == Command::Sweep && cfg.sweep.empty()) throw UsageError("sweep needs at least one --sweep range");
  if (cfg.command != Command::Sweep && !cfg.sweep.empty()) throw UsageError("--sweep only applies to the sweep command");

  const Solver solver = cfg.solver.value_or(Solver::Approx2D);
  if (cfg.model == ModelChoice::Auto) {
    if (is_1d(solver)) {
      cfg.model = ModelChoice::Saturated;
    } else {
      const bool sweeps_mpi = std::any_of(cfg.sweep.begin(), cfg.sweep.end(),
                                          [](const SweepRange& r) { return r.parameter == "gamma"; });
      cfg.model = cfg.gamma != 0.0 || sweeps_mpi ? ModelChoice::KerrMPI : ModelChoice::Kerr;
    }
  }
  if (cfg.model == ModelChoice::Tabulated && cfg.table.empty()) throw UsageError("tabulated model needs --table");
  if (cfg.profile == ProfileChoice::Auto) {
    if (solver == Solver::Exact1D || (solver == Solver::Approx1D && cfg.model == ModelChoice::Saturated)) {
      cfg.profile = ProfileChoice::SaturatedBoundary;
    } else if (solver == Solver::Approx1D) {
      cfg.profile = ProfileChoice::PhiLower;
    } else {
      cfg.profile = ProfileChoice::Gaussian;
    }
  }
  if (cfg.command != Command::Validate && solver == Solver::Exact1D) {
    if (cfg.model != ModelChoice::Saturated) throw UsageError("exact1d requires the saturated model");
    if (cfg.profile != ProfileChoice::SaturatedBoundary) {
      throw UsageError("exact1d requires the saturated-boundary profile");
    }
  }
  if (cfg.command != Command::Validate && solver == Solver::Reference && !(cfg.beta > 0.0)) {
    throw UsageError("the reference solver needs --beta > 0");
  }
  if (cfg.command == Command::Zsf && solver == Solver::Reference) {
    throw UsageError("zsf is not available for the reference solver");
  }
  if (cfg.command == Command::Zsf && solver == Solver::Approx1D && cfg.model != ModelChoice::Saturated) {
    throw UsageError("zsf with approx1d requires the saturated model");
  }

  if (!(cfg.alpha > 0.0)) throw UsageError("--alpha must be positive");
  if (!(cfg.b > 0.0)) throw UsageError("--b must be positive");
  if (!(cfg.beta >= 0.0)) throw UsageError("--beta must be nonnegative");
  if (!(cfg.gamma >= 0.0)) throw UsageError("--gamma must be nonnegative");
  if (cfg.K < 2) throw UsageError("--K must be at least 2");
  for (double z : cfg.z_list) {
    if (!(z >= 0.0) || !std::isfinite(z)) throw UsageError("z values must be nonnegative");
  }
  if ((cfg.command == Command::Profile || cfg.command == Command::OnAxis) && cfg.z_list.empty()) {
    throw UsageError(to_string(cfg.command) + " needs --z");
  }
  if (cfg.nx < 2 || !(cfg.x_max > cfg.x_min)) throw UsageError("x grid needs nx >= 2 and x-max > x-min");
  if (!is_1d(solver) && cfg.command == Command::Profile && cfg.x_min < 0.0) {
    throw UsageError("radial solvers need x-min >= 0");
  }
  if (cfg.reference_nodes < 16 || !(cfg.reference_r_max > 0.0)) throw UsageError("invalid reference grid");

  if (cfg.format == Format::Auto) {
    switch (cfg.command) {
      case Command::Profile:
      case Command::OnAxis:
        cfg.format = Format::Csv;
        break;
      case Command::Zsf:
        cfg.format = Format::Text;
        break;
      default:
        cfg.format = Format::Json;
        break;
    }
  }
  const bool ok_format = (cfg.format == Format::Json) ||
                         (cfg.format == Format::Csv && cfg.command != Command::Classify &&
                          cfg.command != Command::Validate && cfg.command != Command::Zsf) ||
                         (cfg.format == Format::Text && cfg.command == Command::Zsf);
  if (!ok_format) throw UsageError(to_string(cfg.format) + " output is not available for " + to_string(cfg.command));
  if (cfg.command == Command::Profile && cfg.format == Format::Csv && cfg.output.empty()) cfg.output = "profile";

  static const std::vector<std::string> batteries{"hodograph", "eikonal", "energy", "reference"};
  for (const auto& name : cfg.battery) {
    if (std::find(batteries.begin(), batteries.end(), name) == batteries.end()) {
      throw UsageError("unknown validation battery '" + name + "'");
    }
  }
}

NonlinearityModel make_model(const RunConfig& cfg) {
  switch (cfg.model) {
    case ModelChoice::Saturated:
      return NonlinearityModel::saturated_exp(cfg.alpha, cfg.b, cfg.beta);
    case ModelChoice::Kerr:
      return NonlinearityModel::kerr(cfg.alpha, cfg.beta);
    case ModelChoice::KerrMPI:
      return NonlinearityModel::kerr_mpi(cfg.alpha, cfg.beta, cfg.gamma, cfg.K);
    case ModelChoice::Tabulated:
      return NonlinearityModel::tabulated(cfg.alpha, cfg.beta, TabulatedResponse::load(cfg.table));
    case ModelChoice::Auto:
      break;
  }
  throw UsageError("model not resolved");
}

InitialProfile make_profile(const RunConfig& cfg, const NonlinearityModel& model) {
  switch (cfg.profile) {
    case ProfileChoice::Gaussian:
      return InitialProfile::gaussian();
    case ProfileChoice::SaturatedBoundary:
      return InitialProfile::saturated_boundary(cfg.b);
    case ProfileChoice::PhiLower:
      return InitialProfile::phi_lower_family(model);
    case ProfileChoice::Auto:
      break;
  }
  throw UsageError("profile not resolved");
}

}  // namespace collapse_kit::cli
