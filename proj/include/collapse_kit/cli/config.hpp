#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "collapse_kit/initial_profile.hpp"
#include "collapse_kit/nonlinearity.hpp"

namespace collapse_kit::cli {

/// Invalid configuration; the tool exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Profile, OnAxis, Zsf, Classify, Sweep, Validate };
enum class Solver { Exact1D, Approx1D, Approx2D, Reference };
enum class ModelChoice { Auto, Saturated, Kerr, KerrMPI, Tabulated };
enum class ProfileChoice { Auto, Gaussian, SaturatedBoundary, PhiLower };
enum class Format { Auto, Csv, Json, Text };

std::string to_string(Command c);
std::string to_string(Solver s);
std::string to_string(ModelChoice m);
std::string to_string(ProfileChoice p);
std::string to_string(Format f);

struct SweepRange {
  std::string parameter;  // alpha, b, beta, gamma or K
  double start = 0.0;
  double stop = 0.0;
  int n = 1;
};

/// Parses "name=start:stop:n".
SweepRange parse_sweep_range(const std::string& text);

struct RunConfig {
  Command command = Command::Classify;
  std::optional<Solver> solver;
  ModelChoice model = ModelChoice::Auto;
  double alpha = 1.0;
  double b = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
  int K = 6;
  std::string table;
  ProfileChoice profile = ProfileChoice::Auto;
  std::vector<double> z_list;
  double x_min = 0.0;
  double x_max = 3.0;
  int nx = 301;
  std::vector<SweepRange> sweep;
  std::string output;
  Format format = Format::Auto;
  /// validate: subset of {hodograph, eikonal, energy, reference}; empty means all.
  std::vector<std::string> battery;
  int reference_nodes = 4000;
  double reference_r_max = 8.0;
};

/// Parses flags and an optional key=value file given by --config (flags win).
/// Returns the exit status to use immediately (help, usage error) or nullopt
/// when `out` holds a parsed configuration.
std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& out);

/// Fills Auto choices and checks solver/command/model compatibility.
/// Throws UsageError.
void resolve(RunConfig& cfg);

NonlinearityModel make_model(const RunConfig& cfg);
InitialProfile make_profile(const RunConfig& cfg, const NonlinearityModel& model);

}  // namespace collapse_kit::cli
