#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "collapse_kit/cli/config.hpp"
#include "collapse_kit/cli/emit.hpp"
#include "collapse_kit/cli/run.hpp"

using namespace collapse_kit;
using namespace collapse_kit::cli;

namespace {

RunConfig parsed(std::vector<const char*> args) {
  args.insert(args.begin(), "collapse-kit");
  RunConfig cfg;
  REQUIRE_FALSE(parse_args(static_cast<int>(args.size()), args.data(), cfg).has_value());
  return cfg;
}

}  // namespace

TEST_CASE("sweep ranges") {
  const SweepRange r = parse_sweep_range("gamma=0.1:0.5:5");
  CHECK(r.parameter == "gamma");
  CHECK(r.start == 0.1);
  CHECK(r.stop == 0.5);
  CHECK(r.n == 5);
  CHECK(parse_sweep_range("K=4:8:3").n == 3);
  CHECK_THROWS_AS(parse_sweep_range("gamma=0.1:0.5"), UsageError);
  CHECK_THROWS_AS(parse_sweep_range("delta=0:1:2"), UsageError);
  CHECK_THROWS_AS(parse_sweep_range("alpha=0:1:0"), UsageError);
  CHECK_THROWS_AS(parse_sweep_range("K=4:7.5:3"), UsageError);
  CHECK_THROWS_AS(parse_sweep_range("alpha=a:1:2"), UsageError);
}

TEST_CASE("flag parsing") {
  const RunConfig cfg = parsed({"profile", "--solver", "approx2d", "--z", "1,2.5", "--gamma", "0.2"});
  CHECK(cfg.command == Command::Profile);
  CHECK(cfg.solver == Solver::Approx2D);
  CHECK(cfg.z_list == std::vector<double>{1.0, 2.5});
  CHECK(cfg.gamma == 0.2);

  std::vector<const char*> bad{"collapse-kit", "nonsense"};
  RunConfig out;
  CHECK(parse_args(2, bad.data(), out) == 2);
}

TEST_CASE("resolution fills defaults") {
  RunConfig a = parsed({"classify", "--gamma", "0.1"});
  resolve(a);
  CHECK(a.solver == Solver::Approx2D);
  CHECK(a.model == ModelChoice::KerrMPI);
  CHECK(a.profile == ProfileChoice::Gaussian);
  CHECK(a.format == Format::Json);

  RunConfig b = parsed({"profile", "--solver", "exact1d", "--z", "0.1"});
  resolve(b);
  CHECK(b.model == ModelChoice::Saturated);
  CHECK(b.profile == ProfileChoice::SaturatedBoundary);
  CHECK(b.format == Format::Csv);
  CHECK(b.output == "profile");

  RunConfig c = parsed({"zsf", "--solver", "exact1d"});
  resolve(c);
  CHECK(c.format == Format::Text);
}

TEST_CASE("incompatible options are usage errors") {
  const std::vector<std::vector<const char*>> cases{
      {"profile", "--z", "1"},
      {"classify", "--solver", "exact1d"},
      {"profile", "--solver", "exact1d", "--model", "kerr", "--z", "1"},
      {"profile", "--solver", "reference", "--z", "1"},
      {"zsf", "--solver", "reference", "--beta", "0.001"},
      {"profile", "--solver", "approx2d"},
      {"profile", "--solver", "approx2d", "--z", "1", "--alpha", "-1"},
      {"sweep"},
      {"classify", "--sweep", "gamma=0:1:2"},
      {"validate", "--battery", "everything"},
      {"onaxis", "--solver", "approx2d", "--z", "1", "--format", "text"},
  };
  for (const auto& args : cases) {
    RunConfig cfg = parsed(args);
    INFO(args.front() << " " << args.size());
    CHECK_THROWS_AS(resolve(cfg), UsageError);
  }
}

TEST_CASE("number and file name formatting") {
  CHECK(csv_number(1.0) == "1.00000000000e+00");
  CHECK(csv_number(-0.000123456789012345) == "-1.23456789012e-04");
  CHECK(csv_number(std::nan("")) == "nan");
  CHECK(profile_filename("out", 0.5) == "out_z0.5.csv");
  CHECK(profile_filename("out", 2.0) == "out_z2.csv");

  BeamProfile p;
  p.push(0.0, 1.0, 0.0);
  std::ostringstream os;
  write_profile_csv(os, p);
  CHECK(os.str() == "x,I,v\n0.00000000000e+00,1.00000000000e+00,0.00000000000e+00\n");
}

TEST_CASE("worker count honours the thread cap") {
  CHECK(worker_count(1) == 1);
#ifndef _WIN32
  setenv("COLLAPSE_KIT_THREADS", "2", 1);
  CHECK(worker_count(100) <= 2);
  unsetenv("COLLAPSE_KIT_THREADS");
#endif
  CHECK(worker_count(100) >= 1);
}

TEST_CASE("run produces parseable results") {
  std::ostringstream out, err;
  CHECK(run(parsed({"zsf", "--solver", "exact1d", "--alpha", "3"}), out, err) == kExitOk);
  CHECK(out.str().rfind("exact1d z_sf ", 0) == 0);

  std::ostringstream js;
  CHECK(run(parsed({"classify", "--gamma", "0.6", "--K", "8", "--alpha", "0.01", "--beta", "0.001"}), js, err) ==
        kExitOk);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["report"]["regime"] == "RingFirst");
  CHECK(doc["report"]["first_singularity"]["x"].get<double>() > 0.0);

  std::ostringstream bad;
  CHECK(run(parsed({"profile", "--solver", "approx2d"}), bad, err) == kExitUsage);
}
