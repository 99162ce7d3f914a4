#include "collapse_kit/cli/emit.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>

#include "collapse_kit/errors.hpp"

namespace collapse_kit::cli {

using nlohmann::json;

namespace {

json number_or_null(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

json point(const std::optional<SingularityPoint>& p) {
  if (!p) return nullptr;
  return json{{"x", p->x}, {"z", p->z}};
}

}  // namespace

std::string csv_number(double value) {
  if (!std::isfinite(value)) return "nan";
  return fmt::format("{:.11e}", value);
}

std::string profile_filename(const std::string& stem, double z) { return fmt::format("{}_z{}.csv", stem, z); }

void write_profile_csv(std::ostream& os, const BeamProfile& profile) {
  os << "x,I,v\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    os << csv_number(profile.x[i]) << ',' << csv_number(profile.I[i]) << ',' << csv_number(profile.v[i]) << '\n';
  }
}

json to_json(const BeamProfile& profile) {
  json x = json::array(), I = json::array(), v = json::array(), flags = json::array();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    x.push_back(profile.x[i]);
    I.push_back(number_or_null(profile.I[i]));
    v.push_back(number_or_null(profile.v[i]));
    flags.push_back(to_string(profile.flags[i]));
  }
  return {{"z", profile.z}, {"nu", profile.nu}, {"x", x}, {"I", I}, {"v", v}, {"flags", flags}};
}

json to_json(const CollapseReport& report) {
  json candidates = json::array();
  for (const auto& c : report.candidates) {
    candidates.push_back({{"eta_cr", c.eta_cr},
                          {"fold_coefficient", c.fold_coefficient},
                          {"local_minimum", c.local_minimum},
                          {"residual", c.residual},
                          {"bracket", {c.bracket_lo, c.bracket_hi}},
                          {"singularity_corrected", point(c.corrected)},
                          {"singularity_uncorrected", point(c.printed)}});
  }
  json events = json::array();
  for (const auto& e : report.ring_events) events.push_back({{"eta_cr", e.eta_cr}, {"x", e.x_ring}, {"z", e.z_ring}});
  return {{"regime", to_string(report.regime)},
          {"z_axis", report.z_axis ? json(*report.z_axis) : json(nullptr)},
          {"first_singularity", point(report.first_singularity)},
          {"ring_candidates", candidates},
          {"ring_events", events},
          {"diagnostics",
           {{"s_eta_at_axis", report.diagnostics.s_eta_at_axis},
            {"eta_max", report.diagnostics.eta_max},
            {"scan_nodes", report.diagnostics.scan_nodes},
            {"provenance", report.diagnostics.provenance}}}};
}

json to_json(const ResidualReport& r) {
  auto axis = [](const Axis& a) { return json{{"lo", a.lo}, {"hi", a.hi}, {"n", a.n}}; };
  return {{"equation", to_string(r.equation)},
          {"grid", {{"first", axis(r.first)}, {"second", axis(r.second)}, {"step", r.step}}},
          {"max_abs_residual", r.max_abs_residual},
          {"argmax", {r.argmax_first, r.argmax_second}},
          {"points_checked", r.points_checked},
          {"points_trimmed", r.points_trimmed}};
}

void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw InputError("failed writing '" + path + "'");
}

}  // namespace collapse_kit::cli
