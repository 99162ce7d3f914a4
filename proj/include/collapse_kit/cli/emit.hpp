#pragma once

#include <json.hpp>
#include <ostream>
#include <string>

#include "collapse_kit/beam_profile.hpp"
#include "collapse_kit/nlse_approx_2d.hpp"
#include "collapse_kit/validation.hpp"

namespace collapse_kit::cli {

/// Scientific notation with 12 significant digits; "nan" for non-finite values.
std::string csv_number(double value);

/// `<stem>_z<value>.csv` with the shortest round-trip form of z.
std::string profile_filename(const std::string& stem, double z);

/// Header `x,I,v`, one row per node.
void write_profile_csv(std::ostream& os, const BeamProfile& profile);

nlohmann::json to_json(const BeamProfile& profile);
nlohmann::json to_json(const CollapseReport& report);
nlohmann::json to_json(const ResidualReport& report);

/// Writes `text` to `path`, or to `fallback` when the path is empty.
void write_output(const std::string& path, const std::string& text, std::ostream& fallback);

}  // namespace collapse_kit::cli
