#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "neurohome/synth.hpp"

// Scenario text format: `key = value` lines, '#' comments, and repeated
// [gaze], [blink] and [beacon] stanzas. See README for the full schema.
namespace neurohome::io {

synth::Scenario parse_scenario(std::istream& in);
std::string format_scenario(const synth::Scenario& sc);

synth::Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const synth::Scenario& sc);

}  // namespace neurohome::io
