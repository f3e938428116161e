#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "neurohome/dsp.hpp"

// Signal file format: UTF-8 text, first line `# fs=<integer> channel=<label>`,
// then one decimal amplitude per line.
namespace neurohome::io {

dsp::SignalWindow parse_signal(std::istream& in);
void write_signal(std::ostream& out, const dsp::SignalWindow& w);

dsp::SignalWindow load_signal(const std::filesystem::path& path);
void save_signal(const std::filesystem::path& path, const dsp::SignalWindow& w);

}  // namespace neurohome::io
