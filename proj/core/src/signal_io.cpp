#include "neurohome/signal_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "neurohome/error.hpp"
#include "neurohome/text.hpp"

namespace neurohome::text {

std::string format_decimal(double value) {
  if (!std::isfinite(value)) throw InvalidInput("format_decimal: value must be finite");
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) throw InvalidInput("format_decimal: value not representable");
  return std::string(buf, end);
}

std::optional<double> parse_decimal(std::string_view token) {
  std::size_t i = 0;
  if (i < token.size() && (token[i] == '-' || token[i] == '+')) ++i;
  const std::size_t int_start = i;
  while (i < token.size() && token[i] >= '0' && token[i] <= '9') ++i;
  const bool has_int = i > int_start;
  bool has_frac = false;
  if (i < token.size() && token[i] == '.') {
    ++i;
    const std::size_t frac_start = i;
    while (i < token.size() && token[i] >= '0' && token[i] <= '9') ++i;
    has_frac = i > frac_start;
  }
  if (i != token.size() || !(has_int || has_frac)) return std::nullopt;

  // from_chars rejects a leading '+'.
  const std::string_view digits = token.front() == '+' ? token.substr(1) : token;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

}  // namespace neurohome::text

namespace neurohome::io {

dsp::SignalWindow parse_signal(std::istream& in) {
  std::string line;
  std::size_t offset = 0;
  if (!std::getline(in, line)) throw ParseError("signal file: missing header line", 0);

  constexpr std::string_view fs_key = "# fs=";
  constexpr std::string_view ch_key = " channel=";
  if (line.rfind(fs_key, 0) != 0) throw ParseError("signal file: header must start with '# fs='", 0);
  const std::size_t ch_pos = line.find(ch_key, fs_key.size());
  if (ch_pos == std::string::npos) throw ParseError("signal file: header lacks ' channel='", fs_key.size());

  dsp::SignalWindow w;
  const std::string_view fs_token(line.data() + fs_key.size(), ch_pos - fs_key.size());
  auto [ptr, ec] = std::from_chars(fs_token.data(), fs_token.data() + fs_token.size(), w.sample_rate);
  if (ec != std::errc{} || ptr != fs_token.data() + fs_token.size() || w.sample_rate <= 0) {
    throw ParseError("signal file: fs must be a positive integer", fs_key.size());
  }
  w.channel = line.substr(ch_pos + ch_key.size());
  offset += line.size() + 1;

  while (std::getline(in, line)) {
    const auto value = text::parse_decimal(line);
    if (!value) throw ParseError("signal file: expected a decimal amplitude, got '" + line + "'", offset);
    w.samples.push_back(*value);
    offset += line.size() + 1;
  }
  return w;
}

void write_signal(std::ostream& out, const dsp::SignalWindow& w) {
  out << "# fs=" << w.sample_rate << " channel=" << w.channel << '\n';
  for (double v : w.samples) out << text::format_decimal(v) << '\n';
}

dsp::SignalWindow load_signal(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open signal file " + path.string());
  try {
    return parse_signal(in);
  } catch (const ParseError& e) {
    throw e.within(path.string());
  }
}

void save_signal(const std::filesystem::path& path, const dsp::SignalWindow& w) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write signal file " + path.string());
  write_signal(out, w);
}

}  // namespace neurohome::io
