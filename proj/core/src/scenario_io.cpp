#include "neurohome/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "neurohome/error.hpp"
#include "neurohome/text.hpp"

namespace neurohome::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct Field {
  std::string value;
  std::size_t offset;      // of the value
  std::size_t key_offset;
};

// One stanza's key/value pairs with the byte offset of each value.
class Stanza {
 public:
  Stanza(std::string name, std::size_t offset) : name_(std::move(name)), offset_(offset) {}

  void set(const std::string& key, Field f) {
    const std::size_t at = f.key_offset;
    if (!fields_.emplace(key, std::move(f)).second) {
      throw ParseError("duplicate key '" + key + "' in " + where(), at);
    }
  }

  bool has(const std::string& key) const { return fields_.count(key) != 0; }

  const Field& get(const std::string& key) const {
    auto it = fields_.find(key);
    if (it == fields_.end()) throw ParseError("missing key '" + key + "' in " + where(), offset_);
    return it->second;
  }

  double number(const std::string& key) const {
    const auto& f = get(key);
    const auto v = text::parse_decimal(f.value);
    if (!v) throw ParseError("'" + key + "' must be a decimal number", f.offset);
    return *v;
  }

  template <typename Int>
  Int integer(const std::string& key) const {
    const auto& f = get(key);
    Int v{};
    auto [ptr, ec] = std::from_chars(f.value.data(), f.value.data() + f.value.size(), v);
    if (ec != std::errc{} || ptr != f.value.data() + f.value.size()) {
      throw ParseError("'" + key + "' must be an integer", f.offset);
    }
    return v;
  }

  const std::string& text(const std::string& key) const { return get(key).value; }

  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [k, f] : fields_) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) throw ParseError("unknown key '" + k + "' in " + where(), f.key_offset);
    }
  }

  const std::string& name() const { return name_; }

 private:
  std::string where() const { return name_.empty() ? "scenario header" : "[" + name_ + "]"; }

  std::string name_;
  std::size_t offset_;
  std::map<std::string, Field> fields_;
};

std::string num(double v) { return text::format_decimal(v); }

}  // namespace

synth::Scenario parse_scenario(std::istream& in) {
  std::vector<Stanza> stanzas;
  stanzas.emplace_back("", 0);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    const std::size_t lead = body.find_first_not_of(" \t");
    body = trim(body);
    if (body.empty()) continue;
    const std::size_t at = line_offset + (lead == std::string_view::npos ? 0 : lead);

    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError("unterminated stanza header", at);
      const std::string name(trim(body.substr(1, body.size() - 2)));
      if (name != "gaze" && name != "blink" && name != "beacon") {
        throw ParseError("unknown stanza [" + name + "]", at);
      }
      stanzas.emplace_back(name, at);
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", at);
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view raw_value = body.substr(eq + 1);
    const std::string value(trim(raw_value));
    if (key.empty()) throw ParseError("empty key", at);
    if (value.empty()) throw ParseError("empty value for '" + key + "'", at + eq + 1);
    const std::size_t value_offset = at + eq + 1 + raw_value.find_first_not_of(" \t");
    stanzas.back().set(key, {value, value_offset, at});
  }

  synth::Scenario sc;
  const Stanza& head = stanzas.front();
  head.only({"duration_s", "fs", "cue_s", "ssvep_amplitude", "harmonic_ratio", "noise_rms", "rng_seed", "user_room",
             "blink_reference"});
  if (head.has("duration_s")) sc.duration_s = head.number("duration_s");
  if (head.has("fs")) sc.fs = head.integer<int>("fs");
  if (head.has("cue_s")) sc.cue_s = head.number("cue_s");
  if (head.has("ssvep_amplitude")) sc.ssvep_amplitude = head.number("ssvep_amplitude");
  if (head.has("harmonic_ratio")) sc.harmonic_ratio = head.number("harmonic_ratio");
  if (head.has("noise_rms")) sc.noise_rms = head.number("noise_rms");
  if (head.has("rng_seed")) sc.rng_seed = head.integer<std::uint64_t>("rng_seed");
  if (head.has("user_room")) sc.user_room = head.text("user_room");
  if (head.has("blink_reference")) {
    const auto& f = head.get("blink_reference");
    if (f.value == "absolute") {
      sc.blink_reference = synth::BlinkReference::Absolute;
    } else if (f.value == "feedback") {
      sc.blink_reference = synth::BlinkReference::Feedback;
    } else {
      throw ParseError("blink_reference must be 'absolute' or 'feedback'", f.offset);
    }
  }

  for (std::size_t i = 1; i < stanzas.size(); ++i) {
    const Stanza& s = stanzas[i];
    if (s.name() == "gaze") {
      s.only({"start_s", "end_s", "class"});
      synth::GazeInterval g{s.number("start_s"), s.number("end_s"), std::nullopt};
      if (s.text("class") != "none") g.class_id = s.integer<int>("class");
      sc.gaze_script.push_back(g);
    } else if (s.name() == "blink") {
      s.only({"onset_s", "width_ms"});
      sc.blink_script.push_back({s.number("onset_s"), s.number("width_ms")});
    } else {
      s.only({"id", "room", "distance_m"});
      sc.beacons.push_back({s.text("id"), s.text("room"), s.number("distance_m")});
    }
  }
  sc.validate();
  return sc;
}

std::string format_scenario(const synth::Scenario& sc) {
  std::ostringstream os;
  os << "# neurohome scenario\n"
     << "duration_s = " << num(sc.duration_s) << '\n'
     << "fs = " << sc.fs << '\n'
     << "cue_s = " << num(sc.cue_s) << '\n'
     << "ssvep_amplitude = " << num(sc.ssvep_amplitude) << '\n'
     << "harmonic_ratio = " << num(sc.harmonic_ratio) << '\n'
     << "noise_rms = " << num(sc.noise_rms) << '\n'
     << "rng_seed = " << sc.rng_seed << '\n';
  if (!sc.user_room.empty()) os << "user_room = " << sc.user_room << '\n';
  os << "blink_reference = " << (sc.blink_reference == synth::BlinkReference::Feedback ? "feedback" : "absolute")
     << '\n';
  for (const auto& g : sc.gaze_script) {
    os << "\n[gaze]\nstart_s = " << num(g.start_s) << "\nend_s = " << num(g.end_s)
       << "\nclass = " << (g.class_id ? std::to_string(*g.class_id) : "none") << '\n';
  }
  for (const auto& b : sc.blink_script) {
    os << "\n[blink]\nonset_s = " << num(b.onset_s) << "\nwidth_ms = " << num(b.width_ms) << '\n';
  }
  for (const auto& b : sc.beacons) {
    os << "\n[beacon]\nid = " << b.beacon_id << "\nroom = " << b.room_id << "\ndistance_m = " << num(b.distance_m)
       << '\n';
  }
  return os.str();
}

synth::Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file " + path.string());
  try {
    return parse_scenario(in);
  } catch (const ParseError& e) {
    throw e.within(path.string());
  }
}

void save_scenario(const std::filesystem::path& path, const synth::Scenario& sc) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write scenario file " + path.string());
  out << format_scenario(sc);
}

}  // namespace neurohome::io
