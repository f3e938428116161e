#include "neurohome/config.hpp"

#include <fstream>
#include <initializer_list>

#include "neurohome/error.hpp"

namespace neurohome::io {
namespace {

using nlohmann::json;

const json& object(const json& j, const std::string& where) {
  if (!j.is_object()) throw InvalidInput("config: " + where + " must be an object");
  return j;
}

void only(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : object(j, where).items()) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw InvalidInput("config: unknown key '" + k + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& into, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput("config: " + where + "." + key + " has the wrong type");
  }
}

void read_blink(const json& j, blink::BlinkConfig& b) {
  only(j, "blink", {"c_prime", "min_width_ms", "confirm_count", "confirm_window_s", "min_gap_ms"});
  read(j, "c_prime", b.sensitivity_c_prime, "blink");
  read(j, "min_width_ms", b.min_width_ms, "blink");
  read(j, "confirm_count", b.confirm_count, "blink");
  read(j, "confirm_window_s", b.confirm_window_s, "blink");
  read(j, "min_gap_ms", b.min_gap_ms, "blink");
}

void read_home(const json& j, session::SessionConfig& cfg) {
  only(j, "home", {"rooms", "devices", "own_room_distance_m", "other_room_distance_m"});
  read(j, "rooms", cfg.rooms, "home");
  read(j, "own_room_distance_m", cfg.own_room_distance_m, "home");
  read(j, "other_room_distance_m", cfg.other_room_distance_m, "home");
  if (j.contains("devices")) {
    if (!j["devices"].is_array()) throw InvalidInput("config: home.devices must be an array");
    for (const auto& d : j["devices"]) {
      only(d, "home.devices[]", {"room", "class", "id"});
      std::string room, id;
      int cls = 0;
      read(d, "room", room, "home.devices[]");
      read(d, "class", cls, "home.devices[]");
      read(d, "id", id, "home.devices[]");
      cfg.device_ids[{room, cls}] = id;
    }
  }
}

void read_localization(const json& j, session::SessionConfig& cfg) {
  only(j, "localization", {"p0_dbm", "exponent", "noise_sigma_db", "staleness_ms", "beacon_interval_ms"});
  read(j, "p0_dbm", cfg.path_loss.p0_dbm, "localization");
  read(j, "exponent", cfg.path_loss.exponent, "localization");
  read(j, "noise_sigma_db", cfg.path_loss.noise_sigma_db, "localization");
  read(j, "staleness_ms", cfg.staleness_ms, "localization");
  read(j, "beacon_interval_ms", cfg.beacon_interval_ms, "localization");
}

void read_session(const json& j, session::SessionConfig& cfg) {
  only(j, "session", {"trials", "seed", "stride_s", "selection_timeout_s", "stimulus", "threads"});
  read(j, "trials", cfg.trials, "session");
  read(j, "seed", cfg.seed, "session");
  read(j, "stride_s", cfg.stride_s, "session");
  read(j, "selection_timeout_s", cfg.selection_timeout_s, "session");
  read(j, "threads", cfg.threads, "session");
  if (j.contains("stimulus")) {
    std::string mode;
    read(j, "stimulus", mode, "session");
    if (mode == "cycle") {
      cfg.stimulus = session::StimulusMode::Cycle;
    } else if (mode == "none") {
      cfg.stimulus = session::StimulusMode::None;
    } else {
      throw InvalidInput("config: session.stimulus must be 'cycle' or 'none'");
    }
  }
}

void read_scenario(const json& j, synth::Scenario& sc) {
  only(j, "scenario",
       {"duration_s", "fs", "cue_s", "ssvep_amplitude", "harmonic_ratio", "noise_rms", "blink_reference", "blinks"});
  read(j, "duration_s", sc.duration_s, "scenario");
  read(j, "fs", sc.fs, "scenario");
  read(j, "cue_s", sc.cue_s, "scenario");
  read(j, "ssvep_amplitude", sc.ssvep_amplitude, "scenario");
  read(j, "harmonic_ratio", sc.harmonic_ratio, "scenario");
  read(j, "noise_rms", sc.noise_rms, "scenario");
  if (j.contains("blink_reference")) {
    std::string ref;
    read(j, "blink_reference", ref, "scenario");
    if (ref == "feedback") {
      sc.blink_reference = synth::BlinkReference::Feedback;
    } else if (ref == "absolute") {
      sc.blink_reference = synth::BlinkReference::Absolute;
    } else {
      throw InvalidInput("config: scenario.blink_reference must be 'feedback' or 'absolute'");
    }
  }
  if (j.contains("blinks")) {
    if (!j["blinks"].is_array()) throw InvalidInput("config: scenario.blinks must be an array");
    sc.blink_script.clear();
    for (const auto& b : j["blinks"]) {
      only(b, "scenario.blinks[]", {"onset_s", "width_ms"});
      synth::BlinkPulse p;
      read(b, "onset_s", p.onset_s, "scenario.blinks[]");
      read(b, "width_ms", p.width_ms, "scenario.blinks[]");
      sc.blink_script.push_back(p);
    }
  }
}

}  // namespace

session::SessionConfig parse_config(const json& doc) {
  only(doc, "config", {"stimuli", "c", "blink", "home", "localization", "session", "scenario"});
  session::SessionConfig cfg;

  double c = cfg.table.sensitivity_c();
  read(doc, "c", c, "config");
  if (doc.contains("stimuli")) {
    if (!doc["stimuli"].is_array()) throw InvalidInput("config: stimuli must be an array");
    std::vector<ssvep::StimulusEntry> entries;
    for (const auto& s : doc["stimuli"]) {
      only(s, "stimuli[]", {"class", "frequency_hz", "label"});
      ssvep::StimulusEntry e;
      e.class_id = static_cast<int>(entries.size()) + 1;
      read(s, "class", e.class_id, "stimuli[]");
      read(s, "frequency_hz", e.frequency_hz, "stimuli[]");
      read(s, "label", e.label, "stimuli[]");
      if (e.label.empty()) e.label = "device" + std::to_string(e.class_id);
      entries.push_back(e);
    }
    cfg.table = ssvep::validate_frequencies(std::move(entries), c);
  } else {
    cfg.table = cfg.table.with_sensitivity(c);
  }

  if (doc.contains("blink")) read_blink(doc["blink"], cfg.blink);
  if (doc.contains("home")) read_home(doc["home"], cfg);
  if (doc.contains("localization")) read_localization(doc["localization"], cfg);
  if (doc.contains("session")) read_session(doc["session"], cfg);
  if (doc.contains("scenario")) read_scenario(doc["scenario"], cfg.scenario);
  cfg.validate();
  return cfg;
}

session::SessionConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": invalid JSON", e.byte);
  }
  try {
    return parse_config(doc);
  } catch (const Error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

}  // namespace neurohome::io
