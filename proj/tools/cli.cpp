#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neurohome/blink.hpp"
#include "neurohome/config.hpp"
#include "neurohome/dsp.hpp"
#include "neurohome/error.hpp"
#include "neurohome/localization.hpp"
#include "neurohome/scenario_io.hpp"
#include "neurohome/session.hpp"
#include "neurohome/signal_io.hpp"
#include "neurohome/ssvep.hpp"
#include "neurohome/synth.hpp"
#include "neurohome/text.hpp"

namespace neurohome::cli {
namespace {

using nlohmann::ordered_json;

// Bad flag values found after CLI11 accepted the command line.
struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string config;
  std::string scenario;
  std::string out;
  std::string freqs;
  std::optional<double> c;
  std::optional<double> c_prime;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string stimulus;
  std::string input;
  double stride_s = 0.5;
  std::optional<double> at_s;
  std::optional<double> confirm_at_s;
  std::optional<std::int64_t> now_ms;
  std::optional<std::int64_t> staleness_ms;
  std::size_t trial = 0;
  std::optional<double> feedback_at_s;
  std::string eeg_out;
  std::string blink_out;
  std::string beacons_out;
};

std::vector<ssvep::StimulusEntry> parse_freqs(const std::string& csv, const ssvep::StimulusTable& current) {
  std::vector<ssvep::StimulusEntry> entries;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto f = text::parse_decimal(token);
    if (!f) throw UsageError("--freqs: '" + token + "' is not a decimal frequency");
    const int id = static_cast<int>(entries.size()) + 1;
    std::string label = "device" + std::to_string(id);
    if (current.contains(id) && !current.entry(id).label.empty()) label = current.entry(id).label;
    entries.push_back({id, *f, label});
  }
  if (entries.empty()) throw UsageError("--freqs: empty list");
  return entries;
}

session::SessionConfig build_config(const Options& o) {
  session::SessionConfig cfg = o.config.empty() ? session::SessionConfig{} : io::load_config(o.config);
  if (!o.scenario.empty()) cfg.scenario = io::load_scenario(o.scenario);
  try {
    const double c = o.c.value_or(cfg.table.sensitivity_c());
    if (!o.freqs.empty()) {
      cfg.table = ssvep::validate_frequencies(parse_freqs(o.freqs, cfg.table), c);
    } else if (o.c) {
      cfg.table = cfg.table.with_sensitivity(c);
    }
    if (o.c_prime) cfg.blink.sensitivity_c_prime = *o.c_prime;
    if (o.trials) cfg.trials = *o.trials;
    if (o.seed) cfg.seed = *o.seed;
    if (o.threads) cfg.threads = *o.threads;
    if (o.stimulus == "none") cfg.stimulus = session::StimulusMode::None;
    if (o.stimulus == "cycle") cfg.stimulus = session::StimulusMode::Cycle;
    cfg.validate();
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void emit(const ordered_json& doc, const Options& o, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file || !(file << text)) throw InvalidInput("cannot write " + o.out);
}

ordered_json stimuli_json(const ssvep::StimulusTable& table) {
  ordered_json a = ordered_json::array();
  for (const auto& e : table.entries()) {
    a.push_back({{"class", e.class_id}, {"frequency_hz", e.frequency_hz}, {"label", e.label}});
  }
  return a;
}

int run_simulate(const Options& o, std::ostream& out) {
  const auto cfg = build_config(o);
  const auto outcomes = session::run_trials(cfg);
  const auto report = session::make_report(cfg, outcomes);
  emit(report, o, out);
  if (!o.out.empty()) {
    const auto& m = report["metrics"];
    out << "trials=" << m["trials"].get<std::size_t>()
        << " ssvep_accuracy_pct=" << text::format_decimal(m["ssvep_accuracy_pct"].get<double>())
        << " blink_accuracy_pct=" << text::format_decimal(m["blink_accuracy_pct"].get<double>())
        << " transfer_rate_cmd_per_min=" << text::format_decimal(m["transfer_rate_cmd_per_min"].get<double>())
        << " report=" << o.out << '\n';
  }
  return kExitOk;
}

ordered_json decision_json(const ssvep::SsvepDecision& d, const ssvep::StimulusTable& table) {
  ordered_json j;
  j["window_start"] = d.window_start;
  j["window_end"] = d.window_end;
  j["tau"] = d.threshold_tau;
  j["scores"] = ordered_json::array();
  for (const auto& s : d.scores) {
    j["scores"].push_back({{"class", s.class_id}, {"frequency_hz", table.entry(s.class_id).frequency_hz}, {"score", s.value}});
  }
  j["selected"] = d.selected ? ordered_json(*d.selected) : ordered_json(nullptr);
  return j;
}

int run_detect(const Options& o, std::ostream& out) {
  const auto cfg = build_config(o);
  if (!(o.stride_s > 0.0)) throw UsageError("--stride must be positive");
  const auto w = io::load_signal(o.input);
  if (w.duration() + 0.5 / w.sample_rate < ssvep::kThresholdWindowS) {
    throw InvalidInput(o.input + ": detection needs at least 4 s of signal");
  }
  std::vector<double> ends;
  if (o.at_s) {
    ends.push_back(*o.at_s);
  } else {
    const double first = w.start_time + ssvep::kThresholdWindowS;
    for (int k = 0; first + k * o.stride_s <= w.end_time() + 1e-9; ++k) ends.push_back(first + k * o.stride_s);
  }
  ordered_json doc;
  doc["file"] = o.input;
  doc["channel"] = w.channel;
  doc["sample_rate"] = w.sample_rate;
  doc["c"] = cfg.table.sensitivity_c();
  doc["stimuli"] = stimuli_json(cfg.table);
  doc["decisions"] = ordered_json::array();
  ordered_json selected = nullptr;
  for (double t : ends) {
    const auto d = ssvep::decide_at(w, t, cfg.table);
    doc["decisions"].push_back(decision_json(d, cfg.table));
    if (d.selected && selected.is_null()) {
      const auto& e = cfg.table.entry(*d.selected);
      selected = {{"class", e.class_id}, {"frequency_hz", e.frequency_hz}, {"label", e.label}, {"at_s", d.window_end}};
    }
  }
  doc["selected"] = selected;
  emit(doc, o, out);
  return kExitOk;
}

int run_blinks(const Options& o, std::ostream& out) {
  const auto cfg = build_config(o);
  const auto w = io::load_signal(o.input);
  const auto filtered = dsp::apply_filter(blink::blink_filter(w.sample_rate), w);
  const auto events = blink::detect_blinks(w, cfg.blink);
  ordered_json doc;
  doc["file"] = o.input;
  doc["channel"] = w.channel;
  doc["c_prime"] = cfg.blink.sensitivity_c_prime;
  doc["sigma"] = blink::blink_threshold(filtered, cfg.blink);
  doc["count"] = events.size();
  doc["events"] = ordered_json::array();
  for (const auto& e : events) {
    doc["events"].push_back({{"onset_s", e.onset_s}, {"width_ms", e.width_ms}, {"apex", e.apex_value}});
  }
  if (o.confirm_at_s) doc["confirmed"] = blink::confirm(events, *o.confirm_at_s, cfg.blink);
  emit(doc, o, out);
  return kExitOk;
}

int run_spectrum(const Options& o, std::ostream& out) {
  const auto cfg = build_config(o);
  const auto w = io::load_signal(o.input);
  const auto scores = ssvep::score(w, cfg.table);
  const auto acf = dsp::autocorrelate(w);
  const auto spectrum = dsp::power_spectrum(acf, dsp::fft_length_for(w.sample_rate, acf.size()));
  ordered_json doc;
  doc["file"] = o.input;
  doc["channel"] = w.channel;
  doc["duration_s"] = w.duration();
  doc["fft_length"] = spectrum.magnitudes.size();
  doc["bin_width_hz"] = spectrum.bin_width;
  doc["half_width_hz"] = ssvep::kBandHalfWidthHz;
  doc["bands"] = ordered_json::array();
  for (const auto& s : scores) {
    const double f = cfg.table.entry(s.class_id).frequency_hz;
    doc["bands"].push_back({{"class", s.class_id},
                            {"frequency_hz", f},
                            {"fundamental", dsp::band_power(spectrum, f, ssvep::kBandHalfWidthHz)},
                            {"harmonic", dsp::band_power(spectrum, 2.0 * f, ssvep::kBandHalfWidthHz)},
                            {"score", s.value}});
  }
  if (w.duration() + 0.5 / w.sample_rate >= ssvep::kThresholdWindowS) doc["tau"] = ssvep::threshold(w, cfg.table);
  emit(doc, o, out);
  return kExitOk;
}

int run_locate(const Options& o, std::ostream& out, std::ostream& err) {
  std::ifstream in(o.input);
  if (!in) throw InvalidInput("cannot open reading file " + o.input);
  std::vector<std::string> warnings;
  std::vector<loc::BeaconReading> readings;
  try {
    readings = loc::parse_stream(in, &warnings);
  } catch (const ParseError& e) {
    throw e.within(o.input);
  } catch (const Error& e) {
    throw InvalidInput(o.input + ": " + e.what());
  }
  for (const auto& w : warnings) err << o.input << ": " << w << '\n';

  std::int64_t now = 0;
  for (const auto& r : readings) now = std::max(now, r.timestamp_ms);
  if (o.now_ms) now = *o.now_ms;
  const auto fix = loc::resolve(readings, now, o.staleness_ms.value_or(loc::kDefaultStalenessMs));
  ordered_json doc;
  doc["file"] = o.input;
  doc["readings"] = readings.size();
  doc["now_ms"] = now;
  if (fix.room_id) {
    doc["result"] = "fix";
    doc["room"] = *fix.room_id;
    doc["beacon"] = fix.beacon_id;
    doc["rssi_dbm"] = fix.winning_rssi;
  } else {
    doc["result"] = "no fix";
    doc["room"] = nullptr;
  }
  doc["readings_considered"] = fix.readings_considered;
  emit(doc, o, out);
  return kExitOk;
}

int run_generate(const Options& o, std::ostream& out) {
  if (o.eeg_out.empty() && o.blink_out.empty() && o.beacons_out.empty()) {
    throw UsageError("generate: give at least one of --eeg, --blink, --beacons");
  }
  const auto cfg = build_config(o);
  auto sc = session::trial_scenario(cfg, o.trial, cfg.seed);
  sc = sc.with_feedback_at(o.feedback_at_s.value_or(sc.cue_s + cfg.stride_s));
  if (!o.eeg_out.empty()) io::save_signal(o.eeg_out, synth::generate_ssvep_channel(sc, cfg.table));
  if (!o.blink_out.empty()) io::save_signal(o.blink_out, synth::generate_blink_channel(sc));
  if (!o.beacons_out.empty()) {
    std::ofstream file(o.beacons_out, std::ios::binary);
    if (!file) throw InvalidInput("cannot write " + o.beacons_out);
    for (const auto& line : synth::generate_beacon_stream(sc, cfg.beacon_interval_ms, cfg.path_loss)) file << line << '\n';
    if (!file) throw InvalidInput("cannot write " + o.beacons_out);
  }
  out << io::format_scenario(sc);
  return kExitOk;
}

void add_tables(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON session config");
  sub->add_option("--freqs", o.freqs, "stimulus frequencies in Hz, comma separated (class ids 1..m)");
  sub->add_option("--c", o.c, "SSVEP threshold sensitivity c");
  sub->add_option("--c-prime", o.c_prime, "blink threshold sensitivity c'");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"neurohome: SSVEP + blink home-automation simulator"};
  app.name("neurohome");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "run seeded trials and write a JSON metrics report");
  add_tables(simulate, o);
  simulate->add_option("--scenario", o.scenario, "scenario file used as the per-trial template");
  simulate->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "master seed");
  simulate->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  simulate->add_option("--stimulus", o.stimulus, "cycle | none")->check(CLI::IsMember({"cycle", "none"}));
  simulate->add_option("--out", o.out, "report path (default stdout)");

  auto* detect = app.add_subcommand("detect", "sliding SSVEP decisions over a signal file");
  add_tables(detect, o);
  detect->add_option("file", o.input, "signal file")->required();
  detect->add_option("--stride", o.stride_s, "seconds between decisions")->capture_default_str();
  detect->add_option("--at", o.at_s, "single decision with the windows ending at this time");
  detect->add_option("--out", o.out, "report path (default stdout)");

  auto* blinks = app.add_subcommand("blinks", "blink detection on a signal file");
  add_tables(blinks, o);
  blinks->add_option("file", o.input, "signal file")->required();
  blinks->add_option("--confirm-at", o.confirm_at_s, "also report confirmation for a window opening here");
  blinks->add_option("--out", o.out, "report path (default stdout)");

  auto* spectrum = app.add_subcommand("spectrum", "band powers at each stimulus frequency and its harmonic");
  add_tables(spectrum, o);
  spectrum->add_option("file", o.input, "signal file (at least 2 s)")->required();
  spectrum->add_option("--out", o.out, "report path (default stdout)");

  auto* locate = app.add_subcommand("locate", "resolve the room from a file of RSSI lines");
  locate->add_option("file", o.input, "file of protocol lines")->required();
  locate->add_option("--now", o.now_ms, "resolve time in ms (default: newest timestamp)");
  locate->add_option("--staleness", o.staleness_ms, "staleness bound in ms")->check(CLI::NonNegativeNumber);
  locate->add_option("--out", o.out, "report path (default stdout)");

  auto* generate = app.add_subcommand("generate", "write synthetic signal and beacon files for one trial");
  add_tables(generate, o);
  generate->add_option("--scenario", o.scenario, "scenario file used as the template");
  generate->add_option("--seed", o.seed, "master seed");
  generate->add_option("--trial", o.trial, "trial index")->capture_default_str();
  generate->add_option("--stimulus", o.stimulus, "cycle | none")->check(CLI::IsMember({"cycle", "none"}));
  generate->add_option("--feedback-at", o.feedback_at_s, "feedback instant for feedback-relative blinks");
  generate->add_option("--eeg", o.eeg_out, "SSVEP channel output");
  generate->add_option("--blink", o.blink_out, "blink channel output");
  generate->add_option("--beacons", o.beacons_out, "beacon line output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(o, out);
    if (detect->parsed()) return run_detect(o, out);
    if (blinks->parsed()) return run_blinks(o, out);
    if (spectrum->parsed()) return run_spectrum(o, out);
    if (locate->parsed()) return run_locate(o, out, err);
    if (generate->parsed()) return run_generate(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace neurohome::cli
