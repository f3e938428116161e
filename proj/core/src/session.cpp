#include "neurohome/session.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "neurohome/error.hpp"
#include "neurohome/random.hpp"

namespace neurohome::session {

using nlohmann::ordered_json;

synth::Scenario SessionConfig::default_trial_scenario() {
  synth::Scenario sc;
  sc.blink_reference = synth::BlinkReference::Feedback;
  sc.blink_script = {{0.5, 250.0}, {1.3, 250.0}, {2.1, 250.0}};
  return sc;
}

void SessionConfig::validate() const {
  blink.validate();
  if (rooms.empty()) throw InvalidInput("session: at least one room is required");
  if (!(own_room_distance_m > 0.0 && other_room_distance_m > 0.0)) {
    throw InvalidInput("session: beacon distances must be positive");
  }
  if (!(stride_s > 0.0)) throw InvalidInput("session: stride_s must be positive");
  if (!(selection_timeout_s >= stride_s)) throw InvalidInput("session: selection_timeout_s must be >= stride_s");
  if (beacon_interval_ms <= 0) throw InvalidInput("session: beacon_interval_ms must be positive");
  if (staleness_ms < 0) throw InvalidInput("session: staleness_ms must be non-negative");
  if (trials == 0) throw InvalidInput("session: trials must be positive");
  // Scenario::validate() needs a complete scenario; check the parts the
  // template already fixes.
  synth::Scenario probe = scenario;
  probe.gaze_script.clear();
  probe.beacons.clear();
  if (probe.blink_reference == synth::BlinkReference::Feedback) probe.blink_script.clear();
  probe.validate();
}

synth::Scenario trial_scenario(const SessionConfig& cfg, std::size_t index, std::uint64_t seed) {
  synth::Scenario sc = cfg.scenario;
  const std::size_t m = cfg.table.size();
  sc.rng_seed = derive_seed(seed, {static_cast<std::uint64_t>(index)});
  if (sc.gaze_script.empty() && cfg.stimulus == StimulusMode::Cycle) {
    sc.gaze_script.push_back({sc.cue_s, sc.duration_s, static_cast<int>(index % m) + 1});
  }
  if (sc.user_room.empty()) sc.user_room = cfg.rooms[(index / m) % cfg.rooms.size()];
  if (sc.beacons.empty()) {
    for (const auto& room : cfg.rooms) {
      sc.beacons.push_back({"b_" + room, room, room == sc.user_room ? cfg.own_room_distance_m : cfg.other_room_distance_m});
    }
  }
  return sc;
}

TrialOutcome run_trial(const synth::Scenario& sc, const SessionConfig& cfg) {
  sc.validate();
  TrialOutcome out;
  out.intended_class = sc.intended_class();
  out.intended_room = sc.user_room;

  const auto eeg = synth::generate_ssvep_channel(sc, cfg.table);
  std::vector<loc::BeaconReading> readings;
  for (const auto& line : synth::generate_beacon_stream(sc, cfg.beacon_interval_ms, cfg.path_loss)) {
    readings.push_back(loc::parse_reading(line));
  }

  auto state = control::make_state(control::HomeModel::build(cfg.rooms, cfg.table, cfg.device_ids),
                                   cfg.blink.confirm_window_s);

  const auto steps = static_cast<int>(std::floor(cfg.selection_timeout_s / cfg.stride_s + 1e-9));
  for (int k = 1; k <= steps && state.idle(); ++k) {
    const double t = sc.cue_s + k * cfg.stride_s;
    if (t > sc.duration_s + 1e-9) break;
    if (t < ssvep::kThresholdWindowS - 1e-9) continue;
    state = control::tick(std::move(state), t);
    const auto decision = ssvep::decide_at(eeg, t, cfg.table);
    const auto fix = loc::resolve(readings, std::llround(t * 1000.0), cfg.staleness_ms);
    if (decision.selected && !out.selected_class) {
      out.selected_class = decision.selected;
      out.selected_room = fix.room_id;
    }
    state = control::on_ssvep(decision, fix, std::move(state));
  }

  if (const auto* await = state.awaiting()) {
    const double fb = await->feedback_time_s;
    const double close = fb + cfg.blink.confirm_window_s;
    out.feedback_time_s = fb;
    out.selected_class = await->class_id;
    out.selected_room = await->room_id;

    const auto placed = sc.with_feedback_at(fb);
    out.blink_attempted = !placed.blink_script.empty();
    const auto raw = synth::generate_blink_channel(placed);
    const auto window = raw.between(std::max(0.0, fb - 2.0), std::min(raw.end_time(), close));
    const auto events = blink::detect_blinks(window, cfg.blink);
    out.blinks_detected = events.size();
    out.confirmed = blink::confirm(events, fb, cfg.blink);

    const auto before = state.log.size();
    state = control::on_blinks(out.confirmed, std::move(state), close);
    state = control::tick(std::move(state), std::nextafter(close, std::numeric_limits<double>::infinity()));
    for (auto i = before; i < state.log.size(); ++i) {
      if (state.log[i].kind == "toggle") {
        out.toggled_device = state.log[i].device;
        out.response_time_s = state.log[i].time_s - sc.cue_s;
      }
    }
  }
  out.log = std::move(state.log);
  return out;
}

SessionMetrics aggregate(const std::vector<TrialOutcome>& outcomes) {
  if (outcomes.empty()) throw InvalidInput("aggregate: no trial outcomes");
  SessionMetrics m;
  m.trials = outcomes.size();
  double response_sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.intended_class) {
      ++m.selection_opportunities;
      if (o.selected_class == o.intended_class) ++m.correct_selections;
    } else {
      ++m.no_stimulus_trials;
      if (o.selected_class) ++m.false_selections;
    }
    if (o.selected_class) {
      ++m.selections;
      if (o.selected_room && *o.selected_room == o.intended_room) ++m.correct_rooms;
    }
    if (o.blink_attempted) {
      ++m.blink_attempts;
      if (o.confirmed) ++m.confirmations;
    }
    if (o.toggled_device && o.response_time_s) {
      ++m.toggles;
      response_sum += *o.response_time_s;
    }
  }
  auto pct = [](std::size_t num, std::size_t den) { return den == 0 ? 0.0 : 100.0 * num / den; };
  m.ssvep_accuracy_pct = pct(m.correct_selections, m.selection_opportunities);
  m.false_selection_pct = pct(m.false_selections, m.no_stimulus_trials);
  m.blink_accuracy_pct = pct(m.confirmations, m.blink_attempts);
  m.localization_accuracy_pct = pct(m.correct_rooms, m.selections);
  if (m.toggles > 0) {
    m.mean_response_time_s = response_sum / m.toggles;
    m.transfer_rate_cmd_per_min = 60.0 / m.mean_response_time_s;
  }
  return m;
}

std::vector<TrialOutcome> run_trials(const SessionConfig& cfg) {
  cfg.validate();
  std::vector<TrialOutcome> outcomes(cfg.trials);
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.trials));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.trials; i = next++) {
      try {
        outcomes[i] = run_trial(trial_scenario(cfg, i, cfg.seed), cfg);
        outcomes[i].index = i;
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cfg.trials;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

namespace {

template <typename T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json scenario_to_json(const synth::Scenario& sc) {
  ordered_json j;
  j["duration_s"] = sc.duration_s;
  j["fs"] = sc.fs;
  j["cue_s"] = sc.cue_s;
  j["ssvep_amplitude"] = sc.ssvep_amplitude;
  j["harmonic_ratio"] = sc.harmonic_ratio;
  j["noise_rms"] = sc.noise_rms;
  j["blink_reference"] = sc.blink_reference == synth::BlinkReference::Feedback ? "feedback" : "absolute";
  j["blinks"] = ordered_json::array();
  for (const auto& b : sc.blink_script) j["blinks"].push_back({{"onset_s", b.onset_s}, {"width_ms", b.width_ms}});
  if (!sc.gaze_script.empty()) {
    j["gaze"] = ordered_json::array();
    for (const auto& g : sc.gaze_script) {
      j["gaze"].push_back({{"start_s", g.start_s}, {"end_s", g.end_s}, {"class", opt(g.class_id)}});
    }
  }
  if (!sc.user_room.empty()) j["user_room"] = sc.user_room;
  if (!sc.beacons.empty()) {
    j["beacons"] = ordered_json::array();
    for (const auto& b : sc.beacons) {
      j["beacons"].push_back({{"id", b.beacon_id}, {"room", b.room_id}, {"distance_m", b.distance_m}});
    }
  }
  return j;
}

}  // namespace

ordered_json config_to_json(const SessionConfig& cfg) {
  ordered_json j;
  j["stimuli"] = ordered_json::array();
  for (const auto& e : cfg.table.entries()) {
    j["stimuli"].push_back({{"class", e.class_id}, {"frequency_hz", e.frequency_hz}, {"label", e.label}});
  }
  j["c"] = cfg.table.sensitivity_c();
  j["blink"] = {{"c_prime", cfg.blink.sensitivity_c_prime},
                {"min_width_ms", cfg.blink.min_width_ms},
                {"confirm_count", cfg.blink.confirm_count},
                {"confirm_window_s", cfg.blink.confirm_window_s},
                {"min_gap_ms", cfg.blink.min_gap_ms}};
  ordered_json home;
  home["rooms"] = cfg.rooms;
  home["own_room_distance_m"] = cfg.own_room_distance_m;
  home["other_room_distance_m"] = cfg.other_room_distance_m;
  if (!cfg.device_ids.empty()) {
    home["devices"] = ordered_json::array();
    for (const auto& [key, id] : cfg.device_ids) {
      home["devices"].push_back({{"room", key.first}, {"class", key.second}, {"id", id}});
    }
  }
  j["home"] = home;
  j["localization"] = {{"p0_dbm", cfg.path_loss.p0_dbm},
                       {"exponent", cfg.path_loss.exponent},
                       {"noise_sigma_db", cfg.path_loss.noise_sigma_db},
                       {"staleness_ms", cfg.staleness_ms},
                       {"beacon_interval_ms", cfg.beacon_interval_ms}};
  j["session"] = {{"trials", cfg.trials},
                  {"seed", cfg.seed},
                  {"stride_s", cfg.stride_s},
                  {"selection_timeout_s", cfg.selection_timeout_s},
                  {"stimulus", cfg.stimulus == StimulusMode::Cycle ? "cycle" : "none"}};
  j["scenario"] = scenario_to_json(cfg.scenario);
  return j;
}

ordered_json metrics_to_json(const SessionMetrics& m) {
  ordered_json j;
  j["trials"] = m.trials;
  j["ssvep_accuracy_pct"] = m.ssvep_accuracy_pct;
  j["blink_accuracy_pct"] = m.blink_accuracy_pct;
  j["mean_response_time_s"] = m.mean_response_time_s;
  j["transfer_rate_cmd_per_min"] = m.transfer_rate_cmd_per_min;
  j["false_selection_pct"] = m.false_selection_pct;
  j["localization_accuracy_pct"] = m.localization_accuracy_pct;
  j["counts"] = {{"selection_opportunities", m.selection_opportunities},
                 {"correct_selections", m.correct_selections},
                 {"no_stimulus_trials", m.no_stimulus_trials},
                 {"false_selections", m.false_selections},
                 {"blink_attempts", m.blink_attempts},
                 {"confirmations", m.confirmations},
                 {"selections", m.selections},
                 {"correct_rooms", m.correct_rooms},
                 {"toggles", m.toggles}};
  return j;
}

ordered_json outcome_to_json(const TrialOutcome& o) {
  ordered_json j;
  j["trial"] = o.index;
  j["intended_class"] = opt(o.intended_class);
  j["intended_room"] = o.intended_room;
  j["selected_class"] = opt(o.selected_class);
  j["selected_room"] = opt(o.selected_room);
  j["feedback_time_s"] = opt(o.feedback_time_s);
  j["blink_attempted"] = o.blink_attempted;
  j["blinks_detected"] = o.blinks_detected;
  j["confirmed"] = o.confirmed;
  j["toggled_device"] = opt(o.toggled_device);
  j["response_time_s"] = opt(o.response_time_s);
  j["events"] = ordered_json::array();
  for (const auto& r : o.log) j["events"].push_back(ordered_json::parse(control::format_log_record(r)));
  return j;
}

ordered_json make_report(const SessionConfig& cfg, const std::vector<TrialOutcome>& outcomes) {
  ordered_json j;
  j["config"] = config_to_json(cfg);
  j["metrics"] = metrics_to_json(aggregate(outcomes));
  j["outcomes"] = ordered_json::array();
  for (const auto& o : outcomes) j["outcomes"].push_back(outcome_to_json(o));
  return j;
}

}  // namespace neurohome::session
