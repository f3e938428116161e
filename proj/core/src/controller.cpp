#include "neurohome/controller.hpp"

#include <nlohmann/json.hpp>
#include <ostream>

namespace neurohome::control {
namespace {

void resume_flicker(ControllerState& s, const AwaitConfirm& a, double now_s) {
  s.home.led(a.room_id, a.class_id).flickering = true;
  s.log.push_back({now_s, "resume", a.room_id, a.class_id, s.home.device(a.room_id, a.class_id).device_id, ""});
}

void abort_selection(ControllerState& s, const AwaitConfirm& a, double now_s, const std::string& why) {
  s.log.push_back({now_s, "abort", a.room_id, a.class_id, s.home.device(a.room_id, a.class_id).device_id, why});
  resume_flicker(s, a, now_s);
  s.phase = Idle{};
}

}  // namespace

std::string format_log_record(const LogRecord& r) {
  nlohmann::ordered_json j;
  j["time_s"] = r.time_s;
  j["kind"] = r.kind;
  j["room"] = r.room;
  j["class"] = r.class_id ? nlohmann::ordered_json(*r.class_id) : nlohmann::ordered_json(nullptr);
  j["device"] = r.device;
  j["detail"] = r.detail;
  return j.dump();
}

void write_log(std::ostream& out, const std::vector<LogRecord>& log) {
  for (const auto& r : log) out << format_log_record(r) << '\n';
}

ControllerState make_state(HomeModel home, double confirm_window_s) {
  ControllerState s;
  s.home = std::move(home);
  s.confirm_window_s = confirm_window_s;
  return s;
}

ControllerState on_ssvep(const ssvep::SsvepDecision& decision, const loc::RoomFix& fix, ControllerState state) {
  state = tick(std::move(state), decision.window_end);
  if (!state.idle() || !decision.selected) return state;
  const int cls = *decision.selected;
  const double now = decision.window_end;
  if (!fix.room_id) {
    state.log.push_back({now, "warning", "", cls, "", "selection without a room fix ignored"});
    return state;
  }
  const std::string& room = *fix.room_id;
  if (!state.home.has_room(room) || !state.home.has_class(cls)) {
    state.log.push_back({now, "warning", room, cls, "", "selection for unknown room/class ignored"});
    return state;
  }
  const auto& device = state.home.device(room, cls).device_id;
  state.log.push_back({now, "select", room, cls, device, ""});
  state.home.led(room, cls).flickering = false;
  state.log.push_back({now, "feedback", room, cls, device, "flicker paused"});
  state.phase = AwaitConfirm{cls, room, now};
  return state;
}

ControllerState on_blinks(bool confirmed, ControllerState state, double now_s) {
  const AwaitConfirm* await = state.awaiting();
  if (!await) {
    state.log.push_back({now_s, "warning", "", std::nullopt, "", "blink confirmation while idle ignored"});
    return state;
  }
  const AwaitConfirm a = *await;
  if (now_s > a.feedback_time_s + state.confirm_window_s) {
    abort_selection(state, a, now_s, confirmed ? "confirmation arrived after the window" : "window expired");
    return state;
  }
  if (!confirmed) return state;

  auto& dev = state.home.device(a.room_id, a.class_id);
  dev.powered = !dev.powered;
  state.log.push_back({now_s, "toggle", a.room_id, a.class_id, dev.device_id, dev.powered ? "on" : "off"});
  resume_flicker(state, a, now_s);
  state.phase = Idle{};
  return state;
}

ControllerState tick(ControllerState state, double now_s) {
  if (const AwaitConfirm* a = state.awaiting(); a && now_s > a->feedback_time_s + state.confirm_window_s) {
    const AwaitConfirm expired = *a;
    abort_selection(state, expired, now_s, "window expired");
  }
  return state;
}

}  // namespace neurohome::control
