#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "neurohome/home.hpp"
#include "neurohome/localization.hpp"
#include "neurohome/ssvep.hpp"

// Closed-loop state machine: Idle -> (SSVEP selection + room fix) ->
// AwaitConfirm with the selected LED cluster paused -> toggle on confirmed
// blinks, or back to Idle when the window lapses.
namespace neurohome::control {

struct Idle {
  friend bool operator==(const Idle&, const Idle&) = default;
};

struct AwaitConfirm {
  int class_id = 0;
  std::string room_id;  // frozen at selection time
  double feedback_time_s = 0.0;

  friend bool operator==(const AwaitConfirm&, const AwaitConfirm&) = default;
};

// Toggling is transient: on_blinks passes through it (logged as "toggle")
// and settles in Idle within the same call.
using Phase = std::variant<Idle, AwaitConfirm>;

struct LogRecord {
  double time_s = 0.0;
  std::string kind;  // select, feedback, toggle, abort, warning, resume
  std::string room;
  std::optional<int> class_id;
  std::string device;
  std::string detail;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

// One JSON object per line with fields time_s, kind, room, class, device, detail.
std::string format_log_record(const LogRecord& r);
void write_log(std::ostream& out, const std::vector<LogRecord>& log);

struct ControllerState {
  HomeModel home;
  Phase phase = Idle{};
  double confirm_window_s = 4.0;
  std::vector<LogRecord> log;

  bool idle() const noexcept { return std::holds_alternative<Idle>(phase); }
  const AwaitConfirm* awaiting() const noexcept { return std::get_if<AwaitConfirm>(&phase); }
};

ControllerState make_state(HomeModel home, double confirm_window_s = 4.0);

// In Idle: a decision with a selected class and a room fix opens the
// confirmation window at decision.window_end and pauses that LED cluster.
// A selection without a room fix logs a warning. An expired confirmation
// window is closed first (as tick() would); otherwise, outside Idle,
// decisions are ignored.
ControllerState on_ssvep(const ssvep::SsvepDecision& decision, const loc::RoomFix& fix, ControllerState state);

// In AwaitConfirm: confirmed within feedback + window toggles the device;
// past the window the selection is aborted without toggling. Unconfirmed
// inside the window keeps waiting. In Idle this is a no-op with a warning.
ControllerState on_blinks(bool confirmed, ControllerState state, double now_s);

// Reverts AwaitConfirm to Idle once now_s > feedback + window.
ControllerState tick(ControllerState state, double now_s);

}  // namespace neurohome::control
