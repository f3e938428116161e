#include "neurohome/home.hpp"

#include <algorithm>
#include <set>

#include "neurohome/error.hpp"

namespace neurohome::control {
namespace {

std::string unknown(const std::string& room, int class_id) {
  return "no device for room '" + room + "' class " + std::to_string(class_id);
}

}  // namespace

HomeModel HomeModel::build(const std::vector<std::string>& rooms, const ssvep::StimulusTable& table,
                           const std::map<DeviceKey, std::string>& device_ids) {
  if (rooms.empty()) throw InvalidInput("home model: at least one room required");
  HomeModel h;
  h.rooms_ = rooms;
  for (const auto& e : table.entries()) h.classes_.push_back({e.class_id, e.label, e.frequency_hz});
  std::sort(h.classes_.begin(), h.classes_.end(), [](const auto& a, const auto& b) { return a.class_id < b.class_id; });

  std::set<std::string> seen_rooms;
  std::set<std::string> seen_ids;
  for (const auto& room : rooms) {
    if (room.empty() || !seen_rooms.insert(room).second) {
      throw InvalidInput("home model: room ids must be non-empty and unique ('" + room + "')");
    }
    const std::string suffix = room.rfind("room_", 0) == 0 ? room.substr(5) : room;
    for (const auto& c : h.classes_) {
      const DeviceKey key{room, c.class_id};
      std::string id;
      if (auto it = device_ids.find(key); it != device_ids.end()) {
        id = it->second;
      } else {
        id = (c.label.empty() ? "class" + std::to_string(c.class_id) : c.label) + "_" + suffix;
      }
      if (!seen_ids.insert(id).second) throw InvalidInput("home model: duplicate device id '" + id + "'");
      h.devices_[key] = {id, false};
      h.leds_[key] = {c.frequency_hz, true};
    }
  }
  for (const auto& [key, id] : device_ids) {
    if (!h.devices_.count(key)) throw LookupError("home model: override for " + unknown(key.first, key.second));
  }
  return h;
}

bool HomeModel::has_room(const std::string& room) const {
  return std::find(rooms_.begin(), rooms_.end(), room) != rooms_.end();
}

bool HomeModel::has_class(int class_id) const {
  return std::any_of(classes_.begin(), classes_.end(), [&](const auto& c) { return c.class_id == class_id; });
}

const DeviceRecord& HomeModel::device(const std::string& room, int class_id) const {
  auto it = devices_.find({room, class_id});
  if (it == devices_.end()) throw LookupError(unknown(room, class_id));
  return it->second;
}

DeviceRecord& HomeModel::device(const std::string& room, int class_id) {
  return const_cast<DeviceRecord&>(std::as_const(*this).device(room, class_id));
}

const LedCluster& HomeModel::led(const std::string& room, int class_id) const {
  auto it = leds_.find({room, class_id});
  if (it == leds_.end()) throw LookupError(unknown(room, class_id));
  return it->second;
}

LedCluster& HomeModel::led(const std::string& room, int class_id) {
  return const_cast<LedCluster&>(std::as_const(*this).led(room, class_id));
}

}  // namespace neurohome::control
