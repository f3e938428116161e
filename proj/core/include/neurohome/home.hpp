#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "neurohome/ssvep.hpp"

namespace neurohome::control {

struct DeviceClass {
  int class_id = 0;
  std::string label;
  double frequency_hz = 0.0;
};

struct DeviceRecord {
  std::string device_id;
  bool powered = false;
};

// Stimulus LED cluster; only its flicker state is modelled.
struct LedCluster {
  double frequency_hz = 0.0;
  bool flickering = true;
};

using DeviceKey = std::pair<std::string, int>;  // (room_id, class_id)

// Rooms x device classes. Exactly one device and one LED cluster per
// (room, class); every LED flickers at its class frequency.
class HomeModel {
 public:
  // Device ids default to "<label>_<room>", with a leading "room_" dropped
  // from the room id (room_a + lamp -> lamp_a). `device_ids` overrides
  // individual entries; ids must stay unique.
  static HomeModel build(const std::vector<std::string>& rooms, const ssvep::StimulusTable& table,
                         const std::map<DeviceKey, std::string>& device_ids = {});

  const std::vector<std::string>& rooms() const noexcept { return rooms_; }
  const std::vector<DeviceClass>& classes() const noexcept { return classes_; }
  std::size_t device_count() const noexcept { return devices_.size(); }

  bool has_room(const std::string& room) const;
  bool has_class(int class_id) const;

  // Throw LookupError for unknown (room, class).
  const DeviceRecord& device(const std::string& room, int class_id) const;
  DeviceRecord& device(const std::string& room, int class_id);
  const LedCluster& led(const std::string& room, int class_id) const;
  LedCluster& led(const std::string& room, int class_id);

  const std::map<DeviceKey, DeviceRecord>& devices() const noexcept { return devices_; }
  const std::map<DeviceKey, LedCluster>& leds() const noexcept { return leds_; }

 private:
  std::vector<std::string> rooms_;
  std::vector<DeviceClass> classes_;
  std::map<DeviceKey, DeviceRecord> devices_;
  std::map<DeviceKey, LedCluster> leds_;
};

}  // namespace neurohome::control
