#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "neurohome/session.hpp"

// JSON configuration for a session. Every section and key is optional;
// missing ones keep the SessionConfig defaults. Unknown keys are rejected.
namespace neurohome::io {

session::SessionConfig parse_config(const nlohmann::json& doc);

// Throws InvalidInput naming the path when the file cannot be read or parsed.
session::SessionConfig load_config(const std::filesystem::path& path);

}  // namespace neurohome::io
