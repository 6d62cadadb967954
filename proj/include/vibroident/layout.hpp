#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vibroident/types.hpp"

namespace vibroident {

struct Station {
    std::string id;
    Vec3 position = Vec3::Zero();  // m, relative to P0
    std::array<Vec3, 3> axes = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
};

struct SensorLayout {
    std::vector<Station> stations;
    std::map<std::string, std::vector<std::string>> groups;

    /// Throws ConfigError on duplicate ids, unknown group members or non-unit axes.
    void validate() const;
    const Station& station(const std::string& id) const;
    /// Channel label of a station axis, e.g. "T1a.x".
    static std::string channel(const std::string& station_id, int axis);
};

inline constexpr const char* kAxisNames[3] = {"x", "y", "z"};

SensorLayout layout_from_json(const nlohmann::json& j);
nlohmann::json layout_to_json(const SensorLayout& layout);
SensorLayout load_layout(const std::string& path);

nlohmann::json load_json(const std::string& path);
Vec3 vec3_from_json(const nlohmann::json& j);
nlohmann::json vec3_to_json(const Vec3& v);

} // namespace vibroident
