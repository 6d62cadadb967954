#include "vibroident/layout.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "vibroident/errors.hpp"

namespace vibroident {

const char* to_string(Dof dof) {
    switch (dof) {
    case Dof::X: return "X";
    case Dof::Y: return "Y";
    case Dof::Z: return "Z";
    case Dof::Yaw: return "Yaw";
    }
    return "?";
}

Dof dof_from_string(const std::string& s) {
    if (s == "X" || s == "x") return Dof::X;
    if (s == "Y" || s == "y") return Dof::Y;
    if (s == "Z" || s == "z") return Dof::Z;
    if (s == "Yaw" || s == "yaw" || s == "YAW") return Dof::Yaw;
    throw ConfigError("unknown DOF '" + s + "'");
}

void SensorLayout::validate() const {
    std::set<std::string> ids;
    for (const auto& s : stations) {
        if (!ids.insert(s.id).second) throw ConfigError("duplicate station id '" + s.id + "'");
        for (const auto& a : s.axes)
            if (std::abs(a.norm() - 1.0) > 1e-9) throw ConfigError("station '" + s.id + "' has a non-unit axis");
    }
    for (const auto& [name, members] : groups)
        for (const auto& m : members)
            if (!ids.count(m)) throw ConfigError("group '" + name + "' names unknown station '" + m + "'");
}

const Station& SensorLayout::station(const std::string& id) const {
    for (const auto& s : stations)
        if (s.id == id) return s;
    throw ConfigError("unknown station '" + id + "'");
}

std::string SensorLayout::channel(const std::string& station_id, int axis) {
    return station_id + "." + kAxisNames[axis];
}

Vec3 vec3_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-vector, got " + j.dump());
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

nlohmann::json vec3_to_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

SensorLayout layout_from_json(const nlohmann::json& j) {
    SensorLayout layout;
    try {
        for (const auto& s : j.at("stations")) {
            Station st;
            st.id = s.at("id").get<std::string>();
            st.position = vec3_from_json(s.at("pos"));
            if (s.contains("axes")) {
                const auto& ax = s.at("axes");
                if (ax.size() != 3) throw ConfigError("station '" + st.id + "' needs 3 axes");
                for (int k = 0; k < 3; ++k) st.axes[k] = vec3_from_json(ax[k]);
            }
            layout.stations.push_back(st);
        }
        if (j.contains("groups"))
            for (const auto& [name, members] : j.at("groups").items())
                layout.groups[name] = members.get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("layout: ") + e.what());
    }
    layout.validate();
    return layout;
}

nlohmann::json layout_to_json(const SensorLayout& layout) {
    nlohmann::json j;
    j["stations"] = nlohmann::json::array();
    for (const auto& s : layout.stations) {
        nlohmann::json axes = nlohmann::json::array();
        for (const auto& a : s.axes) axes.push_back(vec3_to_json(a));
        j["stations"].push_back({{"id", s.id}, {"pos", vec3_to_json(s.position)}, {"axes", axes}});
    }
    j["groups"] = layout.groups;
    return j;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("'" + path + "': " + e.what());
    }
}

SensorLayout load_layout(const std::string& path) { return layout_from_json(load_json(path)); }

} // namespace vibroident
