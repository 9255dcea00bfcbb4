#pragma once

#include <json.hpp>

#include "heis/isometry.hpp"
#include "heis/point.hpp"

namespace heis {

// Points travel as JSON arrays [x, y, t]; isometries as
// {"w": [x,y,t], "theta": theta, "m": m}.

inline void to_json(nlohmann::json& j, const Point& p) { j = {p.x, p.y, p.t}; }

inline void from_json(const nlohmann::json& j, Point& p) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("point JSON must be an array [x, y, t]");
    p.x = j.at(0).get<double>();
    p.y = j.at(1).get<double>();
    p.t = j.at(2).get<double>();
}

inline void to_json(nlohmann::json& j, const IsometryDescriptor& g) {
    j = {{"w", g.w}, {"theta", g.theta}, {"m", g.m}};
}

inline void from_json(const nlohmann::json& j, IsometryDescriptor& g) {
    g.w = j.at("w").get<Point>();
    g.theta = j.at("theta").get<double>();
    g.m = j.at("m").get<int>();
    if (g.m != 0 && g.m != 1)
        throw std::invalid_argument("isometry JSON: m must be 0 or 1");
}

}  // namespace heis
