#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmedian/metric_space.hpp"

namespace qmedian {

/// Instance files carry either a Euclidean point list or the strict lower
/// triangle of a distance table:
///   {"kind":"euclidean","n":3,"dim":2,"points":[[x,y],...]}
///   {"kind":"matrix","n":4,"dist_lower_triangle":[d10,d20,d21,d30,...]}
/// Files with both or neither payload are rejected.
inline MetricSpace instance_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("instance: top level must be an object");
    const std::string kind = j.at("kind").get<std::string>();
    const auto n = j.at("n").get<std::size_t>();
    if (n == 0) throw std::invalid_argument("instance: n must be >= 1");

    const bool has_points = j.contains("points");
    const bool has_tri = j.contains("dist_lower_triangle");
    if (has_points == has_tri)
        throw std::invalid_argument("instance: exactly one of points/dist_lower_triangle required");

    if (kind == "euclidean") {
        if (!has_points) throw std::invalid_argument("instance: euclidean kind requires points");
        const auto dim = j.at("dim").get<std::size_t>();
        auto points = j.at("points").get<std::vector<std::vector<double>>>();
        if (points.size() != n) throw std::invalid_argument("instance: points size != n");
        for (const auto& p : points)
            for (double c : p)
                if (!std::isfinite(c)) throw std::invalid_argument("instance: non-finite coordinate");
        return MetricSpace::from_points(dim, std::move(points));
    }
    if (kind == "matrix") {
        if (!has_tri) throw std::invalid_argument("instance: matrix kind requires dist_lower_triangle");
        auto tri = j.at("dist_lower_triangle").get<std::vector<double>>();
        for (double d : tri)
            if (!std::isfinite(d)) throw std::invalid_argument("instance: non-finite distance");
        return MetricSpace::from_lower_triangle(n, tri);
    }
    throw std::invalid_argument("instance: kind must be 'matrix' or 'euclidean'");
}

inline nlohmann::json instance_to_json(const MetricSpace& m) {
    nlohmann::json j;
    j["n"] = m.size();
    if (m.euclidean()) {
        j["kind"] = "euclidean";
        j["dim"] = m.dim();
        j["points"] = m.points();
    } else {
        j["kind"] = "matrix";
        j["dist_lower_triangle"] = m.lower_triangle();
    }
    return j;
}

inline MetricSpace read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open instance file: " + path);
    nlohmann::json j;
    in >> j;
    return instance_from_json(j);
}

inline void write_instance_file(const std::string& path, const MetricSpace& m) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << instance_to_json(m).dump() << '\n';
}

} // namespace qmedian
