#include "circpack/packing.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace circpack {

std::string Violation::describe() const {
    char buf[160];
    switch (kind) {
        case ViolationKind::parameter:
            return "parameter: " + detail;
        case ViolationKind::overlap:
            std::snprintf(buf, sizeof buf, "overlap: disks %d and %d, gap %.3e diameters", a, b, gap);
            return buf;
        case ViolationKind::wall:
            std::snprintf(buf, sizeof buf, "wall: disk %d protrudes, gap %.3e diameters", a, gap);
            return buf;
    }
    return "unknown";
}

std::vector<Violation> validate(const Packing& p, double tol) {
    std::vector<Violation> out;
    if (!(p.disk_radius > 0.0)) {
        out.push_back({ViolationKind::parameter, -1, -1, 0.0, "disk_radius must be positive"});
        return out;
    }
    if (!(p.container_radius > 0.0)) {
        out.push_back({ViolationKind::parameter, -1, -1, 0.0, "container_radius must be positive"});
        return out;
    }
    if (p.container_radius < p.disk_radius * (1.0 - tol)) {
        out.push_back({ViolationKind::parameter, -1, -1, 0.0, "container smaller than disk"});
        return out;
    }
    const double d = p.diameter();
    const int n = p.size();
    const double allowed = p.container_radius - p.disk_radius;
    for (int i = 0; i < n; ++i) {
        double gap = (allowed - p.centers[i].norm()) / d;
        if (gap < -tol) out.push_back({ViolationKind::wall, i, -1, gap, ""});
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double gap = dist(p.centers[i], p.centers[j]) / d - 1.0;
            if (gap < -tol) out.push_back({ViolationKind::overlap, i, j, gap, ""});
        }
    }
    return out;
}

bool is_valid(const Packing& p, double tol) { return validate(p, tol).empty(); }

Measurement measure(const Packing& p) {
    if (!(p.disk_radius > 0.0) || !(p.container_radius > 0.0))
        throw std::invalid_argument("measure: radii must be positive");
    if (p.container_radius < p.disk_radius)
        throw std::invalid_argument("measure: container smaller than disk");
    if (p.centers.empty())
        throw std::invalid_argument("measure: packing has no disks");
    double q = p.disk_radius / p.container_radius;
    return {static_cast<double>(p.size()) * q * q, 1.0 / q};
}

static void fmt_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

std::string packing_to_json(const Packing& p) {
    // written by hand so the number format (17 significant digits) is pinned
    std::string s;
    s.reserve(64 + 48 * p.centers.size());
    s += "{\n  \"container_radius\": ";
    fmt_double(s, p.container_radius);
    s += ",\n  \"disk_radius\": ";
    fmt_double(s, p.disk_radius);
    s += ",\n  \"centers\": [";
    for (size_t i = 0; i < p.centers.size(); ++i) {
        s += (i ? ",\n    [" : "\n    [");
        fmt_double(s, p.centers[i].x);
        s += ", ";
        fmt_double(s, p.centers[i].y);
        s += "]";
    }
    s += "\n  ],\n  \"metadata\": {";
    size_t i = 0;
    for (const auto& [key, value] : p.metadata) {
        s += (i++ ? ",\n    " : "\n    ");
        s += nlohmann::json(key).dump();
        s += ": ";
        s += nlohmann::json(value).dump();
    }
    s += p.metadata.empty() ? "}\n}\n" : "\n  }\n}\n";
    return s;
}

Packing packing_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Packing p;
    p.container_radius = j.at("container_radius").get<double>();
    p.disk_radius = j.at("disk_radius").get<double>();
    for (const auto& c : j.at("centers")) {
        if (!c.is_array() || c.size() != 2)
            throw std::invalid_argument("packing JSON: each center must be [x, y]");
        p.centers.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    if (j.contains("metadata")) {
        for (const auto& [key, value] : j.at("metadata").items())
            p.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    return p;
}

void write_packing(const Packing& p, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << packing_to_json(p);
    if (!f.good()) throw std::runtime_error("write failed: " + path);
}

Packing read_packing(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return packing_from_json(ss.str());
}

}  // namespace circpack
