#include "uwsn/topology.hpp"

#include <cmath>

#include "uwsn/errors.hpp"
#include "uwsn/rng.hpp"

namespace uwsn {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Sensor: return "Sensor";
        case NodeKind::Auv: return "AUV";
        case NodeKind::Hub: return "Hub";
    }
    return "?";
}

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

int nearest_index(const Position& p, const std::vector<Position>& candidates) {
    int best = -1;
    double best_d = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double d = distance(p, candidates[i]);
        if (best < 0 || d < best_d) {
            best = static_cast<int>(i);
            best_d = d;
        }
    }
    return best;
}

void validate_counts(const NodeCounts& counts) {
    if (counts.sensors < 1) throw ConfigError("sensors", "sensors must be >= 1");
    if (counts.auvs < 0) throw ConfigError("auvs", "auvs must be >= 0");
    if (counts.hubs < 1) throw ConfigError("hubs", "hubs must be >= 1");
}

namespace {

std::vector<Position> positions_of(const std::vector<Node>& nodes) {
    std::vector<Position> out;
    out.reserve(nodes.size());
    for (const auto& n : nodes) out.push_back(n.position);
    return out;
}

void check_nodes(const std::vector<Node>& nodes, NodeKind kind, double field_size,
                 const char* field) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        if (n.kind != kind || n.id != static_cast<int>(i))
            throw ConfigError(field, std::string(field) + ": ids must be dense 0..count-1 in order");
        const auto& p = n.position;
        if (!(p.x >= 0.0 && p.x <= field_size && p.y >= 0.0 && p.y <= field_size))
            throw ConfigError(field, std::string(field) + "[" + std::to_string(i) +
                                         "] lies outside the field");
    }
}

std::vector<Node> draw_nodes(int count, NodeKind kind, double field_size, Rng rng) {
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double x = rng.uniform(0.0, field_size);
        const double y = rng.uniform(0.0, field_size);
        nodes.push_back(Node{i, kind, {x, y}});
    }
    return nodes;
}

}  // namespace

void Topology::validate() const {
    if (!(field_size > 0.0) || !std::isfinite(field_size))
        throw ConfigError("field_size", "field_size must be > 0");
    if (sensors.empty()) throw ConfigError("sensors", "sensors must be >= 1");
    if (hubs.empty()) throw ConfigError("hubs", "hubs must be >= 1");
    check_nodes(sensors, NodeKind::Sensor, field_size, "sensors");
    check_nodes(auvs, NodeKind::Auv, field_size, "auvs");
    check_nodes(hubs, NodeKind::Hub, field_size, "hubs");
    environment.validate();
}

std::vector<Position> Topology::sensor_positions() const { return positions_of(sensors); }
std::vector<Position> Topology::auv_positions() const { return positions_of(auvs); }
std::vector<Position> Topology::hub_positions() const { return positions_of(hubs); }

Topology random_deploy(const NodeCounts& counts, const Environment& env, double field_size,
                       std::uint64_t seed) {
    validate_counts(counts);
    if (!(field_size > 0.0) || !std::isfinite(field_size))
        throw ConfigError("field_size", "field_size must be > 0");
    env.validate();

    Topology t;
    t.field_size = field_size;
    t.seed = seed;
    t.environment = env;
    t.sensors = draw_nodes(counts.sensors, NodeKind::Sensor, field_size,
                           Rng::stream(seed, "deploy/sensors"));
    t.auvs = draw_nodes(counts.auvs, NodeKind::Auv, field_size, Rng::stream(seed, "deploy/auvs"));
    t.hubs = draw_nodes(counts.hubs, NodeKind::Hub, field_size, Rng::stream(seed, "deploy/hubs"));
    return t;
}

}  // namespace uwsn
