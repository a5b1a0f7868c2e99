#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uwsn/physics.hpp"

namespace uwsn {

inline constexpr double kDefaultFieldSize = 100.0;

struct Position {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Position&) const = default;
};

enum class NodeKind { Sensor, Auv, Hub };

std::string_view to_string(NodeKind kind);

struct Node {
    int id = 0;
    NodeKind kind = NodeKind::Sensor;
    Position position;

    bool operator==(const Node&) const = default;
};

struct NodeCounts {
    int sensors = 10;
    int auvs = 5;
    int hubs = 2;

    bool operator==(const NodeCounts&) const = default;
};

/// A deployed network: node ids are dense 0..count-1 within each kind.
struct Topology {
    double field_size = kDefaultFieldSize;
    std::uint64_t seed = 0;
    Environment environment;
    std::vector<Node> sensors;
    std::vector<Node> auvs;
    std::vector<Node> hubs;

    /// Throws ConfigError on empty sensor/hub sets, non-dense ids, or out-of-field nodes.
    void validate() const;

    std::vector<Position> sensor_positions() const;
    std::vector<Position> auv_positions() const;
    std::vector<Position> hub_positions() const;

    bool operator==(const Topology&) const = default;
};

double distance(const Position& a, const Position& b);

/// Index of the position in `candidates` nearest to `p`; ties go to the lowest index.
/// Returns -1 for an empty candidate list.
int nearest_index(const Position& p, const std::vector<Position>& candidates);

void validate_counts(const NodeCounts& counts);

/// Independent uniform positions over [0, field_size]^2. Sensors, AUVs and hubs draw from
/// separate seeded streams, so changing the AUV count leaves sensor and hub layouts unchanged.
Topology random_deploy(const NodeCounts& counts, const Environment& env, double field_size,
                       std::uint64_t seed);

}  // namespace uwsn
