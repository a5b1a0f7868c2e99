#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uwsn/topology.hpp"

namespace uwsn {

struct KMeansConfig {
    /// Cluster count; unset means "number of AUVs" (clamped to [1, sensors]).
    std::optional<int> k;
    int max_iters = 100;
    double tol = 1e-6;
    /// Independent seeded initializations; the lowest final inertia wins.
    int restarts = 3;

    void validate() const;

    bool operator==(const KMeansConfig&) const = default;
};

struct ClusterModel {
    int k = 0;
    /// assignment[sensor_id] = cluster index.
    std::vector<int> assignment;
    std::vector<Position> centroids;
    /// leaders[cluster] = sensor id, or -1 for an empty cluster.
    std::vector<int> leaders;
    double inertia = 0.0;
    /// Inertia after each Lloyd iteration of the winning restart.
    std::vector<double> inertia_history;

    std::vector<int> members(int cluster) const;
    bool is_leader(int sensor_id) const;
    int leader_of(int sensor_id) const { return leaders.at(static_cast<std::size_t>(assignment.at(static_cast<std::size_t>(sensor_id)))); }

    bool operator==(const ClusterModel&) const = default;
};

/// Sum of squared distances from each point to its assigned centroid.
double inertia(const std::vector<Position>& points, const std::vector<int>& assignment,
               const std::vector<Position>& centroids);

/// Lloyd's algorithm from distance-weighted (k-means++) seeding. Throws ConfigError for
/// k outside [1, points.size()]. Leaders are left unset; see elect_leaders.
ClusterModel kmeans(const std::vector<Position>& points, int k, std::uint64_t seed,
                    int max_iters = 100, double tol = 1e-6, int restarts = 3);

/// Leader of each non-empty cluster is the member nearest its centroid; ties go to the
/// lowest sensor id. Empty clusters get -1.
ClusterModel elect_leaders(ClusterModel model, const std::vector<Position>& points);

/// k to use for `topology` under `cfg`.
int resolve_k(const KMeansConfig& cfg, const Topology& topology);

/// kmeans + elect_leaders on the topology's sensors, seeded from its "kmeans" stream.
ClusterModel cluster_sensors(const Topology& topology, const KMeansConfig& cfg, std::uint64_t seed);

}  // namespace uwsn
