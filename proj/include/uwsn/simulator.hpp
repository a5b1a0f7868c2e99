#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uwsn/clustering.hpp"
#include "uwsn/physics.hpp"
#include "uwsn/topology.hpp"

namespace uwsn {

enum class Scenario { Initial, Leaderless, LeaderBased };

inline constexpr Scenario kAllScenarios[] = {Scenario::Initial, Scenario::Leaderless,
                                             Scenario::LeaderBased};

/// Machine name: "initial", "leaderless", "leader-based".
std::string_view to_string(Scenario s);
/// Row label used in route tables: "Initial", "No-Leader", "Leader".
std::string_view table_label(Scenario s);
/// Accepts the machine names plus a few aliases; throws ConfigError otherwise.
Scenario parse_scenario(std::string_view name);

struct NodeRef {
    NodeKind kind = NodeKind::Sensor;
    int id = 0;

    bool operator==(const NodeRef&) const = default;
    auto operator<=>(const NodeRef&) const = default;
};

struct Hop {
    NodeRef from;
    NodeRef to;
    LinkBudget budget;

    bool operator==(const Hop&) const = default;
};

struct Route {
    int source = 0;
    /// Set when a non-leader sensor forwards through its cluster leader.
    std::optional<int> leader;
    std::optional<int> auv;
    int hub = 0;
    std::vector<Hop> hops;

    /// Product of per-hop delivery probabilities.
    double delivery_prob() const;
    bool uses_auv() const { return auv.has_value(); }
    /// "Direct → Hub 1", "AUV 2 → Hub 1", "Leader 3 → AUV 2 → Hub 1", ...
    std::string describe() const;

    bool operator==(const Route&) const = default;
};

struct SimulationConfig {
    int packets_per_sensor = 50;
    int queue_capacity = 100;
    /// Per queued packet ahead of an arrival.
    double service_time_s = 0.0;
    /// Packets each relay forwards at the end of a round; 0 drains the queue every round.
    int service_per_round = 0;

    void validate() const;
    bool operator==(const SimulationConfig&) const = default;
};

struct RelayQueue {
    NodeRef owner;
    int capacity = 100;
    int occupancy = 0;
    int peak_occupancy = 0;
    int drops = 0;
    /// Occupancy after each round's arrivals, before service.
    std::vector<int> occupancy_trace;

    bool operator==(const RelayQueue&) const = default;
};

struct TransmissionRecord {
    int sensor_id = 0;
    Route route;
    int packets_sent = 0;
    int packets_delivered = 0;
    int packets_lost_channel = 0;
    int packets_dropped_queue = 0;
    double success_ratio = 0.0;
    /// Sum of end-to-end delays over delivered packets.
    double total_delay_s = 0.0;
    double mean_end_to_end_delay_s = 0.0;
    /// Attenuation of every hop attempted by this sensor's packets.
    double attenuation_expended_db = 0.0;

    bool operator==(const TransmissionRecord&) const = default;
};

struct ChannelSummary {
    double conductivity_s_per_m = 0.0;
    double attenuation_db_per_m = 0.0;
    double phase_velocity_m_per_s = 0.0;

    bool operator==(const ChannelSummary&) const = default;
};

ChannelSummary summarize_channel(const Environment& env);

struct SimulationReport {
    Scenario scenario = Scenario::Initial;
    std::uint64_t seed = 0;
    Environment environment;
    ChannelSummary channel;
    std::vector<TransmissionRecord> records;
    std::vector<RelayQueue> queues;
    int packets_sent = 0;
    int packets_delivered = 0;
    double success_rate = 0.0;
    /// AUV-relayed delivered packets over all delivered packets (0 when nothing arrived).
    double auv_usage_rate = 0.0;
    double mean_delay_s = 0.0;
    double total_attenuation_db = 0.0;
    std::optional<ClusterModel> clusters;

    bool operator==(const SimulationReport&) const = default;
};

/// Fills the aggregate fields of `report` from its records.
void aggregate_records(SimulationReport& report);

/// Route for one sensor under `scenario`. `clusters` is required for LeaderBased.
Route select_route(Scenario scenario, int sensor_id, const Topology& topology,
                   const ClusterModel* clusters, const DeliveryModel& delivery,
                   const Environment& env);

/// One seeded run: routes every sensor, then sends packets round-robin across sensors
/// (packet p of every sensor before packet p+1 of any), sampling each hop as an independent
/// Bernoulli trial and passing relays through bounded FIFO queues.
SimulationReport run_scenario(Scenario scenario, const Topology& topology,
                              const ClusterModel* clusters, const DeliveryModel& delivery,
                              const Environment& env, const SimulationConfig& cfg,
                              std::uint64_t seed);

}  // namespace uwsn
