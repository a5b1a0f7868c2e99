#include "uwsn/simulator.hpp"

#include <algorithm>
#include <map>

#include "uwsn/errors.hpp"
#include "uwsn/rng.hpp"

namespace uwsn {

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::Initial: return "initial";
        case Scenario::Leaderless: return "leaderless";
        case Scenario::LeaderBased: return "leader-based";
    }
    return "?";
}

std::string_view table_label(Scenario s) {
    switch (s) {
        case Scenario::Initial: return "Initial";
        case Scenario::Leaderless: return "No-Leader";
        case Scenario::LeaderBased: return "Leader";
    }
    return "?";
}

Scenario parse_scenario(std::string_view name) {
    if (name == "initial") return Scenario::Initial;
    if (name == "leaderless" || name == "no-leader") return Scenario::Leaderless;
    if (name == "leader-based" || name == "leader" || name == "leader_based")
        return Scenario::LeaderBased;
    throw ConfigError("scenario", "unknown scenario '" + std::string(name) +
                                      "' (expected initial, leaderless or leader-based)");
}

double Route::delivery_prob() const {
    double p = 1.0;
    for (const auto& h : hops) p *= h.budget.delivery_prob;
    return p;
}

std::string Route::describe() const {
    std::string s;
    if (leader) s += "Leader " + std::to_string(*leader) + " → ";
    if (auv)
        s += "AUV " + std::to_string(*auv) + " → ";
    else if (!leader)
        s += "Direct → ";
    s += "Hub " + std::to_string(hub);
    return s;
}

void SimulationConfig::validate() const {
    if (packets_per_sensor < 1)
        throw ConfigError("packets_per_sensor", "packets_per_sensor must be >= 1");
    if (queue_capacity < 0) throw ConfigError("queue_capacity", "queue_capacity must be >= 0");
    if (!(service_time_s >= 0.0)) throw ConfigError("service_time_s", "service_time_s must be >= 0");
    if (service_per_round < 0)
        throw ConfigError("service_per_round", "service_per_round must be >= 0");
}

ChannelSummary summarize_channel(const Environment& env) {
    ChannelSummary c;
    c.conductivity_s_per_m = physics::conductivity(env);
    if (c.conductivity_s_per_m > 0.0) {
        c.attenuation_db_per_m = physics::attenuation_coefficient(env);
        c.phase_velocity_m_per_s = physics::phase_velocity(env);
    }
    return c;
}

namespace {

Position position_of(const Topology& t, NodeRef ref) {
    const auto i = static_cast<std::size_t>(ref.id);
    switch (ref.kind) {
        case NodeKind::Sensor: return t.sensors.at(i).position;
        case NodeKind::Auv: return t.auvs.at(i).position;
        case NodeKind::Hub: return t.hubs.at(i).position;
    }
    return {};
}

Hop make_hop(const Topology& t, NodeRef from, NodeRef to, const DeliveryModel& delivery,
             const Environment& env) {
    const double d = distance(position_of(t, from), position_of(t, to));
    return Hop{from, to, physics::link_budget(env, delivery, d, from.kind == NodeKind::Auv)};
}

struct Forwarding {
    std::optional<int> auv;
    int hub = 0;
    std::vector<Hop> hops;
};

// Best of (direct to nearest hub) and (nearest AUV, then that AUV's nearest hub) by
// end-to-end delivery probability; ties keep the direct link.
Forwarding forward_from(const Topology& t, NodeRef from, const DeliveryModel& delivery,
                        const Environment& env) {
    const auto hubs = t.hub_positions();
    const Position p = position_of(t, from);

    Forwarding direct;
    direct.hub = nearest_index(p, hubs);
    direct.hops.push_back(make_hop(t, from, {NodeKind::Hub, direct.hub}, delivery, env));
    if (t.auvs.empty()) return direct;

    const int a = nearest_index(p, t.auv_positions());
    const NodeRef auv{NodeKind::Auv, a};
    Forwarding relayed;
    relayed.auv = a;
    relayed.hub = nearest_index(t.auvs[static_cast<std::size_t>(a)].position, hubs);
    relayed.hops.push_back(make_hop(t, from, auv, delivery, env));
    relayed.hops.push_back(make_hop(t, auv, {NodeKind::Hub, relayed.hub}, delivery, env));

    auto product = [](const Forwarding& f) {
        double q = 1.0;
        for (const auto& h : f.hops) q *= h.budget.delivery_prob;
        return q;
    };
    return product(relayed) > product(direct) ? relayed : direct;
}

}  // namespace

Route select_route(Scenario scenario, int sensor_id, const Topology& topology,
                   const ClusterModel* clusters, const DeliveryModel& delivery,
                   const Environment& env) {
    if (topology.hubs.empty()) throw ConfigError("hubs", "hubs must be >= 1");
    if (sensor_id < 0 || static_cast<std::size_t>(sensor_id) >= topology.sensors.size())
        throw ConfigError("sensor_id", "sensor id out of range");

    Route r;
    r.source = sensor_id;
    const NodeRef self{NodeKind::Sensor, sensor_id};

    auto adopt = [&r](Forwarding f) {
        r.auv = f.auv;
        r.hub = f.hub;
        r.hops.insert(r.hops.end(), f.hops.begin(), f.hops.end());
    };

    switch (scenario) {
        case Scenario::Initial: {
            const int hub = nearest_index(topology.sensors[static_cast<std::size_t>(sensor_id)].position,
                                          topology.hub_positions());
            r.hub = hub;
            r.hops.push_back(make_hop(topology, self, {NodeKind::Hub, hub}, delivery, env));
            break;
        }
        case Scenario::Leaderless:
            adopt(forward_from(topology, self, delivery, env));
            break;
        case Scenario::LeaderBased: {
            if (!clusters) throw ConfigError("clusters", "leader-based routing requires a cluster model");
            if (clusters->assignment.size() != topology.sensors.size())
                throw ConfigError("clusters", "cluster model does not match the topology");
            const int leader = clusters->leader_of(sensor_id);
            if (leader < 0) throw ConfigError("clusters", "sensor's cluster has no leader");
            if (leader == sensor_id) {
                adopt(forward_from(topology, self, delivery, env));
            } else {
                const NodeRef lead{NodeKind::Sensor, leader};
                r.leader = leader;
                r.hops.push_back(make_hop(topology, self, lead, delivery, env));
                adopt(forward_from(topology, lead, delivery, env));
            }
            break;
        }
    }
    return r;
}

void aggregate_records(SimulationReport& report) {
    int sent = 0;
    int delivered = 0;
    int auv_delivered = 0;
    double delay = 0.0;
    double attenuation = 0.0;
    for (const auto& rec : report.records) {
        sent += rec.packets_sent;
        delivered += rec.packets_delivered;
        if (rec.route.uses_auv()) auv_delivered += rec.packets_delivered;
        delay += rec.total_delay_s;
        attenuation += rec.attenuation_expended_db;
    }
    report.packets_sent = sent;
    report.packets_delivered = delivered;
    report.success_rate = sent > 0 ? static_cast<double>(delivered) / sent : 0.0;
    report.auv_usage_rate = delivered > 0 ? static_cast<double>(auv_delivered) / delivered : 0.0;
    report.mean_delay_s = delivered > 0 ? delay / delivered : 0.0;
    report.total_attenuation_db = attenuation;
}

SimulationReport run_scenario(Scenario scenario, const Topology& topology,
                              const ClusterModel* clusters, const DeliveryModel& delivery,
                              const Environment& env, const SimulationConfig& cfg,
                              std::uint64_t seed) {
    topology.validate();
    env.validate();
    delivery.validate();
    cfg.validate();

    SimulationReport report;
    report.scenario = scenario;
    report.seed = seed;
    report.environment = env;
    report.channel = summarize_channel(env);
    if (clusters) report.clusters = *clusters;

    const std::size_t n = topology.sensors.size();
    report.records.resize(n);
    std::map<NodeRef, RelayQueue> queues;
    for (std::size_t s = 0; s < n; ++s) {
        auto& rec = report.records[s];
        rec.sensor_id = static_cast<int>(s);
        rec.route = select_route(scenario, static_cast<int>(s), topology, clusters, delivery, env);
        for (const auto& h : rec.route.hops)
            if (h.to.kind != NodeKind::Hub && !queues.contains(h.to)) {
                RelayQueue q;
                q.owner = h.to;
                q.capacity = cfg.queue_capacity;
                queues.emplace(h.to, std::move(q));
            }
    }

    // Scenario-independent stream: identical routes consume identical draws.
    Rng rng = Rng::stream(seed, "packets");
    for (int round = 0; round < cfg.packets_per_sensor; ++round) {
        for (auto& rec : report.records) {
            ++rec.packets_sent;
            double delay = 0.0;
            bool delivered = true;
            for (const auto& hop : rec.route.hops) {
                rec.attenuation_expended_db += hop.budget.attenuation_db;
                if (!rng.bernoulli(hop.budget.delivery_prob)) {
                    ++rec.packets_lost_channel;
                    delivered = false;
                    break;
                }
                delay += hop.budget.delay_s;
                if (hop.to.kind == NodeKind::Hub) continue;
                auto& q = queues.at(hop.to);
                if (q.occupancy >= q.capacity) {
                    ++q.drops;
                    ++rec.packets_dropped_queue;
                    delivered = false;
                    break;
                }
                delay += q.occupancy * cfg.service_time_s;
                ++q.occupancy;
                q.peak_occupancy = std::max(q.peak_occupancy, q.occupancy);
            }
            if (delivered) {
                ++rec.packets_delivered;
                rec.total_delay_s += delay;
            }
        }
        for (auto& [ref, q] : queues) {
            q.occupancy_trace.push_back(q.occupancy);
            q.occupancy = cfg.service_per_round == 0
                              ? 0
                              : q.occupancy - std::min(q.occupancy, cfg.service_per_round);
        }
    }

    for (auto& rec : report.records) {
        rec.success_ratio = static_cast<double>(rec.packets_delivered) / rec.packets_sent;
        rec.mean_end_to_end_delay_s =
            rec.packets_delivered > 0 ? rec.total_delay_s / rec.packets_delivered : 0.0;
    }
    for (auto& [ref, q] : queues) report.queues.push_back(std::move(q));
    aggregate_records(report);
    return report;
}

}  // namespace uwsn
