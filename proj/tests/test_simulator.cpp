#include <doctest.h>

#include <cmath>

#include "uwsn/errors.hpp"
#include "uwsn/simulator.hpp"

using namespace uwsn;

namespace {

Topology layout(std::vector<Position> sensors, std::vector<Position> auvs, std::vector<Position> hubs) {
    Topology t;
    auto fill = [](std::vector<Node>& out, const std::vector<Position>& ps, NodeKind kind) {
        for (std::size_t i = 0; i < ps.size(); ++i) out.push_back({static_cast<int>(i), kind, ps[i]});
    };
    fill(t.sensors, sensors, NodeKind::Sensor);
    fill(t.auvs, auvs, NodeKind::Auv);
    fill(t.hubs, hubs, NodeKind::Hub);
    return t;
}

// A delivery model whose every link succeeds (or fails) with certainty.
const DeliveryModel kPerfect{1.0, 1e9};
const DeliveryModel kDead{1.0, -1e9};
// Steep threshold at 600 dB: hops under ~40 m are certain, a 56 m direct hop is hopeless.
const DeliveryModel kRelayOnly{1.0, 600.0};

}  // namespace

TEST_CASE("scenario names") {
    for (auto s : kAllScenarios) CHECK(parse_scenario(to_string(s)) == s);
    CHECK(table_label(Scenario::Leaderless) == "No-Leader");
    CHECK(parse_scenario("leader_based") == Scenario::LeaderBased);
    CHECK_THROWS_AS(parse_scenario("bogus"), ConfigError);
}

TEST_CASE("initial routes are always direct") {
    const auto t = random_deploy({10, 5, 2}, Environment{}, 100.0, 4);
    const auto d = DeliveryModel::calibrated_default();
    for (int s = 0; s < 10; ++s) {
        const auto r = select_route(Scenario::Initial, s, t, nullptr, d, t.environment);
        CHECK(r.hops.size() == 1);
        CHECK_FALSE(r.uses_auv());
        CHECK(r.describe().rfind("Direct", 0) == 0);
    }
}

TEST_CASE("a sensor sitting on a hub routes direct") {
    const auto t = layout({{50, 50}}, {{20, 20}}, {{50, 50}});
    const auto r = select_route(Scenario::Leaderless, 0, t, nullptr, DeliveryModel::calibrated_default(), t.environment);
    CHECK_FALSE(r.uses_auv());
    CHECK(r.delivery_prob() == doctest::Approx(1.0));
    CHECK(r.describe() == "Direct → Hub 0");
}

TEST_CASE("an AUV halfway to a distant hub is preferred in a lossy channel") {
    const auto t = layout({{0, 50}}, {{30, 50}}, {{60, 50}});
    const auto r = select_route(Scenario::Leaderless, 0, t, nullptr, DeliveryModel::calibrated_default(), t.environment);
    CHECK(r.uses_auv());
    CHECK(r.hops.size() == 2);
    CHECK(r.describe() == "AUV 0 → Hub 0");
}

TEST_CASE("leader-based routes go through the cluster leader") {
    const auto t = layout({{0, 50}, {5, 50}}, {{30, 50}}, {{60, 50}});
    ClusterModel m;
    m.k = 1;
    m.assignment = {0, 0};
    m.centroids = {{2.5, 50}};
    m.leaders = {1};
    const auto d = DeliveryModel::calibrated_default();
    const auto r0 = select_route(Scenario::LeaderBased, 0, t, &m, d, t.environment);
    CHECK(r0.leader == 1);
    CHECK(r0.hops.size() == 3);
    CHECK(r0.describe() == "Leader 1 → AUV 0 → Hub 0");
    const auto r1 = select_route(Scenario::LeaderBased, 1, t, &m, d, t.environment);
    CHECK_FALSE(r1.leader.has_value());
    CHECK_THROWS_AS(select_route(Scenario::LeaderBased, 0, t, nullptr, d, t.environment), ConfigError);
}

TEST_CASE("perfect and dead channels") {
    const auto t = random_deploy({10, 5, 2}, Environment{}, 100.0, 1);
    SimulationConfig cfg;
    const auto ok = run_scenario(Scenario::Leaderless, t, nullptr, kPerfect, t.environment, cfg, 3);
    CHECK(ok.success_rate == 1.0);
    CHECK(ok.packets_delivered == 500);
    const auto dead = run_scenario(Scenario::Leaderless, t, nullptr, kDead, t.environment, cfg, 3);
    CHECK(dead.success_rate == 0.0);
    CHECK(dead.auv_usage_rate == 0.0);
    CHECK(dead.mean_delay_s == 0.0);
}

TEST_CASE("single-hop delivery counts follow the binomial law") {
    // sensor 30 m from the hub under the calibrated default: p = 0.5 exactly
    const auto t = layout({{20, 50}}, {}, {{50, 50}});
    const auto d = DeliveryModel::calibrated_default();
    const double p = select_route(Scenario::Initial, 0, t, nullptr, d, t.environment).delivery_prob();
    CHECK(p == doctest::Approx(0.5).epsilon(1e-9));
    const int runs = 1000, n = 50;
    double sum = 0, sq = 0;
    for (int s = 0; s < runs; ++s) {
        const auto r = run_scenario(Scenario::Initial, t, nullptr, d, t.environment, {}, static_cast<std::uint64_t>(s));
        sum += r.packets_delivered;
        sq += double(r.packets_delivered) * r.packets_delivered;
    }
    const double mean = sum / runs;
    const double var = sq / runs - mean * mean;
    CHECK(std::abs(mean - n * p) <= 3.0 * std::sqrt(n * p * (1 - p) / runs));
    CHECK(var == doctest::Approx(n * p * (1 - p)).epsilon(0.15));
}

TEST_CASE("multi-hop success approaches the product of hop probabilities") {
    const auto t = layout({{0, 50}}, {{28, 50}}, {{56, 50}});
    const auto d = DeliveryModel::calibrated_default();
    const auto route = select_route(Scenario::Leaderless, 0, t, nullptr, d, t.environment);
    REQUIRE(route.uses_auv());
    const double q = route.hops[0].budget.delivery_prob * route.hops[1].budget.delivery_prob;
    CHECK(route.delivery_prob() == doctest::Approx(q).epsilon(1e-12));
    int sent = 0, got = 0;
    for (int s = 0; s < 400; ++s) {
        const auto r = run_scenario(Scenario::Leaderless, t, nullptr, d, t.environment, {}, static_cast<std::uint64_t>(s));
        sent += r.packets_sent;
        got += r.packets_delivered;
    }
    const double rate = double(got) / sent;
    CHECK(std::abs(rate - q) <= 4.0 * std::sqrt(q * (1 - q) / sent));
}

TEST_CASE("packets are conserved and reports are deterministic") {
    const auto t = random_deploy({10, 5, 2}, Environment{}, 100.0, 8);
    const auto m = elect_leaders(kmeans(t.sensor_positions(), 5, 1), t.sensor_positions());
    const auto d = DeliveryModel::calibrated_default();
    for (auto s : kAllScenarios) {
        const auto a = run_scenario(s, t, &m, d, t.environment, {}, 11);
        CHECK(a == run_scenario(s, t, &m, d, t.environment, {}, 11));
        CHECK(a.packets_sent == 500);
        for (const auto& rec : a.records) {
            CHECK(rec.packets_sent == 50);
            CHECK(rec.packets_delivered + rec.packets_lost_channel + rec.packets_dropped_queue == rec.packets_sent);
            CHECK(rec.success_ratio == doctest::Approx(rec.packets_delivered / 50.0));
        }
        if (s == Scenario::Initial) {
            CHECK(a.auv_usage_rate == 0.0);
            CHECK(a.queues.empty());
        }
    }
}

TEST_CASE("small relay queues drop packets") {
    // five sensors share one AUV that forwards a single packet per round
    const auto t = layout({{0, 50}, {0, 52}, {0, 48}, {2, 50}, {1, 51}}, {{28, 50}}, {{56, 50}});
    SimulationConfig cfg;
    cfg.queue_capacity = 2;
    cfg.service_per_round = 1;
    const auto r = run_scenario(Scenario::Leaderless, t, nullptr, kRelayOnly, t.environment, cfg, 1);
    REQUIRE(r.queues.size() == 1);
    CHECK(r.queues[0].drops > 0);
    CHECK(r.queues[0].peak_occupancy <= 2);
    int dropped = 0;
    for (const auto& rec : r.records) dropped += rec.packets_dropped_queue;
    CHECK(dropped == r.queues[0].drops);
    CHECK(r.packets_delivered + dropped == r.packets_sent);

    SimulationConfig roomy;
    const auto ok = run_scenario(Scenario::Leaderless, t, nullptr, kRelayOnly, t.environment, roomy, 1);
    CHECK(ok.queues[0].drops == 0);
}

TEST_CASE("queueing adds waiting delay") {
    const auto t = layout({{0, 50}, {0, 52}}, {{28, 50}}, {{56, 50}});
    SimulationConfig cfg;
    cfg.service_time_s = 0.01;
    const auto slow = run_scenario(Scenario::Leaderless, t, nullptr, kRelayOnly, t.environment, cfg, 1);
    const auto fast = run_scenario(Scenario::Leaderless, t, nullptr, kRelayOnly, t.environment, {}, 1);
    CHECK(slow.mean_delay_s > fast.mean_delay_s);
    // the second sensor in each round waits behind one packet
    CHECK(slow.records[1].mean_end_to_end_delay_s ==
          doctest::Approx(fast.records[1].mean_end_to_end_delay_s + 0.01).epsilon(1e-9));
}

TEST_CASE("simulation config validation") {
    SimulationConfig c;
    c.packets_per_sensor = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.queue_capacity = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.service_time_s = -0.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
