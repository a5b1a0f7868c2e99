#include <doctest.h>

#include "uwsn/errors.hpp"
#include "uwsn/io.hpp"
#include "uwsn/rng.hpp"
#include "uwsn/topology.hpp"

using namespace uwsn;

TEST_CASE("random deployment is seed-deterministic") {
    const NodeCounts c{10, 5, 2};
    const auto a = random_deploy(c, Environment{}, 100.0, 42);
    const auto b = random_deploy(c, Environment{}, 100.0, 42);
    CHECK(a == b);
    CHECK(json(a).dump() == json(b).dump());
    CHECK(random_deploy(c, Environment{}, 100.0, 43) != a);
}

TEST_CASE("deployment stays inside the field and has dense ids") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = random_deploy({10, 5, 2}, Environment{}, 100.0, seed);
        CHECK_NOTHROW(t.validate());
        CHECK(t.sensors.size() == 10);
        CHECK(t.auvs.size() == 5);
        CHECK(t.hubs.size() == 2);
        for (const auto* nodes : {&t.sensors, &t.auvs, &t.hubs})
            for (std::size_t i = 0; i < nodes->size(); ++i) {
                const auto& n = (*nodes)[i];
                CHECK(n.id == static_cast<int>(i));
                CHECK(n.position.x >= 0.0);
                CHECK(n.position.x <= 100.0);
                CHECK(n.position.y >= 0.0);
                CHECK(n.position.y <= 100.0);
            }
    }
}

TEST_CASE("minimal and invalid counts") {
    const auto t = random_deploy({1, 0, 1}, Environment{}, 100.0, 1);
    CHECK_NOTHROW(t.validate());
    CHECK(t.auvs.empty());
    CHECK_THROWS_AS(random_deploy({0, 0, 1}, Environment{}, 100.0, 1), ConfigError);
    try {
        random_deploy({3, 1, 0}, Environment{}, 100.0, 1);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "hubs");
    }
}

TEST_CASE("AUV count does not disturb sensor and hub layouts") {
    const auto a = random_deploy({10, 10, 2}, Environment{}, 100.0, 9);
    const auto b = random_deploy({10, 2, 2}, Environment{}, 100.0, 9);
    CHECK(a.sensors == b.sensors);
    CHECK(a.hubs == b.hubs);
}

TEST_CASE("distance is a metric") {
    CHECK(distance({0, 0}, {3, 4}) == 5.0);
    CHECK(distance({7.5, 2}, {7.5, 2}) == 0.0);
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const Position a{rng.uniform(0, 100), rng.uniform(0, 100)};
        const Position b{rng.uniform(0, 100), rng.uniform(0, 100)};
        const Position c{rng.uniform(0, 100), rng.uniform(0, 100)};
        CHECK(distance(a, b) == distance(b, a));
        CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
        CHECK(distance(a, b) >= 0.0);
    }
}

TEST_CASE("nearest index breaks ties toward the lowest index") {
    const std::vector<Position> cands{{10, 0}, {-10, 0}, {0, 10}};
    CHECK(nearest_index({0, 0}, cands) == 0);
    CHECK(nearest_index({0, 9}, cands) == 2);
    CHECK(nearest_index({0, 0}, {}) == -1);
}

TEST_CASE("topology validation rejects bad layouts") {
    auto t = random_deploy({3, 1, 1}, Environment{}, 100.0, 5);
    auto out = t;
    out.sensors[1].position.x = 100.5;
    CHECK_THROWS_AS(out.validate(), ConfigError);
    auto ids = t;
    ids.hubs[0].id = 4;
    CHECK_THROWS_AS(ids.validate(), ConfigError);
}

TEST_CASE("topology JSON round trip") {
    auto t = random_deploy({4, 2, 2}, Environment{12.0, 30.0, 2e5, std::nullopt}, 80.0, 11);
    const json j = t;
    CHECK(j.at("field_size") == 80.0);
    CHECK(j.at("environment").at("salinity_psu") == 30.0);
    CHECK(j.at("sensors").size() == 4);
    CHECK(j.at("sensors")[0].contains("id"));
    CHECK(j.get<Topology>() == t);
    CHECK(json(j.get<Topology>()).dump() == j.dump());

    t.environment.pinned_conductivity_s_per_m = 4.0;
    CHECK(json(t).get<Topology>() == t);
}
