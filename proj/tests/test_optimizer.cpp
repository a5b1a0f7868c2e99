#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "uwsn/errors.hpp"
#include "uwsn/optimizer.hpp"

using namespace uwsn;

namespace {

Genome genome(std::initializer_list<double> c) { return Genome{std::vector<double>(c)}; }

bool non_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) return false;
    return true;
}

}  // namespace

TEST_CASE("geometric cost on a hand-computed layout") {
    // nodes (0,0) and (3,4), hub at (0,0): 2*5 + 0 + 5
    const std::vector<Position> hubs{{0, 0}};
    CHECK(geometric_cost(genome({0, 0, 3, 4}), hubs) == doctest::Approx(15.0));
    // same-label-only pairs drop the pair term when labels differ
    const std::vector<int> labels{0, 1};
    CHECK(geometric_cost(genome({0, 0, 3, 4}), hubs, labels) == doctest::Approx(5.0));
}

TEST_CASE("geometric cost is invariant under node permutation") {
    Rng rng(4);
    const std::vector<Position> hubs{{10, 90}, {70, 20}};
    for (int t = 0; t < 50; ++t) {
        Genome g;
        for (int i = 0; i < 16; ++i) g.coords.push_back(rng.uniform(0, 100));
        std::vector<std::size_t> perm(8);
        std::iota(perm.begin(), perm.end(), 0);
        std::reverse(perm.begin(), perm.end());
        Genome p = g;
        for (std::size_t i = 0; i < 8; ++i) p.set_node(i, g.node(perm[i]));
        CHECK(geometric_cost(p, hubs) == doctest::Approx(geometric_cost(g, hubs)).epsilon(1e-12));
    }
}

TEST_CASE("physical cost on a hand-computed layout") {
    Environment env;
    const std::vector<Position> hubs{{0, 0}};
    // one sensor 10 m from the hub, no AUVs
    const auto g = genome({10, 0});
    const double vp = physics::phase_velocity(env);
    CHECK(physical_cost(g, 1, hubs, env, {1.0, 0.0}) == doctest::Approx(140.7377216232605).epsilon(1e-12));
    CHECK(physical_cost(g, 1, hubs, env, {1.0, 1.0}) ==
          doctest::Approx(140.7377216232605 + 10.0 / vp).epsilon(1e-12));
    CHECK(physical_cost(g, 1, hubs, env, {0.0, 0.0}) == 0.0);

    // sensor at 10 m with an AUV 2 m away that is itself 8 m from the hub:
    // sensor picks the AUV link (2 m), AUV pays its 8 m hub link scaled by 0.79.
    const auto g2 = genome({10, 0, 8, 0});
    const double a = physics::attenuation_coefficient(env);
    CHECK(physical_cost(g2, 1, hubs, env, {1.0, 0.0}) == doctest::Approx(a * 2.0 + a * 0.79 * 8.0).epsilon(1e-12));
}

TEST_CASE("GA config validation") {
    GaConfig c;
    c.population_size = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.mutation_prob = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    PsoConfig p;
    p.swarm_size = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("GA best-ever cost is non-increasing and beats the initial median") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = random_deploy({10, 5, 2}, Environment{}, 100.0, seed);
        GaConfig cfg;
        cfg.seed = seed;
        GeneticAlgorithm ga(15, t.hub_positions(), 100.0, cfg);
        auto initial = ga.costs();
        std::sort(initial.begin(), initial.end());
        const double median = initial[initial.size() / 2];
        std::vector<double> hist{ga.best_cost()};
        for (int g = 0; g < cfg.generations; ++g) {
            ga.step();
            hist.push_back(ga.best_cost());
            for (const auto& ind : ga.population())
                for (double x : ind.coords) {
                    CHECK(x >= 0.0);
                    CHECK(x <= 100.0);
                }
        }
        CHECK(non_increasing(hist));
        CHECK(ga.best_cost() < median);
        CHECK(ga.cost(ga.best()) == doctest::Approx(ga.best_cost()).epsilon(1e-12));
    }
}

TEST_CASE("GA on an identical population without mutation stays put") {
    GaConfig cfg;
    cfg.mutation_prob = 0.0;
    const std::vector<Position> hubs{{50, 50}};
    const auto g = genome({10, 20, 30, 40, 60, 70});
    std::vector<Genome> seeds(static_cast<std::size_t>(cfg.population_size), g);
    GeneticAlgorithm ga(3, hubs, 100.0, cfg, {}, seeds);
    for (int i = 0; i < 5; ++i) ga.step();
    for (const auto& ind : ga.population()) CHECK(ind == g);
}

TEST_CASE("ga_optimize history and determinism") {
    const auto t = random_deploy({10, 5, 2}, Environment{}, 100.0, 3);
    const auto a = ga_optimize(t, {});
    CHECK(a.cost_history.size() == 41);
    CHECK(non_increasing(a.cost_history));
    CHECK(a.best_cost == a.cost_history.back());
    CHECK(ga_optimize(t, {}) == a);
}

TEST_CASE("PSO with zero coefficients does not move") {
    PsoConfig cfg;
    cfg.inertia_w = cfg.c1 = cfg.c2 = 0.0;
    int calls = 0;
    auto fit = [&](const Genome& g) {
        ++calls;
        return g.coords[0];
    };
    ParticleSwarm pso(2, 100.0, cfg, fit);
    const auto before = pso.positions();
    for (int i = 0; i < 5; ++i) pso.step();
    CHECK(pso.positions() == before);
}

TEST_CASE("PSO without the cognitive term moves toward the global best") {
    PsoConfig cfg;
    cfg.inertia_w = 0.0;
    cfg.c1 = 0.0;
    cfg.v_max = 1e9;
    const Position target{30, 60};
    auto fit = [&](const Genome& g) { return distance(g.node(0), target); };
    ParticleSwarm pso(1, 100.0, cfg, fit);
    const auto x0 = pso.positions();
    const auto gbest = pso.best();
    pso.step();
    const auto& x1 = pso.positions();
    for (std::size_t i = 0; i < x0.size(); ++i) {
        const double dot = (x1[i].coords[0] - x0[i].coords[0]) * (gbest.coords[0] - x0[i].coords[0]) +
                           (x1[i].coords[1] - x0[i].coords[1]) * (gbest.coords[1] - x0[i].coords[1]);
        CHECK(dot >= -1e-12);
    }
}

TEST_CASE("PSO respects v_max and the field") {
    PsoConfig cfg;
    cfg.v_max = 2.0;
    auto fit = [](const Genome& g) { return -g.coords[0] - g.coords[1]; };
    ParticleSwarm pso(3, 100.0, cfg, fit);
    std::vector<double> hist{pso.best_cost()};
    for (int i = 0; i < 30; ++i) {
        pso.step();
        hist.push_back(pso.best_cost());
        for (const auto& v : pso.velocities())
            for (double c : v.coords) CHECK(std::abs(c) <= 2.0);
        for (const auto& x : pso.positions())
            for (double c : x.coords) {
                CHECK(c >= 0.0);
                CHECK(c <= 100.0);
            }
    }
    CHECK(non_increasing(hist));
}

TEST_CASE("seeded PSO never ends worse than its start") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = random_deploy({10, 5, 2}, Environment{}, 100.0, seed);
        const auto start = genome_from(t);
        PsoConfig cfg;
        cfg.seed = seed;
        const auto r = pso_optimize(start, t, cfg, t.environment);
        const auto hubs = t.hub_positions();
        CHECK(r.best_cost <= combined_cost(start, 10, hubs, t.environment, cfg.weights()));
        CHECK(non_increasing(r.cost_history));
        CHECK(r.cost_history.size() == 51);
    }
}

TEST_CASE("single sensor converges onto the hub, matching a grid search") {
    Topology t = random_deploy({1, 0, 1}, Environment{}, 100.0, 12);
    const auto hubs = t.hub_positions();
    const PhysicalWeights w{1.0, 1.0};
    // grid-search oracle at 1 m resolution
    Position grid_best{};
    double grid_cost = std::numeric_limits<double>::infinity();
    for (int x = 0; x <= 100; ++x)
        for (int y = 0; y <= 100; ++y) {
            const auto g = genome({double(x), double(y)});
            const double c = combined_cost(g, 1, hubs, t.environment, w);
            if (c < grid_cost) grid_cost = c, grid_best = {double(x), double(y)};
        }
    CHECK(distance(grid_best, hubs[0]) <= 1.0);

    PipelineConfig cfg;
    const auto r = optimize_pipeline(t, cfg);
    const Position p = r.optimized.sensors[0].position;
    CHECK(distance(p, hubs[0]) <= 1.0);
    CHECK(distance(p, grid_best) <= 1.5);
}

TEST_CASE("pipeline is deterministic and improves the raw layout") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto t = random_deploy({10, 5, 2}, Environment{}, 100.0, seed);
        const PipelineConfig cfg;
        const auto a = optimize_pipeline(t, cfg);
        const auto b = optimize_pipeline(t, cfg);
        CHECK(a.optimized == b.optimized);
        CHECK(a.pso == b.pso);
        CHECK(a.clusters == b.clusters);
        const auto hubs = t.hub_positions();
        const auto w = cfg.pso.weights();
        const double raw = combined_cost(genome_from(t), 10, hubs, t.environment, w);
        const double ga = combined_cost(a.ga.best_genome, 10, hubs, t.environment, w);
        CHECK(a.pso.best_cost <= raw);
        CHECK(a.pso.best_cost <= ga);
        CHECK(a.optimized.hubs == t.hubs);
        CHECK(a.clusters.assignment.size() == 10);
    }
}

TEST_CASE("cluster labels for genome nodes") {
    ClusterModel m;
    m.k = 2;
    m.assignment = {1, 0, 1};
    const auto labels = genome_cluster_labels(m, 3);
    CHECK(labels == std::vector<int>{1, 0, 1, 0, 1, 0});
}
