#include "uwsn/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uwsn/errors.hpp"

namespace uwsn {

void Genome::clamp(double field_size) {
    for (double& c : coords) c = std::clamp(c, 0.0, field_size);
}

Genome genome_from(const Topology& topology) {
    Genome g;
    g.coords.reserve(2 * (topology.sensors.size() + topology.auvs.size()));
    for (const auto* nodes : {&topology.sensors, &topology.auvs})
        for (const auto& n : *nodes) {
            g.coords.push_back(n.position.x);
            g.coords.push_back(n.position.y);
        }
    return g;
}

Topology apply_genome(const Topology& topology, const Genome& genome) {
    if (genome.node_count() != topology.sensors.size() + topology.auvs.size() ||
        genome.coords.size() % 2 != 0)
        throw ConfigError("genome", "genome length does not match sensors + AUVs");
    Topology out = topology;
    std::size_t i = 0;
    for (auto& n : out.sensors) n.position = genome.node(i++);
    for (auto& n : out.auvs) n.position = genome.node(i++);
    return out;
}

void GaConfig::validate() const {
    if (population_size < 2) throw ConfigError("ga.population_size", "ga.population_size must be >= 2");
    if (generations < 1) throw ConfigError("ga.generations", "ga.generations must be >= 1");
    if (!(blx_alpha >= 0.0)) throw ConfigError("ga.blx_alpha", "ga.blx_alpha must be >= 0");
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
        throw ConfigError("ga.mutation_prob", "ga.mutation_prob must lie in [0, 1]");
    if (!(mutation_sigma >= 0.0)) throw ConfigError("ga.mutation_sigma", "ga.mutation_sigma must be >= 0");
    if (tournament_size < 2) throw ConfigError("ga.tournament_size", "ga.tournament_size must be >= 2");
}

void PsoConfig::validate() const {
    if (swarm_size < 1) throw ConfigError("pso.swarm_size", "pso.swarm_size must be >= 1");
    if (iterations < 0) throw ConfigError("pso.iterations", "pso.iterations must be >= 0");
    if (!(inertia_w >= 0.0 && inertia_w <= 1.0))
        throw ConfigError("pso.inertia_w", "pso.inertia_w must lie in [0, 1]");
    if (!(c1 >= 0.0)) throw ConfigError("pso.c1", "pso.c1 must be >= 0");
    if (!(c2 >= 0.0)) throw ConfigError("pso.c2", "pso.c2 must be >= 0");
    if (!(v_max > 0.0)) throw ConfigError("pso.v_max", "pso.v_max must be > 0");
    if (!(alpha_weight >= 0.0)) throw ConfigError("pso.alpha_weight", "pso.alpha_weight must be >= 0");
    if (!(beta_weight >= 0.0)) throw ConfigError("pso.beta_weight", "pso.beta_weight must be >= 0");
    if (!(start_spread >= 0.0)) throw ConfigError("pso.start_spread", "pso.start_spread must be >= 0");
}

void PipelineConfig::validate() const {
    kmeans.validate();
    ga.validate();
    pso.validate();
}

namespace {

double nearest_distance(const Position& p, std::span<const Position> targets) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : targets) best = std::min(best, distance(p, t));
    return best;
}

}  // namespace

double geometric_cost(const Genome& genome, std::span<const Position> hubs,
                      std::span<const int> cluster_of) {
    const std::size_t n = genome.node_count();
    const bool scoped = !cluster_of.empty();
    double pairwise = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (scoped && cluster_of[i] != cluster_of[j]) continue;
            pairwise += distance(genome.node(i), genome.node(j));
        }
    double hub_term = 0.0;
    for (std::size_t i = 0; i < n; ++i) hub_term += nearest_distance(genome.node(i), hubs);
    // The ordered double sum visits every unordered pair twice.
    return 2.0 * pairwise + hub_term;
}

double physical_cost(const Genome& genome, std::size_t sensor_count,
                     std::span<const Position> hubs, const Environment& env,
                     PhysicalWeights weights) {
    const double alpha = physics::attenuation_coefficient(env);
    const double vp = physics::phase_velocity(env);
    const std::size_t n = genome.node_count();

    double cost = 0.0;
    auto add_link = [&](double d, bool auv_tx) {
        const double eff = auv_tx ? kAuvDistanceScale * d : d;
        cost += weights.alpha_weight * alpha * eff + weights.beta_weight * d / vp;
    };

    for (std::size_t i = 0; i < sensor_count && i < n; ++i) {
        const Position p = genome.node(i);
        double d = nearest_distance(p, hubs);
        for (std::size_t a = sensor_count; a < n; ++a) d = std::min(d, distance(p, genome.node(a)));
        add_link(d, false);
    }
    for (std::size_t a = sensor_count; a < n; ++a) add_link(nearest_distance(genome.node(a), hubs), true);
    return cost;
}

double combined_cost(const Genome& genome, std::size_t sensor_count,
                     std::span<const Position> hubs, const Environment& env,
                     PhysicalWeights weights, std::span<const int> cluster_of) {
    return geometric_cost(genome, hubs, cluster_of) +
           physical_cost(genome, sensor_count, hubs, env, weights);
}

// ---------------------------------------------------------------------------
// GeneticAlgorithm

GeneticAlgorithm::GeneticAlgorithm(std::size_t node_count, std::vector<Position> hubs,
                                   double field_size, const GaConfig& cfg,
                                   std::vector<int> cluster_of, std::span<const Genome> seeds)
    : _cfg(cfg),
      _hubs(std::move(hubs)),
      _cluster_of(std::move(cluster_of)),
      _field_size(field_size),
      _rng(cfg.seed) {
    _cfg.validate();
    if (!_cluster_of.empty() && _cluster_of.size() != node_count)
        throw ConfigError("cluster_of", "cluster labels must cover every genome node");

    const auto pop = static_cast<std::size_t>(_cfg.population_size);
    _population.reserve(pop);
    for (const auto& s : seeds) {
        if (_population.size() == pop) break;
        if (s.node_count() != node_count)
            throw ConfigError("seeds", "seed genome length does not match the node count");
        Genome g = s;
        g.clamp(_field_size);
        _population.push_back(std::move(g));
    }
    while (_population.size() < pop) {
        Genome g;
        g.coords.resize(2 * node_count);
        for (double& c : g.coords) c = _rng.uniform(0.0, _field_size);
        _population.push_back(std::move(g));
    }
    _best_cost = std::numeric_limits<double>::infinity();
    evaluate();
}

void GeneticAlgorithm::evaluate() {
    _costs.resize(_population.size());
    for (std::size_t i = 0; i < _population.size(); ++i) _costs[i] = cost(_population[i]);
    for (std::size_t i = 0; i < _population.size(); ++i)
        if (_costs[i] < _best_cost) {
            _best_cost = _costs[i];
            _best = _population[i];
        }
}

const Genome& GeneticAlgorithm::tournament() {
    std::size_t winner = _rng.index(_population.size());
    for (int t = 1; t < _cfg.tournament_size; ++t) {
        const std::size_t c = _rng.index(_population.size());
        if (_costs[c] < _costs[winner]) winner = c;
    }
    return _population[winner];
}

Genome GeneticAlgorithm::crossover(const Genome& a, const Genome& b) {
    Genome child;
    child.coords.resize(a.coords.size());
    for (std::size_t d = 0; d < a.coords.size(); ++d) {
        const double lo = std::min(a.coords[d], b.coords[d]);
        const double hi = std::max(a.coords[d], b.coords[d]);
        const double ext = _cfg.blx_alpha * (hi - lo);
        child.coords[d] = _rng.uniform(lo - ext, hi + ext);
    }
    return child;
}

void GeneticAlgorithm::mutate(Genome& g) {
    for (double& c : g.coords)
        if (_rng.bernoulli(_cfg.mutation_prob)) c += _rng.normal(0.0, _cfg.mutation_sigma);
}

void GeneticAlgorithm::step() {
    std::vector<Genome> next;
    next.reserve(_population.size());
    next.push_back(_best);
    while (next.size() < _population.size()) {
        const Genome& p1 = tournament();
        const Genome& p2 = tournament();
        Genome child = crossover(p1, p2);
        mutate(child);
        child.clamp(_field_size);
        next.push_back(std::move(child));
    }
    _population = std::move(next);
    evaluate();
    ++_generation;
}

// ---------------------------------------------------------------------------
// ParticleSwarm

ParticleSwarm::ParticleSwarm(std::size_t node_count, double field_size, const PsoConfig& cfg,
                             Fitness fitness, const std::optional<Genome>& start,
                             std::vector<Genome> initial_velocities)
    : _cfg(cfg), _field_size(field_size), _fitness(std::move(fitness)), _rng(cfg.seed) {
    _cfg.validate();
    const auto n = static_cast<std::size_t>(_cfg.swarm_size);
    const std::size_t dims = 2 * node_count;
    if (start && start->coords.size() != dims)
        throw ConfigError("start", "start genome length does not match the node count");
    if (!initial_velocities.empty() && initial_velocities.size() != n)
        throw ConfigError("initial_velocities", "one initial velocity per particle is required");

    _positions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Genome g;
        if (start) {
            g = *start;
            if (i > 0)
                for (double& c : g.coords) c += _rng.normal(0.0, _cfg.start_spread);
        } else {
            g.coords.resize(dims);
            for (double& c : g.coords) c = _rng.uniform(0.0, _field_size);
        }
        g.clamp(_field_size);
        _positions.push_back(std::move(g));
    }

    if (initial_velocities.empty()) {
        _velocities.assign(n, Genome{std::vector<double>(dims, 0.0)});
    } else {
        for (const auto& v : initial_velocities)
            if (v.coords.size() != dims)
                throw ConfigError("initial_velocities", "velocity length does not match the node count");
        _velocities = std::move(initial_velocities);
    }

    _pbest = _positions;
    _pbest_cost.resize(n);
    _gbest_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        _pbest_cost[i] = _fitness(_positions[i]);
        if (_pbest_cost[i] < _gbest_cost) {
            _gbest_cost = _pbest_cost[i];
            _gbest = _positions[i];
        }
    }
}

void ParticleSwarm::step() {
    const std::size_t n = _positions.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto& x = _positions[i].coords;
        auto& v = _velocities[i].coords;
        const auto& pb = _pbest[i].coords;
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double r1 = _rng.uniform();
            const double r2 = _rng.uniform();
            v[d] = _cfg.inertia_w * v[d] + _cfg.c1 * r1 * (pb[d] - x[d]) +
                   _cfg.c2 * r2 * (_gbest.coords[d] - x[d]);
            v[d] = std::clamp(v[d], -_cfg.v_max, _cfg.v_max);
            x[d] = std::clamp(x[d] + v[d], 0.0, _field_size);
        }
    }
    // Personal and global bests update after the whole swarm moved.
    for (std::size_t i = 0; i < n; ++i) {
        const double c = _fitness(_positions[i]);
        if (c < _pbest_cost[i]) {
            _pbest_cost[i] = c;
            _pbest[i] = _positions[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (_pbest_cost[i] < _gbest_cost) {
            _gbest_cost = _pbest_cost[i];
            _gbest = _pbest[i];
        }
    ++_iteration;
}

// ---------------------------------------------------------------------------

OptimizationResult ga_optimize(const Topology& topology, const GaConfig& cfg,
                               const SearchOptions& options) {
    topology.validate();
    const std::size_t nodes = topology.sensors.size() + topology.auvs.size();
    GeneticAlgorithm ga(nodes, topology.hub_positions(), topology.field_size, cfg,
                        options.cluster_of, options.seeds);

    OptimizationResult r;
    r.cost_history.reserve(static_cast<std::size_t>(cfg.generations) + 1);
    r.cost_history.push_back(ga.best_cost());
    for (int g = 0; g < cfg.generations; ++g) {
        ga.step();
        r.cost_history.push_back(ga.best_cost());
        if (options.on_progress) options.on_progress(ga.generation(), ga.best_cost());
    }
    r.best_genome = ga.best();
    r.best_cost = ga.best_cost();
    return r;
}

OptimizationResult pso_optimize(const std::optional<Genome>& start, const Topology& topology,
                                const PsoConfig& cfg, const Environment& env,
                                const SearchOptions& options) {
    topology.validate();
    env.validate();
    const std::size_t sensors = topology.sensors.size();
    const std::size_t nodes = sensors + topology.auvs.size();
    if (!options.cluster_of.empty() && options.cluster_of.size() != nodes)
        throw ConfigError("cluster_of", "cluster labels must cover every genome node");

    const auto hubs = topology.hub_positions();
    // Surface an invalid channel before building the swarm.
    physics::attenuation_coefficient(env);
    auto fitness = [&](const Genome& g) {
        return combined_cost(g, sensors, hubs, env, cfg.weights(), options.cluster_of);
    };
    ParticleSwarm swarm(nodes, topology.field_size, cfg, fitness, start);

    OptimizationResult r;
    r.cost_history.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
    r.cost_history.push_back(swarm.best_cost());
    for (int it = 0; it < cfg.iterations; ++it) {
        swarm.step();
        r.cost_history.push_back(swarm.best_cost());
        if (options.on_progress) options.on_progress(swarm.iteration(), swarm.best_cost());
    }
    r.best_genome = swarm.best();
    r.best_cost = swarm.best_cost();
    return r;
}

std::vector<int> genome_cluster_labels(const ClusterModel& clusters, std::size_t auv_count) {
    std::vector<int> labels = clusters.assignment;
    for (std::size_t j = 0; j < auv_count; ++j)
        labels.push_back(static_cast<int>(j % static_cast<std::size_t>(clusters.k)));
    return labels;
}

namespace {

std::uint64_t stage_seed(std::uint64_t root, std::uint64_t salt, std::string_view label) {
    return Rng::stream(splitmix64(root) + salt, label).next_u64();
}

}  // namespace

PipelineResult optimize_pipeline(const Topology& topology, const PipelineConfig& cfg,
                                 const PipelineProgress& progress) {
    topology.validate();
    cfg.validate();

    PipelineResult out;
    out.initial_clusters = cluster_sensors(topology, cfg.kmeans, topology.seed);

    // Seat each AUV between its cluster's centroid and the hub nearest that centroid.
    out.start_layout = topology;
    const auto hubs = topology.hub_positions();
    for (std::size_t j = 0; j < out.start_layout.auvs.size(); ++j) {
        const auto c = j % static_cast<std::size_t>(out.initial_clusters.k);
        const Position centroid = out.initial_clusters.centroids[c];
        const Position hub = hubs[static_cast<std::size_t>(nearest_index(centroid, hubs))];
        out.start_layout.auvs[j].position = {(centroid.x + hub.x) / 2.0, (centroid.y + hub.y) / 2.0};
    }

    SearchOptions ga_opts;
    ga_opts.seeds.push_back(genome_from(out.start_layout));
    if (cfg.pair_scope == PairScope::IntraCluster)
        ga_opts.cluster_of = genome_cluster_labels(out.initial_clusters, topology.auvs.size());
    ga_opts.on_progress = progress.on_ga;

    GaConfig ga_cfg = cfg.ga;
    ga_cfg.seed = stage_seed(topology.seed, cfg.ga.seed, "ga");
    out.ga = ga_optimize(out.start_layout, ga_cfg, ga_opts);

    SearchOptions pso_opts;
    pso_opts.cluster_of = ga_opts.cluster_of;
    pso_opts.on_progress = progress.on_pso;
    PsoConfig pso_cfg = cfg.pso;
    pso_cfg.seed = stage_seed(topology.seed, cfg.pso.seed, "pso");
    out.pso = pso_optimize(out.ga.best_genome, out.start_layout, pso_cfg, topology.environment,
                           pso_opts);

    out.optimized = apply_genome(topology, out.pso.best_genome);
    out.clusters = cluster_sensors(out.optimized, cfg.kmeans,
                                   Rng::stream(topology.seed, "kmeans/final").next_u64());
    return out;
}

}  // namespace uwsn
