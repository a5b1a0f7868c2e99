#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "uwsn/clustering.hpp"
#include "uwsn/physics.hpp"
#include "uwsn/rng.hpp"
#include "uwsn/topology.hpp"

namespace uwsn {

/// Flat coordinate vector [x0, y0, x1, y1, ...]: sensors first, then AUVs, each in id order.
struct Genome {
    std::vector<double> coords;

    std::size_t node_count() const { return coords.size() / 2; }
    Position node(std::size_t i) const { return {coords[2 * i], coords[2 * i + 1]}; }
    void set_node(std::size_t i, Position p) {
        coords[2 * i] = p.x;
        coords[2 * i + 1] = p.y;
    }
    void clamp(double field_size);

    bool operator==(const Genome&) const = default;
};

Genome genome_from(const Topology& topology);

/// Copy of `topology` with sensor and AUV positions taken from `genome`.
Topology apply_genome(const Topology& topology, const Genome& genome);

/// Which node pairs contribute to the pairwise distance term.
enum class PairScope { AllPairs, IntraCluster };

struct GaConfig {
    int population_size = 30;
    int generations = 40;
    double blx_alpha = 0.5;
    double mutation_prob = 0.1;
    double mutation_sigma = 5.0;
    int tournament_size = 3;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const GaConfig&) const = default;
};

struct PhysicalWeights {
    double alpha_weight = 1.0;
    double beta_weight = 1.0;
};

struct PsoConfig {
    int swarm_size = 30;
    int iterations = 50;
    double inertia_w = 0.7;
    double c1 = 1.5;
    double c2 = 1.5;
    double v_max = 10.0;
    double alpha_weight = 1.0;
    double beta_weight = 1.0;
    /// Std-dev (m) of the Gaussian scatter around a start genome for the other particles.
    double start_spread = 5.0;
    std::uint64_t seed = 0;

    void validate() const;
    PhysicalWeights weights() const { return {alpha_weight, beta_weight}; }
    bool operator==(const PsoConfig&) const = default;
};

struct OptimizationResult {
    Genome best_genome;
    double best_cost = 0.0;
    /// Entry 0 is the best of the initial population; entry g the best-ever after step g.
    std::vector<double> cost_history;

    bool operator==(const OptimizationResult&) const = default;
};

/// Called once per GA generation / PSO iteration with (step index, best cost so far).
using ProgressFn = std::function<void(int, double)>;

/// Sum over ordered pairs i != j of d_ij plus each node's distance to its nearest hub.
/// With a non-empty `cluster_of` (one label per genome node) only same-label pairs count.
double geometric_cost(const Genome& genome, std::span<const Position> hubs,
                      std::span<const int> cluster_of = {});

/// Link-level channel cost. Each sensor contributes its lowest-attenuation single link
/// (nearest hub or nearest AUV); each AUV contributes its link to its nearest hub with
/// AUV distance scaling. Sum of alpha_w * L + beta_w * tau. Genome nodes at index
/// >= sensor_count are AUVs.
double physical_cost(const Genome& genome, std::size_t sensor_count,
                     std::span<const Position> hubs, const Environment& env,
                     PhysicalWeights weights);

/// Fitness minimized by the swarm: geometric_cost + physical_cost.
double combined_cost(const Genome& genome, std::size_t sensor_count,
                     std::span<const Position> hubs, const Environment& env,
                     PhysicalWeights weights, std::span<const int> cluster_of = {});

/// Real-coded GA over genomes: tournament selection, BLX-alpha crossover, per-coordinate
/// Gaussian mutation, single-individual elitism, all coordinates clamped to the field.
class GeneticAlgorithm {
public:
    /// `seeds` replace the first individuals of the otherwise uniform initial population.
    GeneticAlgorithm(std::size_t node_count, std::vector<Position> hubs, double field_size,
                     const GaConfig& cfg, std::vector<int> cluster_of = {},
                     std::span<const Genome> seeds = {});

    void step();

    const std::vector<Genome>& population() const { return _population; }
    const std::vector<double>& costs() const { return _costs; }
    const Genome& best() const { return _best; }
    double best_cost() const { return _best_cost; }
    int generation() const { return _generation; }

    double cost(const Genome& g) const { return geometric_cost(g, _hubs, _cluster_of); }

private:
    const Genome& tournament();
    Genome crossover(const Genome& a, const Genome& b);
    void mutate(Genome& g);
    void evaluate();

    GaConfig _cfg;
    std::vector<Position> _hubs;
    std::vector<int> _cluster_of;
    double _field_size;
    Rng _rng;
    std::vector<Genome> _population;
    std::vector<double> _costs;
    Genome _best;
    double _best_cost = 0.0;
    int _generation = 0;
};

/// Global-best PSO: v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x), x <- x + v, with
/// fresh r1, r2 per dimension per step, velocities clamped to +-v_max and positions to
/// the field.
class ParticleSwarm {
public:
    using Fitness = std::function<double(const Genome&)>;

    /// With `start`, particle 0 is `start` and the rest scatter around it; otherwise all
    /// particles are uniform over the field. Initial velocities are `initial_velocities`
    /// when given (one per particle), else zero.
    ParticleSwarm(std::size_t node_count, double field_size, const PsoConfig& cfg,
                  Fitness fitness, const std::optional<Genome>& start = std::nullopt,
                  std::vector<Genome> initial_velocities = {});

    void step();

    const std::vector<Genome>& positions() const { return _positions; }
    const std::vector<Genome>& velocities() const { return _velocities; }
    const std::vector<Genome>& personal_best() const { return _pbest; }
    const Genome& best() const { return _gbest; }
    double best_cost() const { return _gbest_cost; }
    int iteration() const { return _iteration; }

private:
    PsoConfig _cfg;
    double _field_size;
    Fitness _fitness;
    Rng _rng;
    std::vector<Genome> _positions;
    std::vector<Genome> _velocities;
    std::vector<Genome> _pbest;
    std::vector<double> _pbest_cost;
    Genome _gbest;
    double _gbest_cost = 0.0;
    int _iteration = 0;
};

struct SearchOptions {
    /// Individuals injected into the GA's initial population.
    std::vector<Genome> seeds;
    /// Per-genome-node cluster label; non-empty restricts the pairwise term to clusters.
    std::vector<int> cluster_of;
    ProgressFn on_progress;
};

/// GA over the topology's sensors and AUVs with geometric_cost as fitness.
OptimizationResult ga_optimize(const Topology& topology, const GaConfig& cfg,
                               const SearchOptions& options = {});

/// PSO with combined_cost as fitness, optionally seeded with `start`.
OptimizationResult pso_optimize(const std::optional<Genome>& start, const Topology& topology,
                                const PsoConfig& cfg, const Environment& env,
                                const SearchOptions& options = {});

struct PipelineConfig {
    KMeansConfig kmeans;
    GaConfig ga;
    PsoConfig pso;
    PairScope pair_scope = PairScope::AllPairs;

    void validate() const;
    bool operator==(const PipelineConfig&) const = default;
};

struct PipelineProgress {
    /// Called per GA generation.
    ProgressFn on_ga;
    /// Called per PSO iteration.
    ProgressFn on_pso;
};

struct PipelineResult {
    /// Clusters of the input layout, used to seat the AUVs before optimization.
    ClusterModel initial_clusters;
    /// Input layout with AUVs moved to the midpoint of (cluster centroid, nearest hub).
    Topology start_layout;
    OptimizationResult ga;
    OptimizationResult pso;
    /// Clusters and leaders re-derived on the optimized layout.
    ClusterModel clusters;
    Topology optimized;
};

/// Per-genome-node cluster labels: sensors by assignment, AUV j by cluster j mod k.
std::vector<int> genome_cluster_labels(const ClusterModel& clusters, std::size_t auv_count);

/// KMeans -> leaders -> GA -> PSO (seeded with the GA best) -> re-cluster. Stage seeds derive
/// from topology.seed salted with each stage config's own seed.
PipelineResult optimize_pipeline(const Topology& topology, const PipelineConfig& cfg,
                                 const PipelineProgress& progress = {});

}  // namespace uwsn
