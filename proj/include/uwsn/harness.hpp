#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwsn/optimizer.hpp"
#include "uwsn/simulator.hpp"

namespace uwsn {

enum class AuvDensity { OnePerNode, OnePerFive };

std::string_view to_string(AuvDensity d);
AuvDensity parse_density(std::string_view name);

/// Everything one batch needs. Shared by the CLI config file and the service API.
struct ExperimentSpec {
    int runs = 100;
    std::uint64_t base_seed = 0;
    NodeCounts counts;
    double field_size = kDefaultFieldSize;
    Environment environment;
    std::vector<Scenario> scenarios{Scenario::Initial, Scenario::Leaderless, Scenario::LeaderBased};
    PipelineConfig optimizer;
    DeliveryModel delivery = DeliveryModel::calibrated_default();
    SimulationConfig simulation;
    std::optional<AuvDensity> auv_density;
    /// Worker threads for independent runs; 0 picks the hardware concurrency.
    int threads = 0;

    void validate() const;
    bool operator==(const ExperimentSpec&) const = default;
};

/// Copy of `spec` with AUV count and k set by `density`: one AUV per sensor, or
/// ceil(sensors / 5); k equals the AUV count.
ExperimentSpec with_density(ExperimentSpec spec, AuvDensity density);

struct RunOutcome {
    int run = 0;
    std::uint64_t seed = 0;
    Topology deployed;
    /// Present when a non-initial scenario was requested.
    std::optional<PipelineResult> pipeline;
    std::vector<SimulationReport> reports;

    const SimulationReport* report(Scenario s) const;
};

struct ScenarioStats {
    Scenario scenario = Scenario::Initial;
    int runs = 0;
    double mean_success_rate = 0.0;
    double stddev_success_rate = 0.0;
    double mean_auv_usage_rate = 0.0;
    double stddev_auv_usage_rate = 0.0;
    double mean_delay_s = 0.0;
    double stddev_delay_s = 0.0;

    bool operator==(const ScenarioStats&) const = default;
};

struct RawRunRow {
    int run = 0;
    Scenario scenario = Scenario::Initial;
    double success_rate = 0.0;
    double auv_usage_rate = 0.0;
    double mean_delay_s = 0.0;

    bool operator==(const RawRunRow&) const = default;
};

struct AggregateResult {
    ExperimentSpec spec;
    std::vector<ScenarioStats> stats;
    std::vector<RawRunRow> raw;
    std::vector<RunOutcome> outcomes;

    const ScenarioStats& stats_for(Scenario s) const;
};

/// Failure inside one run; names the run index.
class ExperimentError : public std::runtime_error {
public:
    ExperimentError(int run, const std::string& what)
        : std::runtime_error("run " + std::to_string(run) + ": " + what), _run(run) {}
    int run() const noexcept { return _run; }

private:
    int _run;
};

/// Mean and sample standard deviation (0 for a single value), folded in order.
std::pair<double, double> mean_stddev(const std::vector<double>& values);

/// Run r of `spec`: seed = base_seed + r; deploy; Initial on the raw layout; pipeline; other
/// scenarios on the optimized layout with its clusters. A set auv_density overrides the AUV
/// count and k (see with_density), here and in run_experiment.
RunOutcome run_single(const ExperimentSpec& spec, int run);

/// Per-scenario statistics and the raw table from outcomes, in run-index order.
AggregateResult aggregate(const ExperimentSpec& spec, std::vector<RunOutcome> outcomes);

/// Called after each finished run with (finished count, run index).
using RunProgressFn = std::function<void(int, int)>;

/// All runs, fanned out over spec.threads workers, aggregated deterministically.
AggregateResult run_experiment(const ExperimentSpec& spec, const RunProgressFn& progress = {});

struct DensityStudy {
    AggregateResult per_node;
    AggregateResult per_five;
};

DensityStudy auv_density_study(const ExperimentSpec& spec, const RunProgressFn& progress = {});

}  // namespace uwsn
