#include "uwsn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "uwsn/errors.hpp"

namespace uwsn {

std::string_view to_string(AuvDensity d) {
    return d == AuvDensity::OnePerNode ? "per-node" : "per-five";
}

AuvDensity parse_density(std::string_view name) {
    if (name == "per-node" || name == "one_per_node") return AuvDensity::OnePerNode;
    if (name == "per-five" || name == "one_per_five") return AuvDensity::OnePerFive;
    throw ConfigError("density", "unknown density '" + std::string(name) +
                                     "' (expected per-node or per-five)");
}

void ExperimentSpec::validate() const {
    if (runs < 1) throw ConfigError("runs", "runs must be >= 1");
    if (scenarios.empty()) throw ConfigError("scenarios", "scenarios must not be empty");
    if (threads < 0) throw ConfigError("threads", "threads must be >= 0");
    validate_counts(counts);
    if (!(field_size > 0.0)) throw ConfigError("field_size", "field_size must be > 0");
    environment.validate();
    delivery.validate();
    simulation.validate();
    optimizer.validate();
    if (auv_density == AuvDensity::OnePerFive && counts.sensors < 5)
        throw ConfigError("sensors", "per-five density requires sensors >= 5");
}

ExperimentSpec with_density(ExperimentSpec spec, AuvDensity density) {
    const int n = spec.counts.sensors;
    spec.counts.auvs = density == AuvDensity::OnePerNode ? n : (n + 4) / 5;
    spec.optimizer.kmeans.k = std::clamp(spec.counts.auvs, 1, n);
    spec.auv_density = density;
    return spec;
}

namespace {

// A spec carrying a density mode gets its AUV count and k from that mode.
ExperimentSpec resolved(const ExperimentSpec& spec) {
    return spec.auv_density ? with_density(spec, *spec.auv_density) : spec;
}

}  // namespace

const SimulationReport* RunOutcome::report(Scenario s) const {
    for (const auto& r : reports)
        if (r.scenario == s) return &r;
    return nullptr;
}

const ScenarioStats& AggregateResult::stats_for(Scenario s) const {
    for (const auto& st : stats)
        if (st.scenario == s) return st;
    throw ConfigError("scenario", "scenario '" + std::string(to_string(s)) + "' was not run");
}

std::pair<double, double> mean_stddev(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

RunOutcome run_single(const ExperimentSpec& requested, int run) {
    const ExperimentSpec spec = resolved(requested);
    RunOutcome out;
    out.run = run;
    out.seed = spec.base_seed + static_cast<std::uint64_t>(run);
    out.deployed = random_deploy(spec.counts, spec.environment, spec.field_size, out.seed);

    const bool needs_pipeline = std::any_of(spec.scenarios.begin(), spec.scenarios.end(),
                                            [](Scenario s) { return s != Scenario::Initial; });
    if (needs_pipeline) out.pipeline = optimize_pipeline(out.deployed, spec.optimizer);

    for (Scenario s : kAllScenarios) {
        if (std::find(spec.scenarios.begin(), spec.scenarios.end(), s) == spec.scenarios.end())
            continue;
        if (s == Scenario::Initial) {
            out.reports.push_back(run_scenario(s, out.deployed, nullptr, spec.delivery,
                                               spec.environment, spec.simulation, out.seed));
        } else {
            out.reports.push_back(run_scenario(s, out.pipeline->optimized, &out.pipeline->clusters,
                                               spec.delivery, spec.environment, spec.simulation,
                                               out.seed));
        }
    }
    return out;
}

AggregateResult aggregate(const ExperimentSpec& spec, std::vector<RunOutcome> outcomes) {
    AggregateResult agg;
    agg.spec = spec;
    for (Scenario s : kAllScenarios) {
        if (std::find(spec.scenarios.begin(), spec.scenarios.end(), s) == spec.scenarios.end())
            continue;
        std::vector<double> success, usage, delay;
        for (const auto& o : outcomes) {
            const auto* r = o.report(s);
            if (!r) continue;
            success.push_back(r->success_rate);
            usage.push_back(r->auv_usage_rate);
            delay.push_back(r->mean_delay_s);
        }
        ScenarioStats st;
        st.scenario = s;
        st.runs = static_cast<int>(success.size());
        std::tie(st.mean_success_rate, st.stddev_success_rate) = mean_stddev(success);
        std::tie(st.mean_auv_usage_rate, st.stddev_auv_usage_rate) = mean_stddev(usage);
        std::tie(st.mean_delay_s, st.stddev_delay_s) = mean_stddev(delay);
        agg.stats.push_back(st);
    }
    for (const auto& o : outcomes)
        for (const auto& r : o.reports)
            agg.raw.push_back({o.run, r.scenario, r.success_rate, r.auv_usage_rate, r.mean_delay_s});
    agg.outcomes = std::move(outcomes);
    return agg;
}

AggregateResult run_experiment(const ExperimentSpec& requested, const RunProgressFn& progress) {
    const ExperimentSpec spec = resolved(requested);
    spec.validate();
    const int runs = spec.runs;
    const int workers = std::min(
        runs, spec.threads > 0 ? spec.threads
                               : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));

    std::vector<RunOutcome> outcomes(static_cast<std::size_t>(runs));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(runs));
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex progress_mutex;
    int finished = 0;

    auto worker = [&] {
        for (int r = next++; r < runs && !failed; r = next++) {
            try {
                outcomes[static_cast<std::size_t>(r)] = run_single(spec, r);
            } catch (...) {
                errors[static_cast<std::size_t>(r)] = std::current_exception();
                failed = true;
                continue;
            }
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(++finished, r);
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }

    for (int r = 0; r < runs; ++r) {
        if (!errors[static_cast<std::size_t>(r)]) continue;
        try {
            std::rethrow_exception(errors[static_cast<std::size_t>(r)]);
        } catch (const std::exception& e) {
            throw ExperimentError(r, e.what());
        }
    }
    return aggregate(spec, std::move(outcomes));
}

DensityStudy auv_density_study(const ExperimentSpec& spec, const RunProgressFn& progress) {
    if (spec.counts.sensors < 5)
        throw ConfigError("sensors", "per-five density requires sensors >= 5");
    DensityStudy study;
    study.per_node = run_experiment(with_density(spec, AuvDensity::OnePerNode), progress);
    study.per_five = run_experiment(with_density(spec, AuvDensity::OnePerFive), progress);
    return study;
}

}  // namespace uwsn
