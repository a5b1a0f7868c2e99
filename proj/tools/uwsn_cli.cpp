// uwsn: deploy, optimize, simulate and batch-run underwater EM sensor networks.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uwsn/errors.hpp"
#include "uwsn/io.hpp"
#include "uwsn/service.hpp"

namespace fs = std::filesystem;
using namespace uwsn;

namespace {

struct Flags {
    std::optional<std::string> config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> sensors, auvs, hubs;
    std::optional<double> temp, salinity, field;
    std::optional<int> threads;
    std::optional<std::string> topology;
    std::optional<std::string> scenario;
    std::optional<int> runs;
    std::optional<std::string> density;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<std::string> static_dir;
    int verbosity = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON config file (flags override its fields)");
    cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Root seed");
    cmd->add_option("--sensors", f.sensors, "Sensor count");
    cmd->add_option("--auvs", f.auvs, "AUV count");
    cmd->add_option("--hubs", f.hubs, "Hub count");
    cmd->add_option("--temp", f.temp, "Seawater temperature, C");
    cmd->add_option("--salinity", f.salinity, "Salinity, PSU");
    cmd->add_option("--field", f.field, "Field edge length, m");
    cmd->add_option("--threads", f.threads, "Worker threads for batch runs (0 = all cores)");
    cmd->add_flag("-v,--verbose", f.verbosity, "Progress on stderr");
}

ExperimentSpec build_spec(const Flags& f) {
    ExperimentSpec spec;
    if (f.config) from_json(json::parse(read_file(*f.config)), spec);
    if (f.seed) spec.base_seed = *f.seed;
    if (f.sensors) spec.counts.sensors = *f.sensors;
    if (f.auvs) spec.counts.auvs = *f.auvs;
    if (f.hubs) spec.counts.hubs = *f.hubs;
    if (f.temp) spec.environment.temperature_c = *f.temp;
    if (f.salinity) spec.environment.salinity_psu = *f.salinity;
    if (f.field) spec.field_size = *f.field;
    if (f.threads) spec.threads = *f.threads;
    if (f.runs) spec.runs = *f.runs;
    if (f.scenario && *f.scenario != "all") spec.scenarios = {parse_scenario(*f.scenario)};
    if (f.density && *f.density != "both") spec = with_density(spec, parse_density(*f.density));
    validate_counts(spec.counts);
    spec.validate();
    return spec;
}

// Loads --topology when given (environment flags still apply), else deploys from the spec.
Topology input_topology(const Flags& f, const ExperimentSpec& spec) {
    if (!f.topology) return random_deploy(spec.counts, spec.environment, spec.field_size, spec.base_seed);
    Topology t = json::parse(read_file(*f.topology)).get<Topology>();
    if (f.temp) t.environment.temperature_c = *f.temp;
    if (f.salinity) t.environment.salinity_psu = *f.salinity;
    if (f.seed) t.seed = *f.seed;
    t.validate();
    return t;
}

void write_pipeline(const fs::path& out, const PipelineResult& p) {
    write_file(out / "topology.json", dump(json(p.optimized)));
    write_file(out / "cluster.json", dump(json(p.clusters)));
    write_file(out / "convergence.csv", convergence_csv(p));
}

int cmd_deploy(const Flags& f) {
    const auto spec = build_spec(f);
    const Topology t = random_deploy(spec.counts, spec.environment, spec.field_size, spec.base_seed);
    const fs::path path = fs::path(f.out) / "topology.json";
    write_file(path, dump(json(t)));
    // Re-read and validate what was written.
    json::parse(read_file(path)).get<Topology>().validate();
    return 0;
}

int cmd_optimize(const Flags& f) {
    const auto spec = build_spec(f);
    const Topology t = input_topology(f, spec);
    PipelineProgress progress;
    if (f.verbosity > 0) {
        progress.on_ga = [](int g, double c) { std::cerr << "ga " << g << " best " << c << '\n'; };
        progress.on_pso = [](int i, double c) { std::cerr << "pso " << i << " best " << c << '\n'; };
    }
    write_pipeline(f.out, optimize_pipeline(t, spec.optimizer, progress));
    return 0;
}

int cmd_run(const Flags& f) {
    const auto spec = build_spec(f);
    RunOutcome outcome;
    if (f.topology) {
        // Same flow as one harness run, starting from the given layout.
        outcome.seed = spec.base_seed;
        outcome.deployed = input_topology(f, spec);
        ExperimentSpec local = spec;
        local.environment = outcome.deployed.environment;
        bool needs_pipeline = false;
        for (auto s : local.scenarios) needs_pipeline |= s != Scenario::Initial;
        if (needs_pipeline) outcome.pipeline = optimize_pipeline(outcome.deployed, local.optimizer);
        for (Scenario s : kAllScenarios) {
            if (std::find(local.scenarios.begin(), local.scenarios.end(), s) == local.scenarios.end()) continue;
            outcome.reports.push_back(
                s == Scenario::Initial
                    ? run_scenario(s, outcome.deployed, nullptr, local.delivery, local.environment,
                                   local.simulation, outcome.seed)
                    : run_scenario(s, outcome.pipeline->optimized, &outcome.pipeline->clusters,
                                   local.delivery, local.environment, local.simulation, outcome.seed));
        }
    } else {
        outcome = run_single(spec, 0);
    }

    const fs::path out = f.out;
    json reports = json::array();
    for (const auto& r : outcome.reports) reports.push_back(r);
    write_file(out / "report.json", dump({{"seed", outcome.seed}, {"reports", reports}}));
    std::vector<RawRunRow> rows;
    for (const auto& r : outcome.reports)
        rows.push_back({0, r.scenario, r.success_rate, r.auv_usage_rate, r.mean_delay_s});
    write_file(out / "runs.csv", runs_csv(rows));
    write_file(out / "records.csv", records_csv(outcome.reports));
    if (outcome.pipeline)
        write_pipeline(out, *outcome.pipeline);
    else
        write_file(out / "topology.json", dump(json(outcome.deployed)));
    return 0;
}

void write_aggregate(const fs::path& out, const AggregateResult& agg) {
    write_file(out / "report.json", dump(json(agg)));
    write_file(out / "runs.csv", runs_csv(agg.raw));
    write_file(out / "summary.csv", summary_csv(agg.stats));
}

int cmd_experiment(const Flags& f) {
    const auto spec = build_spec(f);
    RunProgressFn progress;
    if (f.verbosity > 0)
        progress = [&spec](int finished, int run) {
            std::cerr << "run " << run << " done (" << finished << "/" << spec.runs << ")\n";
        };
    if (f.density && *f.density == "both") {
        const auto study = auv_density_study(spec, progress);
        write_aggregate(fs::path(f.out) / "per-node", study.per_node);
        write_aggregate(fs::path(f.out) / "per-five", study.per_five);
        return 0;
    }
    write_aggregate(f.out, run_experiment(spec, progress));
    return 0;
}

int cmd_serve(const Flags& f) {
    const auto spec = build_spec(f);
    service::Session session(spec);
    service::ServerOptions opts;
    opts.host = f.host;
    opts.port = f.port;
    if (f.static_dir) opts.static_dir = *f.static_dir;
    service::Server server(session, opts);
    const int port = server.bind();
    if (port < 0) throw std::runtime_error("cannot bind " + f.host + ":" + std::to_string(f.port));
    std::cerr << "listening on http://" << f.host << ":" << port << '\n';
    server.listen();
    return 0;
}

int fail(int code, const std::string& message, const std::string& field = {}) {
    json err = {{"error", message}};
    if (!field.empty()) err["field"] = field;
    std::cerr << err.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Underwater EM sensor network simulator"};
    app.require_subcommand(1, 1);
    Flags f;

    auto* deploy = app.add_subcommand("deploy", "Randomly deploy a network and write topology.json");
    auto* optimize = app.add_subcommand("optimize", "Run KMeans -> GA -> PSO placement");
    auto* run = app.add_subcommand("run", "Simulate one seeded run of the scenarios");
    auto* experiment = app.add_subcommand("experiment", "Monte-Carlo batch over seeds");
    auto* serve = app.add_subcommand("serve", "HTTP service for the browser panel");
    for (auto* cmd : {deploy, optimize, run, experiment, serve}) add_common(cmd, f);

    for (auto* cmd : {optimize, run}) cmd->add_option("--topology", f.topology, "Input topology JSON");
    for (auto* cmd : {run, experiment})
        cmd->add_option("--scenario", f.scenario, "initial | leaderless | leader-based | all");
    experiment->add_option("--runs", f.runs, "Number of runs");
    experiment->add_option("--density", f.density, "per-node | per-five | both");
    serve->add_option("--host", f.host, "Bind address")->capture_default_str();
    serve->add_option("--port", f.port, "Bind port")->capture_default_str();
    serve->add_option("--static", f.static_dir, "Directory served at /");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*deploy) return cmd_deploy(f);
        if (*optimize) return cmd_optimize(f);
        if (*run) return cmd_run(f);
        if (*experiment) return cmd_experiment(f);
        if (*serve) return cmd_serve(f);
    } catch (const ConfigError& e) {
        return fail(2, e.what(), e.field());
    } catch (const DomainError& e) {
        return fail(2, e.what());
    } catch (const json::exception& e) {
        return fail(2, std::string("invalid JSON: ") + e.what());
    } catch (const std::exception& e) {
        return fail(1, e.what());
    }
    return 1;
}
