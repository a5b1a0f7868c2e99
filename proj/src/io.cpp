#include "uwsn/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "uwsn/errors.hpp"

namespace uwsn {

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

std::string_view to_string(PairScope s) {
    return s == PairScope::AllPairs ? "all-pairs" : "intra-cluster";
}

PairScope parse_pair_scope(std::string_view s) {
    if (s == "all-pairs") return PairScope::AllPairs;
    if (s == "intra-cluster") return PairScope::IntraCluster;
    throw ConfigError("pair_scope", "pair_scope must be all-pairs or intra-cluster");
}

json node_ref_json(const NodeRef& r) {
    return {{"kind", std::string(to_string(r.kind))}, {"id", r.id}};
}

json nodes_json(const std::vector<Node>& nodes) {
    json arr = json::array();
    for (const auto& n : nodes) arr.push_back({{"id", n.id}, {"x", n.position.x}, {"y", n.position.y}});
    return arr;
}

std::vector<Node> nodes_from(const json& j, const char* key, NodeKind kind) {
    std::vector<Node> out;
    if (!j.contains(key)) return out;
    for (const auto& e : j.at(key)) {
        Node n;
        n.kind = kind;
        n.id = e.value("id", static_cast<int>(out.size()));
        n.position = {e.at("x").get<double>(), e.at("y").get<double>()};
        out.push_back(n);
    }
    return out;
}

}  // namespace

void to_json(json& j, const Environment& v) {
    j = {{"temperature_c", v.temperature_c},
         {"salinity_psu", v.salinity_psu},
         {"frequency_hz", v.frequency_hz}};
    if (v.pinned_conductivity_s_per_m) j["conductivity_s_per_m"] = *v.pinned_conductivity_s_per_m;
}

void from_json(const json& j, Environment& v) {
    read_opt(j, "temperature_c", v.temperature_c);
    read_opt(j, "salinity_psu", v.salinity_psu);
    read_opt(j, "frequency_hz", v.frequency_hz);
    if (auto it = j.find("conductivity_s_per_m"); it != j.end() && !it->is_null())
        v.pinned_conductivity_s_per_m = it->get<double>();
}

void to_json(json& j, const DeliveryModel& v) {
    j = {{"slope_s", v.slope_s}, {"threshold_theta_db", v.threshold_theta_db}};
}

void from_json(const json& j, DeliveryModel& v) {
    read_opt(j, "slope_s", v.slope_s);
    read_opt(j, "threshold_theta_db", v.threshold_theta_db);
}

void to_json(json& j, const LinkBudget& v) {
    j = {{"distance_m", v.distance_m},
         {"effective_distance_m", v.effective_distance_m},
         {"attenuation_db", v.attenuation_db},
         {"delay_s", v.delay_s},
         {"delivery_prob", v.delivery_prob}};
}

void to_json(json& j, const Position& v) { j = {{"x", v.x}, {"y", v.y}}; }

void from_json(const json& j, Position& v) {
    v.x = j.at("x").get<double>();
    v.y = j.at("y").get<double>();
}

void to_json(json& j, const NodeCounts& v) {
    j = {{"sensors", v.sensors}, {"auvs", v.auvs}, {"hubs", v.hubs}};
}

void from_json(const json& j, NodeCounts& v) {
    read_opt(j, "sensors", v.sensors);
    read_opt(j, "auvs", v.auvs);
    read_opt(j, "hubs", v.hubs);
}

void to_json(json& j, const Topology& v) {
    j = {{"field_size", v.field_size},
         {"seed", v.seed},
         {"environment", v.environment},
         {"sensors", nodes_json(v.sensors)},
         {"auvs", nodes_json(v.auvs)},
         {"hubs", nodes_json(v.hubs)}};
}

void from_json(const json& j, Topology& v) {
    v = Topology{};
    read_opt(j, "field_size", v.field_size);
    read_opt(j, "seed", v.seed);
    read_opt(j, "environment", v.environment);
    v.sensors = nodes_from(j, "sensors", NodeKind::Sensor);
    v.auvs = nodes_from(j, "auvs", NodeKind::Auv);
    v.hubs = nodes_from(j, "hubs", NodeKind::Hub);
}

void to_json(json& j, const ClusterModel& v) {
    j = {{"k", v.k},
         {"assignment", v.assignment},
         {"centroids", v.centroids},
         {"leaders", v.leaders},
         {"inertia", v.inertia},
         {"inertia_history", v.inertia_history}};
}

void from_json(const json& j, ClusterModel& v) {
    v = ClusterModel{};
    v.k = j.at("k").get<int>();
    v.assignment = j.at("assignment").get<std::vector<int>>();
    v.centroids = j.at("centroids").get<std::vector<Position>>();
    read_opt(j, "leaders", v.leaders);
    read_opt(j, "inertia", v.inertia);
    read_opt(j, "inertia_history", v.inertia_history);
}

void to_json(json& j, const KMeansConfig& v) {
    j = {{"k", v.k ? json(*v.k) : json(nullptr)},
         {"max_iters", v.max_iters},
         {"tol", v.tol},
         {"restarts", v.restarts}};
}

void from_json(const json& j, KMeansConfig& v) {
    if (auto it = j.find("k"); it != j.end()) {
        if (it->is_null())
            v.k.reset();
        else
            v.k = it->get<int>();
    }
    read_opt(j, "max_iters", v.max_iters);
    read_opt(j, "tol", v.tol);
    read_opt(j, "restarts", v.restarts);
}

void to_json(json& j, const GaConfig& v) {
    j = {{"population_size", v.population_size},
         {"generations", v.generations},
         {"blx_alpha", v.blx_alpha},
         {"mutation_prob", v.mutation_prob},
         {"mutation_sigma", v.mutation_sigma},
         {"tournament_size", v.tournament_size},
         {"seed", v.seed}};
}

void from_json(const json& j, GaConfig& v) {
    read_opt(j, "population_size", v.population_size);
    read_opt(j, "generations", v.generations);
    read_opt(j, "blx_alpha", v.blx_alpha);
    read_opt(j, "mutation_prob", v.mutation_prob);
    read_opt(j, "mutation_sigma", v.mutation_sigma);
    read_opt(j, "tournament_size", v.tournament_size);
    read_opt(j, "seed", v.seed);
}

void to_json(json& j, const PsoConfig& v) {
    j = {{"swarm_size", v.swarm_size},
         {"iterations", v.iterations},
         {"inertia_w", v.inertia_w},
         {"c1", v.c1},
         {"c2", v.c2},
         {"v_max", v.v_max},
         {"alpha_weight", v.alpha_weight},
         {"beta_weight", v.beta_weight},
         {"start_spread", v.start_spread},
         {"seed", v.seed}};
}

void from_json(const json& j, PsoConfig& v) {
    read_opt(j, "swarm_size", v.swarm_size);
    read_opt(j, "iterations", v.iterations);
    read_opt(j, "inertia_w", v.inertia_w);
    read_opt(j, "c1", v.c1);
    read_opt(j, "c2", v.c2);
    read_opt(j, "v_max", v.v_max);
    read_opt(j, "alpha_weight", v.alpha_weight);
    read_opt(j, "beta_weight", v.beta_weight);
    read_opt(j, "start_spread", v.start_spread);
    read_opt(j, "seed", v.seed);
}

void to_json(json& j, const Genome& v) { j = v.coords; }

void to_json(json& j, const OptimizationResult& v) {
    j = {{"best_genome", v.best_genome}, {"best_cost", v.best_cost}, {"cost_history", v.cost_history}};
}

void to_json(json& j, const SimulationConfig& v) {
    j = {{"packets_per_sensor", v.packets_per_sensor},
         {"queue_capacity", v.queue_capacity},
         {"service_time_s", v.service_time_s},
         {"service_per_round", v.service_per_round}};
}

void from_json(const json& j, SimulationConfig& v) {
    read_opt(j, "packets_per_sensor", v.packets_per_sensor);
    read_opt(j, "queue_capacity", v.queue_capacity);
    read_opt(j, "service_time_s", v.service_time_s);
    read_opt(j, "service_per_round", v.service_per_round);
}

void to_json(json& j, const ChannelSummary& v) {
    j = {{"conductivity_s_per_m", v.conductivity_s_per_m},
         {"attenuation_db_per_m", v.attenuation_db_per_m},
         {"phase_velocity_m_per_s", v.phase_velocity_m_per_s}};
}

void to_json(json& j, const Route& v) {
    json hops = json::array();
    for (const auto& h : v.hops)
        hops.push_back({{"from", node_ref_json(h.from)}, {"to", node_ref_json(h.to)}, {"budget", h.budget}});
    j = {{"source", v.source},
         {"leader", v.leader ? json(*v.leader) : json(nullptr)},
         {"auv", v.auv ? json(*v.auv) : json(nullptr)},
         {"hub", v.hub},
         {"description", v.describe()},
         {"delivery_prob", v.delivery_prob()},
         {"hops", hops}};
}

void to_json(json& j, const RelayQueue& v) {
    j = {{"owner", node_ref_json(v.owner)},
         {"capacity", v.capacity},
         {"peak_occupancy", v.peak_occupancy},
         {"drops", v.drops},
         {"occupancy_trace", v.occupancy_trace}};
}

void to_json(json& j, const TransmissionRecord& v) {
    j = {{"sensor_id", v.sensor_id},
         {"route", v.route},
         {"packets_sent", v.packets_sent},
         {"packets_delivered", v.packets_delivered},
         {"packets_lost_channel", v.packets_lost_channel},
         {"packets_dropped_queue", v.packets_dropped_queue},
         {"success_ratio", v.success_ratio},
         {"total_delay_s", v.total_delay_s},
         {"mean_end_to_end_delay_s", v.mean_end_to_end_delay_s},
         {"attenuation_expended_db", v.attenuation_expended_db}};
}

void to_json(json& j, const SimulationReport& v) {
    j = {{"scenario", std::string(to_string(v.scenario))},
         {"seed", v.seed},
         {"environment", v.environment},
         {"channel", v.channel},
         {"packets_sent", v.packets_sent},
         {"packets_delivered", v.packets_delivered},
         {"success_rate", v.success_rate},
         {"auv_usage_rate", v.auv_usage_rate},
         {"mean_delay_s", v.mean_delay_s},
         {"total_attenuation_db", v.total_attenuation_db},
         {"records", v.records},
         {"queues", v.queues},
         {"clusters", v.clusters ? json(*v.clusters) : json(nullptr)}};
}

void to_json(json& j, const ExperimentSpec& v) {
    json scenarios = json::array();
    for (auto s : v.scenarios) scenarios.push_back(std::string(to_string(s)));
    j = {{"runs", v.runs},
         {"seed", v.base_seed},
         {"counts", v.counts},
         {"field_size", v.field_size},
         {"environment", v.environment},
         {"scenarios", scenarios},
         {"kmeans", v.optimizer.kmeans},
         {"ga", v.optimizer.ga},
         {"pso", v.optimizer.pso},
         {"pair_scope", std::string(to_string(v.optimizer.pair_scope))},
         {"delivery", v.delivery},
         {"simulation", v.simulation},
         {"auv_density", v.auv_density ? json(std::string(to_string(*v.auv_density))) : json(nullptr)},
         {"threads", v.threads}};
}

void from_json(const json& j, ExperimentSpec& v) {
    read_opt(j, "runs", v.runs);
    read_opt(j, "seed", v.base_seed);
    read_opt(j, "counts", v.counts);
    read_opt(j, "field_size", v.field_size);
    read_opt(j, "environment", v.environment);
    if (auto it = j.find("scenarios"); it != j.end() && !it->is_null()) {
        v.scenarios.clear();
        for (const auto& s : *it) v.scenarios.push_back(parse_scenario(s.get<std::string>()));
    }
    read_opt(j, "kmeans", v.optimizer.kmeans);
    read_opt(j, "ga", v.optimizer.ga);
    read_opt(j, "pso", v.optimizer.pso);
    if (auto it = j.find("pair_scope"); it != j.end() && !it->is_null())
        v.optimizer.pair_scope = parse_pair_scope(it->get<std::string>());
    read_opt(j, "delivery", v.delivery);
    read_opt(j, "simulation", v.simulation);
    if (auto it = j.find("auv_density"); it != j.end()) {
        if (it->is_null())
            v.auv_density.reset();
        else
            v.auv_density = parse_density(it->get<std::string>());
    }
    read_opt(j, "threads", v.threads);
}

void to_json(json& j, const ScenarioStats& v) {
    j = {{"scenario", std::string(to_string(v.scenario))},
         {"runs", v.runs},
         {"mean_success_rate", v.mean_success_rate},
         {"stddev_success_rate", v.stddev_success_rate},
         {"mean_auv_usage_rate", v.mean_auv_usage_rate},
         {"stddev_auv_usage_rate", v.stddev_auv_usage_rate},
         {"mean_delay_s", v.mean_delay_s},
         {"stddev_delay_s", v.stddev_delay_s}};
}

void to_json(json& j, const RawRunRow& v) {
    j = {{"run", v.run},
         {"scenario", std::string(to_string(v.scenario))},
         {"success_rate", v.success_rate},
         {"auv_usage_rate", v.auv_usage_rate},
         {"mean_delay_s", v.mean_delay_s}};
}

void to_json(json& j, const AggregateResult& v) {
    j = {{"spec", v.spec}, {"stats", v.stats}, {"raw", v.raw}};
}

void to_json(json& j, const PipelineResult& v) {
    j = {{"initial_clusters", v.initial_clusters},
         {"start_layout", v.start_layout},
         {"ga", v.ga},
         {"pso", v.pso},
         {"clusters", v.clusters},
         {"optimized", v.optimized}};
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string records_csv(const std::vector<SimulationReport>& reports) {
    std::ostringstream os;
    os << "scenario,node_id,route,sent,delivered,success_ratio,mean_delay_s\n";
    for (const auto& r : reports)
        for (const auto& rec : r.records)
            os << table_label(r.scenario) << ",Sensor " << rec.sensor_id << ','
               << csv_field(rec.route.describe()) << ',' << rec.packets_sent << ','
               << rec.packets_delivered << ',' << format_double(rec.success_ratio) << ','
               << format_double(rec.mean_end_to_end_delay_s) << '\n';
    return os.str();
}

std::string runs_csv(const std::vector<RawRunRow>& rows) {
    std::ostringstream os;
    os << "run,scenario,success_rate,auv_usage_rate,mean_delay_s\n";
    for (const auto& r : rows)
        os << r.run << ',' << to_string(r.scenario) << ',' << format_double(r.success_rate) << ','
           << format_double(r.auv_usage_rate) << ',' << format_double(r.mean_delay_s) << '\n';
    return os.str();
}

std::string summary_csv(const std::vector<ScenarioStats>& stats) {
    std::ostringstream os;
    os << "scenario,mean_success_rate\n";
    for (const auto& s : stats) os << to_string(s.scenario) << ',' << format_double(s.mean_success_rate) << '\n';
    return os.str();
}

std::string convergence_csv(const PipelineResult& result) {
    std::ostringstream os;
    os << "stage,step,best_cost\n";
    for (std::size_t i = 0; i < result.ga.cost_history.size(); ++i)
        os << "ga," << i << ',' << format_double(result.ga.cost_history[i]) << '\n';
    for (std::size_t i = 0; i < result.pso.cost_history.size(); ++i)
        os << "pso," << i << ',' << format_double(result.pso.cost_history[i]) << '\n';
    return os.str();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace uwsn
