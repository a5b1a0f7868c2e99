#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "uwsn/harness.hpp"

namespace uwsn {

using nlohmann::json;

// JSON mappings. Readers accept partial objects and fill defaults; writers always emit
// every field so outputs are self-describing.

void to_json(json& j, const Environment& v);
void from_json(const json& j, Environment& v);
void to_json(json& j, const DeliveryModel& v);
void from_json(const json& j, DeliveryModel& v);
void to_json(json& j, const LinkBudget& v);
void to_json(json& j, const Position& v);
void from_json(const json& j, Position& v);
void to_json(json& j, const NodeCounts& v);
void from_json(const json& j, NodeCounts& v);
void to_json(json& j, const Topology& v);
void from_json(const json& j, Topology& v);
void to_json(json& j, const ClusterModel& v);
void from_json(const json& j, ClusterModel& v);
void to_json(json& j, const KMeansConfig& v);
void from_json(const json& j, KMeansConfig& v);
void to_json(json& j, const GaConfig& v);
void from_json(const json& j, GaConfig& v);
void to_json(json& j, const PsoConfig& v);
void from_json(const json& j, PsoConfig& v);
void to_json(json& j, const Genome& v);
void to_json(json& j, const OptimizationResult& v);
void to_json(json& j, const SimulationConfig& v);
void from_json(const json& j, SimulationConfig& v);
void to_json(json& j, const ChannelSummary& v);
void to_json(json& j, const Route& v);
void to_json(json& j, const RelayQueue& v);
void to_json(json& j, const TransmissionRecord& v);
void to_json(json& j, const SimulationReport& v);
void to_json(json& j, const ExperimentSpec& v);
void from_json(const json& j, ExperimentSpec& v);
void to_json(json& j, const ScenarioStats& v);
void to_json(json& j, const RawRunRow& v);
void to_json(json& j, const AggregateResult& v);
void to_json(json& j, const PipelineResult& v);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// scenario,node_id,route,sent,delivered,success_ratio,mean_delay_s
std::string records_csv(const std::vector<SimulationReport>& reports);
/// run,scenario,success_rate,auv_usage_rate,mean_delay_s
std::string runs_csv(const std::vector<RawRunRow>& rows);
/// scenario,mean_success_rate
std::string summary_csv(const std::vector<ScenarioStats>& stats);
/// stage,step,best_cost
std::string convergence_csv(const PipelineResult& result);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

/// Pretty-printed with a trailing newline; byte-stable for equal values.
std::string dump(const json& j);

}  // namespace uwsn
