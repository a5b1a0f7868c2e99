#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "uwsn/io.hpp"

namespace uwsn::service {

/// Request rejected because a job of the same kind is already running (HTTP 409).
class BusyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StampedReport {
    std::uint64_t revision = 0;
    bool stale = false;
    SimulationReport report;
};

struct StampedOptimization {
    std::uint64_t revision = 0;
    bool stale = false;
    OptimizationResult ga;
    OptimizationResult pso;
};

struct StampedExperiment {
    std::uint64_t revision = 0;
    bool stale = false;
    json result;
};

/// One published revision of the session. Immutable once published.
struct SessionState {
    std::uint64_t revision = 0;
    /// Counts, optimizer, delivery and simulation settings; environment mirrors `environment`.
    ExperimentSpec config;
    Environment environment;
    /// Layout as deployed (Initial scenario runs here; optimization starts here).
    Topology deployed;
    /// Current layout: deployed until an optimization replaces it.
    Topology topology;
    std::optional<ClusterModel> clusters;
    std::optional<StampedOptimization> optimization;
    std::map<Scenario, StampedReport> reports;
    std::optional<StampedExperiment> experiment;
};

json state_json(const SessionState& s);

struct Event {
    std::uint64_t seq = 0;
    std::string type;
    json data;
};

/// Append-only, bounded fan-out log. Subscribers poll by sequence number.
class EventBus {
public:
    explicit EventBus(std::size_t retain = 4096) : _retain(retain) {}

    std::uint64_t publish(std::string type, json data);

    /// Events with seq > `after`, waiting up to `timeout` for at least one.
    std::vector<Event> wait_after(std::uint64_t after, std::chrono::milliseconds timeout);
    std::vector<Event> since(std::uint64_t after) const;
    std::uint64_t last_seq() const;

    /// Wakes all waiters; subsequent waits return immediately.
    void close();
    bool closed() const;

private:
    mutable std::mutex _mutex;
    std::condition_variable _cv;
    std::deque<Event> _events;
    std::uint64_t _next = 1;
    std::size_t _retain;
    bool _closed = false;
};

enum class JobKind { Optimize, Run, Experiment };
std::string_view to_string(JobKind k);

struct JobTicket {
    std::uint64_t job_id = 0;
    JobKind kind = JobKind::Optimize;
};

/// The single mutable session behind the HTTP API. Mutations and jobs serialize on one
/// writer lock; readers take the last published revision without blocking on jobs.
class Session {
public:
    explicit Session(ExperimentSpec defaults = {});
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    std::shared_ptr<const SessionState> snapshot() const;
    json get_state() const { return state_json(*snapshot()); }

    /// Body: {"topology": {...}} or any of {"counts", "seed", "field_size", "environment"}.
    std::uint64_t deploy(const json& body);
    std::uint64_t deploy(const Topology& topology);

    /// Throws ConfigError naming temperature_c or salinity_psu on invalid input.
    std::uint64_t set_environment(double temperature_c, double salinity_psu);

    JobTicket trigger_optimize();
    /// nullopt runs every scenario.
    JobTicket trigger_run(std::optional<Scenario> scenario);
    JobTicket trigger_experiment(const json& spec_overrides);

    /// Blocks until no job is running.
    void wait_idle();

    EventBus& events() { return _events; }

    void save(const std::filesystem::path& path) const;

private:
    template <typename Fn>
    JobTicket start_job(JobKind kind, Fn work);
    void publish(std::shared_ptr<const SessionState> next, const std::string& cause);
    std::shared_ptr<SessionState> mutable_copy() const;

    mutable std::mutex _snap_mutex;
    std::shared_ptr<const SessionState> _state;
    std::mutex _writer;
    EventBus _events;

    std::mutex _jobs_mutex;
    std::condition_variable _jobs_cv;
    std::map<JobKind, bool> _busy;
    std::vector<std::jthread> _workers;
    std::uint64_t _next_job = 1;
};

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Served at / when set (the browser panel).
    std::optional<std::filesystem::path> static_dir;
};

/// HTTP front end: GET /state, POST /deploy, /environment, /optimize, /run, /experiment,
/// /snapshot, and GET /events as a server-sent event stream.
class Server {
public:
    Server(Session& session, ServerOptions options);
    ~Server();

    /// Binds; returns the bound port (useful with port 0), or -1 on failure.
    int bind();
    /// Serves until stop(). Call after bind().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> _impl;
};

}  // namespace uwsn::service
