#include "uwsn/service.hpp"

#include <httplib.h>

#include "uwsn/errors.hpp"

namespace uwsn::service {

// ---------------------------------------------------------------------------
// State

json state_json(const SessionState& s) {
    json channel = nullptr;
    if (physics::conductivity(s.environment) > 0.0) channel = summarize_channel(s.environment);

    json reports = json::object();
    for (const auto& [scenario, stamped] : s.reports)
        reports[std::string(to_string(scenario))] = {
            {"revision", stamped.revision}, {"stale", stamped.stale}, {"report", stamped.report}};

    json optimization = nullptr;
    if (s.optimization)
        optimization = {{"revision", s.optimization->revision},
                        {"stale", s.optimization->stale},
                        {"ga", s.optimization->ga},
                        {"pso", s.optimization->pso}};

    json experiment = nullptr;
    if (s.experiment)
        experiment = {{"revision", s.experiment->revision},
                      {"stale", s.experiment->stale},
                      {"result", s.experiment->result}};

    return {{"revision", s.revision},
            {"environment", s.environment},
            {"channel", channel},
            {"config", s.config},
            {"deployed", s.deployed},
            {"topology", s.topology},
            {"clusters", s.clusters ? json(*s.clusters) : json(nullptr)},
            {"optimization", optimization},
            {"reports", reports},
            {"experiment", experiment}};
}

// ---------------------------------------------------------------------------
// EventBus

std::uint64_t EventBus::publish(std::string type, json data) {
    std::uint64_t seq;
    {
        std::lock_guard lock(_mutex);
        seq = _next++;
        _events.push_back(Event{seq, std::move(type), std::move(data)});
        while (_events.size() > _retain) _events.pop_front();
    }
    _cv.notify_all();
    return seq;
}

std::vector<Event> EventBus::since(std::uint64_t after) const {
    std::lock_guard lock(_mutex);
    std::vector<Event> out;
    for (const auto& e : _events)
        if (e.seq > after) out.push_back(e);
    return out;
}

std::vector<Event> EventBus::wait_after(std::uint64_t after, std::chrono::milliseconds timeout) {
    {
        std::unique_lock lock(_mutex);
        _cv.wait_for(lock, timeout, [&] { return _closed || _next - 1 > after; });
    }
    return since(after);
}

std::uint64_t EventBus::last_seq() const {
    std::lock_guard lock(_mutex);
    return _next - 1;
}

void EventBus::close() {
    {
        std::lock_guard lock(_mutex);
        _closed = true;
    }
    _cv.notify_all();
}

bool EventBus::closed() const {
    std::lock_guard lock(_mutex);
    return _closed;
}

// ---------------------------------------------------------------------------
// Session

std::string_view to_string(JobKind k) {
    switch (k) {
        case JobKind::Optimize: return "optimize";
        case JobKind::Run: return "run";
        case JobKind::Experiment: return "experiment";
    }
    return "?";
}

Session::Session(ExperimentSpec defaults) {
    defaults.validate();
    auto s = std::make_shared<SessionState>();
    s->revision = 1;
    s->config = defaults;
    s->environment = defaults.environment;
    s->deployed = random_deploy(defaults.counts, defaults.environment, defaults.field_size,
                                defaults.base_seed);
    s->topology = s->deployed;
    _state = std::move(s);
}

Session::~Session() {
    wait_idle();
    _workers.clear();
    _events.close();
}

std::shared_ptr<const SessionState> Session::snapshot() const {
    std::lock_guard lock(_snap_mutex);
    return _state;
}

std::shared_ptr<SessionState> Session::mutable_copy() const {
    auto next = std::make_shared<SessionState>(*snapshot());
    ++next->revision;
    return next;
}

void Session::publish(std::shared_ptr<const SessionState> next, const std::string& cause) {
    const auto revision = next->revision;
    {
        std::lock_guard lock(_snap_mutex);
        _state = std::move(next);
    }
    _events.publish("revision", {{"revision", revision}, {"cause", cause}});
}

std::uint64_t Session::deploy(const Topology& topology) {
    topology.validate();
    std::lock_guard writer(_writer);
    auto next = mutable_copy();
    next->environment = topology.environment;
    next->config.environment = topology.environment;
    next->config.field_size = topology.field_size;
    next->config.base_seed = topology.seed;
    next->config.counts = {static_cast<int>(topology.sensors.size()),
                           static_cast<int>(topology.auvs.size()),
                           static_cast<int>(topology.hubs.size())};
    next->deployed = topology;
    next->topology = topology;
    next->clusters.reset();
    next->optimization.reset();
    next->reports.clear();
    next->experiment.reset();
    const auto revision = next->revision;
    publish(std::move(next), "deploy");
    return revision;
}

std::uint64_t Session::deploy(const json& body) {
    if (auto it = body.find("topology"); it != body.end()) return deploy(it->get<Topology>());

    const auto base = snapshot();
    NodeCounts counts = base->config.counts;
    std::uint64_t seed = base->config.base_seed;
    double field = base->config.field_size;
    Environment env = base->environment;
    if (auto it = body.find("counts"); it != body.end()) from_json(*it, counts);
    for (const char* key : {"sensors", "auvs", "hubs"})
        if (auto it = body.find(key); it != body.end()) {
            const int v = it->get<int>();
            if (std::string_view(key) == "sensors") counts.sensors = v;
            else if (std::string_view(key) == "auvs") counts.auvs = v;
            else counts.hubs = v;
        }
    if (auto it = body.find("seed"); it != body.end()) seed = it->get<std::uint64_t>();
    if (auto it = body.find("field_size"); it != body.end()) field = it->get<double>();
    if (auto it = body.find("environment"); it != body.end()) from_json(*it, env);
    return deploy(random_deploy(counts, env, field, seed));
}

std::uint64_t Session::set_environment(double temperature_c, double salinity_psu) {
    if (!std::isfinite(temperature_c) || temperature_c < kMinTemperatureC ||
        temperature_c > kMaxTemperatureC)
        throw ConfigError("temperature_c", "temperature_c must lie in [-2, 40] C");
    if (!std::isfinite(salinity_psu) || salinity_psu < 0.0)
        throw ConfigError("salinity_psu", "salinity_psu must be >= 0");

    std::lock_guard writer(_writer);
    auto next = mutable_copy();
    Environment env = next->environment;
    env.temperature_c = temperature_c;
    env.salinity_psu = salinity_psu;
    if (!env.pinned_conductivity_s_per_m && !(physics::conductivity(env) > 0.0))
        throw ConfigError("salinity_psu", "salinity_psu gives zero conductivity; the channel model is undefined");

    next->environment = env;
    next->config.environment = env;
    next->deployed.environment = env;
    next->topology.environment = env;
    for (auto& [s, r] : next->reports) r.stale = true;
    if (next->optimization) next->optimization->stale = true;
    if (next->experiment) next->experiment->stale = true;
    const auto revision = next->revision;
    publish(std::move(next), "environment");
    return revision;
}

template <typename Fn>
JobTicket Session::start_job(JobKind kind, Fn work) {
    JobTicket ticket;
    ticket.kind = kind;
    {
        std::lock_guard lock(_jobs_mutex);
        if (_busy[kind])
            throw BusyError(std::string("a ") + std::string(to_string(kind)) + " job is already running");
        _busy[kind] = true;
        ticket.job_id = _next_job++;
    }
    _events.publish("started", {{"job_id", ticket.job_id}, {"kind", std::string(to_string(kind))}});

    auto body = [this, ticket, work = std::move(work)] {
        try {
            std::lock_guard writer(_writer);
            auto next = work(ticket);
            const auto revision = next->revision;
            json state = state_json(*next);
            publish(std::move(next), std::string(to_string(ticket.kind)));
            _events.publish("completed", {{"job_id", ticket.job_id},
                                          {"kind", std::string(to_string(ticket.kind))},
                                          {"revision", revision},
                                          {"state", std::move(state)}});
        } catch (const std::exception& e) {
            _events.publish("failed", {{"job_id", ticket.job_id},
                                       {"kind", std::string(to_string(ticket.kind))},
                                       {"error", e.what()}});
        }
        {
            std::lock_guard lock(_jobs_mutex);
            _busy[ticket.kind] = false;
        }
        _jobs_cv.notify_all();
    };
    std::lock_guard lock(_jobs_mutex);
    _workers.emplace_back(std::move(body));
    return ticket;
}

JobTicket Session::trigger_optimize() {
    return start_job(JobKind::Optimize, [this](const JobTicket& t) {
        auto next = mutable_copy();
        Topology start = next->deployed;
        start.environment = next->environment;

        auto emit = [this, &t](const char* stage) {
            return [this, id = t.job_id, stage](int step, double best) {
                _events.publish("progress", {{"job_id", id},
                                             {"kind", "optimize"},
                                             {"stage", stage},
                                             {"step", step},
                                             {"best_cost", best}});
            };
        };
        const auto result = optimize_pipeline(start, next->config.optimizer, {emit("ga"), emit("pso")});

        next->topology = result.optimized;
        next->clusters = result.clusters;
        next->optimization = StampedOptimization{next->revision, false, result.ga, result.pso};
        for (auto& [s, r] : next->reports) r.stale = true;
        return next;
    });
}

JobTicket Session::trigger_run(std::optional<Scenario> scenario) {
    return start_job(JobKind::Run, [this, scenario](const JobTicket& t) {
        auto next = mutable_copy();
        const auto& cfg = next->config;
        Topology raw = next->deployed;
        raw.environment = next->environment;
        if (!next->clusters) next->clusters = cluster_sensors(next->topology, cfg.optimizer.kmeans, next->topology.seed);

        std::vector<Scenario> todo;
        if (scenario)
            todo.push_back(*scenario);
        else
            todo.assign(std::begin(kAllScenarios), std::end(kAllScenarios));

        int step = 0;
        for (Scenario s : todo) {
            SimulationReport report =
                s == Scenario::Initial
                    ? run_scenario(s, raw, nullptr, cfg.delivery, next->environment, cfg.simulation, raw.seed)
                    : run_scenario(s, next->topology, &*next->clusters, cfg.delivery, next->environment,
                                   cfg.simulation, next->topology.seed);
            next->reports[s] = StampedReport{next->revision, false, std::move(report)};
            _events.publish("progress", {{"job_id", t.job_id},
                                         {"kind", "run"},
                                         {"scenario", std::string(to_string(s))},
                                         {"step", ++step},
                                         {"total", todo.size()}});
        }
        return next;
    });
}

JobTicket Session::trigger_experiment(const json& spec_overrides) {
    ExperimentSpec spec;
    {
        const auto base = snapshot();
        spec = base->config;
        spec.environment = base->environment;
    }
    from_json(spec_overrides, spec);
    if (spec.auv_density) spec = with_density(spec, *spec.auv_density);
    spec.validate();

    return start_job(JobKind::Experiment, [this, spec](const JobTicket& t) {
        auto result = run_experiment(spec, [this, &t, &spec](int finished, int run) {
            _events.publish("progress", {{"job_id", t.job_id},
                                         {"kind", "experiment"},
                                         {"run", run},
                                         {"finished", finished},
                                         {"total", spec.runs}});
        });
        auto next = mutable_copy();
        next->experiment = StampedExperiment{next->revision, false, json(result)};
        return next;
    });
}

void Session::wait_idle() {
    std::unique_lock lock(_jobs_mutex);
    _jobs_cv.wait(lock, [&] {
        for (const auto& [k, busy] : _busy)
            if (busy) return false;
        return true;
    });
}

void Session::save(const std::filesystem::path& path) const { write_file(path, dump(get_state())); }

// ---------------------------------------------------------------------------
// Server

struct Server::Impl {
    Session& session;
    ServerOptions options;
    httplib::Server http;
    std::atomic<bool> stopping{false};

    Impl(Session& s, ServerOptions o) : session(s), options(std::move(o)) {}
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    return json::parse(req.body);
}

// Maps exceptions to status codes: validation 422, busy 409, malformed JSON 400.
template <typename Fn>
void guarded(httplib::Response& res, Fn fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        send_json(res, 422, {{"error", e.what()}, {"fields", json::array({e.field()})}});
    } catch (const DomainError& e) {
        send_json(res, 422, {{"error", e.what()}, {"fields", json::array()}});
    } catch (const BusyError& e) {
        send_json(res, 409, {{"error", e.what()}});
    } catch (const json::exception& e) {
        send_json(res, 400, {{"error", std::string("malformed request: ") + e.what()}});
    }
}

json ticket_json(const JobTicket& t) {
    return {{"job_id", t.job_id}, {"kind", std::string(to_string(t.kind))}};
}

}  // namespace

Server::Server(Session& session, ServerOptions options)
    : _impl(std::make_unique<Impl>(session, std::move(options))) {
    auto& http = _impl->http;
    Impl* impl = _impl.get();

    http.Get("/state", [impl](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, impl->session.get_state());
    });

    http.Post("/deploy", [impl](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto rev = impl->session.deploy(parse_body(req));
            send_json(res, 200, {{"revision", rev}});
        });
    });

    http.Post("/environment", [impl](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parse_body(req);
            const auto base = impl->session.snapshot();
            const double t = body.value("temperature_c", base->environment.temperature_c);
            const double s = body.value("salinity_psu", base->environment.salinity_psu);
            send_json(res, 200, {{"revision", impl->session.set_environment(t, s)}});
        });
    });

    http.Post("/optimize", [impl](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 202, ticket_json(impl->session.trigger_optimize())); });
    });

    http.Post("/run", [impl](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parse_body(req);
            std::optional<Scenario> scenario;
            const std::string name = body.value("scenario", std::string("all"));
            if (name != "all") scenario = parse_scenario(name);
            send_json(res, 202, ticket_json(impl->session.trigger_run(scenario)));
        });
    });

    http.Post("/experiment", [impl](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            send_json(res, 202, ticket_json(impl->session.trigger_experiment(parse_body(req))));
        });
    });

    http.Post("/snapshot", [impl](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parse_body(req);
            if (!body.contains("path")) throw ConfigError("path", "path is required");
            const std::filesystem::path path = body.at("path").get<std::string>();
            impl->session.save(path);
            send_json(res, 200, {{"path", path.string()}, {"revision", impl->session.snapshot()->revision}});
        });
    });

    http.Get("/events", [impl](const httplib::Request& req, httplib::Response& res) {
        auto cursor = std::make_shared<std::uint64_t>(impl->session.events().last_seq());
        if (req.has_param("after"))
            *cursor = std::stoull(req.get_param_value("after"));
        else if (req.has_header("Last-Event-ID"))
            *cursor = std::stoull(req.get_header_value("Last-Event-ID"));

        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider(
            "text/event-stream", [impl, cursor](size_t, httplib::DataSink& sink) {
                if (impl->stopping) return false;
                auto& bus = impl->session.events();
                const auto events = bus.wait_after(*cursor, std::chrono::milliseconds(250));
                if (events.empty()) {
                    if (bus.closed()) {
                        sink.done();
                        return true;
                    }
                    const std::string ping = ": keep-alive\n\n";
                    return sink.write(ping.data(), ping.size());
                }
                for (const auto& e : events) {
                    const std::string frame = "id: " + std::to_string(e.seq) + "\nevent: " + e.type +
                                              "\ndata: " + e.data.dump() + "\n\n";
                    if (!sink.write(frame.data(), frame.size())) return false;
                    *cursor = e.seq;
                }
                return true;
            });
    });

    if (_impl->options.static_dir) http.set_mount_point("/", _impl->options.static_dir->string());
}

Server::~Server() { stop(); }

int Server::bind() {
    auto& o = _impl->options;
    if (o.port == 0) return _impl->http.bind_to_any_port(o.host);
    return _impl->http.bind_to_port(o.host, o.port) ? o.port : -1;
}

void Server::listen() { _impl->http.listen_after_bind(); }

void Server::stop() {
    _impl->stopping = true;
    _impl->http.stop();
}

}  // namespace uwsn::service
