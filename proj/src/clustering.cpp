#include "uwsn/clustering.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include "uwsn/errors.hpp"
#include "uwsn/rng.hpp"

namespace uwsn {

void KMeansConfig::validate() const {
    if (k && *k < 1) throw ConfigError("kmeans.k", "kmeans.k must be >= 1");
    if (max_iters < 1) throw ConfigError("kmeans.max_iters", "kmeans.max_iters must be >= 1");
    if (!(tol >= 0.0)) throw ConfigError("kmeans.tol", "kmeans.tol must be >= 0");
    if (restarts < 1) throw ConfigError("kmeans.restarts", "kmeans.restarts must be >= 1");
}

std::vector<int> ClusterModel::members(int cluster) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == cluster) out.push_back(static_cast<int>(i));
    return out;
}

bool ClusterModel::is_leader(int sensor_id) const {
    return std::find(leaders.begin(), leaders.end(), sensor_id) != leaders.end();
}

namespace {

double sq_dist(const Position& a, const Position& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

std::vector<Position> seed_centroids(const std::vector<Position>& points, int k, Rng& rng) {
    std::vector<Position> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(points[rng.index(points.size())]);

    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) d2[i] = sq_dist(points[i], centroids[0]);

    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            pick = points.size() - 1;
            for (std::size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (target < acc && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.index(points.size());
        }
        centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < points.size(); ++i)
            d2[i] = std::min(d2[i], sq_dist(points[i], centroids.back()));
    }
    return centroids;
}

void assign(const std::vector<Position>& points, const std::vector<Position>& centroids,
            std::vector<int>& assignment) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        int best = 0;
        double best_d = sq_dist(points[i], centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = sq_dist(points[i], centroids[c]);
            if (d < best_d) {
                best = static_cast<int>(c);
                best_d = d;
            }
        }
        assignment[i] = best;
    }
}

// Moves centroids to member means. An empty cluster is reseeded at the point farthest from
// its current centroid, and that point is reassigned to it.
void update(const std::vector<Position>& points, std::vector<int>& assignment,
            std::vector<Position>& centroids) {
    const std::size_t k = centroids.size();
    std::vector<double> sx(k, 0.0), sy(k, 0.0);
    std::vector<int> count(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignment[i]);
        sx[c] += points[i].x;
        sy[c] += points[i].y;
        ++count[c];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (count[c] > 0) centroids[c] = {sx[c] / count[c], sy[c] / count[c]};

    for (std::size_t c = 0; c < k; ++c) {
        if (count[c] > 0) continue;
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto owner = static_cast<std::size_t>(assignment[i]);
            if (count[owner] < 2) continue;
            const double d = sq_dist(points[i], centroids[owner]);
            if (d > far_d) {
                far = i;
                far_d = d;
            }
        }
        if (far_d <= 0.0) continue;  // nothing to split off
        --count[static_cast<std::size_t>(assignment[far])];
        assignment[far] = static_cast<int>(c);
        centroids[c] = points[far];
        count[c] = 1;
    }
}

ClusterModel lloyd(const std::vector<Position>& points, int k, Rng& rng, int max_iters,
                   double tol) {
    ClusterModel m;
    m.k = k;
    m.centroids = seed_centroids(points, k, rng);
    m.assignment.assign(points.size(), 0);

    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
        assign(points, m.centroids, m.assignment);
        update(points, m.assignment, m.centroids);
        const double j = inertia(points, m.assignment, m.centroids);
        assert(j <= prev + 1e-9 * std::max(1.0, j));
        m.inertia_history.push_back(j);
        m.inertia = j;
        if (prev - j < tol) break;
        prev = j;
    }
    return m;
}

}  // namespace

double inertia(const std::vector<Position>& points, const std::vector<int>& assignment,
               const std::vector<Position>& centroids) {
    double j = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        j += sq_dist(points[i], centroids[static_cast<std::size_t>(assignment[i])]);
    return j;
}

ClusterModel kmeans(const std::vector<Position>& points, int k, std::uint64_t seed,
                    int max_iters, double tol, int restarts) {
    if (k < 1 || static_cast<std::size_t>(k) > points.size())
        throw ConfigError("kmeans.k", "kmeans.k must lie in [1, " + std::to_string(points.size()) +
                                          "], got " + std::to_string(k));
    if (max_iters < 1) throw ConfigError("kmeans.max_iters", "kmeans.max_iters must be >= 1");
    if (restarts < 1) throw ConfigError("kmeans.restarts", "kmeans.restarts must be >= 1");

    Rng rng(seed);
    ClusterModel best;
    for (int r = 0; r < restarts; ++r) {
        ClusterModel m = lloyd(points, k, rng, max_iters, tol);
        if (r == 0 || m.inertia < best.inertia) best = std::move(m);
    }
    best.leaders.assign(static_cast<std::size_t>(k), -1);
    return best;
}

ClusterModel elect_leaders(ClusterModel model, const std::vector<Position>& points) {
    model.leaders.assign(static_cast<std::size_t>(model.k), -1);
    std::vector<double> best_d(static_cast<std::size_t>(model.k),
                               std::numeric_limits<double>::infinity());
    // Ascending id order with a strict comparison keeps the lowest id on ties.
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(model.assignment[i]);
        const double d = distance(points[i], model.centroids[c]);
        if (d < best_d[c]) {
            best_d[c] = d;
            model.leaders[c] = static_cast<int>(i);
        }
    }
    return model;
}

int resolve_k(const KMeansConfig& cfg, const Topology& topology) {
    const int n = static_cast<int>(topology.sensors.size());
    if (cfg.k) return *cfg.k;
    return std::clamp(static_cast<int>(topology.auvs.size()), 1, n);
}

ClusterModel cluster_sensors(const Topology& topology, const KMeansConfig& cfg,
                             std::uint64_t seed) {
    cfg.validate();
    const auto points = topology.sensor_positions();
    const std::uint64_t stream_seed = Rng::stream(seed, "kmeans").next_u64();
    auto model = kmeans(points, resolve_k(cfg, topology), stream_seed, cfg.max_iters, cfg.tol,
                        cfg.restarts);
    return elect_leaders(std::move(model), points);
}

}  // namespace uwsn
