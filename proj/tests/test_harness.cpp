#include <doctest.h>

#include <cmath>

#include "uwsn/errors.hpp"
#include "uwsn/harness.hpp"

using namespace uwsn;

namespace {

ExperimentSpec small_spec(int runs) {
    ExperimentSpec s;
    s.runs = runs;
    s.base_seed = 100;
    s.optimizer.ga.generations = 10;
    s.optimizer.pso.iterations = 10;
    s.threads = 2;
    return s;
}

}  // namespace

TEST_CASE("mean and sample standard deviation") {
    const auto [m, sd] = mean_stddev({1, 2, 3, 4});
    CHECK(m == 2.5);
    CHECK(sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(mean_stddev({7}).second == 0.0);
}

TEST_CASE("one-run experiment equals that run") {
    const auto spec = small_spec(1);
    const auto agg = run_experiment(spec);
    const auto single = run_single(spec, 0);
    REQUIRE(agg.outcomes.size() == 1);
    CHECK(agg.outcomes[0].seed == 100);
    for (auto s : kAllScenarios) {
        const auto& st = agg.stats_for(s);
        CHECK(st.runs == 1);
        CHECK(st.mean_success_rate == single.report(s)->success_rate);
        CHECK(st.stddev_success_rate == 0.0);
        CHECK(*agg.outcomes[0].report(s) == *single.report(s));
    }
}

TEST_CASE("seed ladder, determinism and thread independence") {
    auto spec = small_spec(4);
    const auto a = run_experiment(spec);
    spec.threads = 1;
    const auto b = run_experiment(spec);
    CHECK(a.raw == b.raw);
    CHECK(a.stats == b.stats);
    for (int r = 0; r < 4; ++r) {
        CHECK(a.outcomes[static_cast<std::size_t>(r)].seed == 100u + static_cast<unsigned>(r));
        CHECK(a.outcomes[static_cast<std::size_t>(r)].deployed ==
              random_deploy(spec.counts, spec.environment, spec.field_size, 100u + static_cast<unsigned>(r)));
    }
    CHECK(a.raw.size() == 12);
}

TEST_CASE("aggregate statistics recompute from the raw table") {
    const auto agg = run_experiment(small_spec(5));
    for (auto s : kAllScenarios) {
        std::vector<double> succ, usage;
        for (const auto& row : agg.raw)
            if (row.scenario == s) succ.push_back(row.success_rate), usage.push_back(row.auv_usage_rate);
        const auto& st = agg.stats_for(s);
        CHECK(st.mean_success_rate == doctest::Approx(mean_stddev(succ).first).epsilon(1e-12));
        CHECK(st.stddev_success_rate == doctest::Approx(mean_stddev(succ).second).epsilon(1e-12));
        CHECK(st.mean_auv_usage_rate == doctest::Approx(mean_stddev(usage).first).epsilon(1e-12));
    }
    CHECK(agg.stats_for(Scenario::Initial).mean_auv_usage_rate == 0.0);
}

TEST_CASE("density modes") {
    const auto base = small_spec(2);
    const auto node = with_density(base, AuvDensity::OnePerNode);
    CHECK(node.counts.auvs == 10);
    CHECK(node.optimizer.kmeans.k == 10);
    const auto five = with_density(base, AuvDensity::OnePerFive);
    CHECK(five.counts.auvs == 2);
    CHECK(five.optimizer.kmeans.k == 2);

    const auto study = auv_density_study(base);
    for (std::size_t r = 0; r < 2; ++r) {
        const auto& pn = study.per_node.outcomes[r];
        CHECK(*pn.report(Scenario::LeaderBased)->records.data() == *pn.report(Scenario::Leaderless)->records.data());
        CHECK(pn.report(Scenario::LeaderBased)->records == pn.report(Scenario::Leaderless)->records);
        CHECK(pn.pipeline->clusters.k == 10);
        CHECK(study.per_five.outcomes[r].pipeline->clusters.k == 2);
        CHECK(pn.report(Scenario::Initial)->records == study.per_five.outcomes[r].report(Scenario::Initial)->records);
    }
    auto tagged = base;
    tagged.auv_density = AuvDensity::OnePerFive;
    const auto direct = run_experiment(tagged);
    CHECK(direct.spec.counts.auvs == 2);
    CHECK(direct.raw == study.per_five.raw);
    CHECK(run_single(tagged, 1).deployed.auvs.size() == 2);

    CHECK_THROWS_AS(parse_density("sometimes"), ConfigError);
    CHECK(parse_density(to_string(AuvDensity::OnePerFive)) == AuvDensity::OnePerFive);
}

TEST_CASE("spec validation") {
    auto s = small_spec(0);
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = small_spec(1);
    s.scenarios.clear();
    CHECK_THROWS_AS(s.validate(), ConfigError);
}
