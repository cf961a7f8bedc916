#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "oimp/errors.hpp"
#include "oimp/harness.hpp"

using namespace oimp;

namespace {

StarEnvironment certain_star(std::size_t K, std::size_t support) {
    StarEnvironment env;
    NodeId next = 0;
    for (std::size_t k = 0; k < K; ++k) {
        env.supports.emplace_back();
        env.probs.emplace_back();
        for (std::size_t i = 0; i < support; ++i) {
            env.supports.back().push_back(next++);
            env.probs.back().push_back(1.0);
        }
    }
    return env;
}

CampaignConfig small_config(std::size_t K, std::size_t N, std::string policy = "gt-ucb") {
    CampaignConfig c;
    c.K = K;
    c.N = N;
    c.policy = std::move(policy);
    return c;
}

const FatigueFunction kOne = FatigueFunction::one();

}  // namespace

TEST(Config, Validation) {
    CampaignConfig c = small_config(3, 10);
    c.L = 4;
    EXPECT_THROW(validate_config(c, 3), ConfigError);
    c.L = 0;
    EXPECT_THROW(validate_config(c, 3), ConfigError);
    c.L = 1;
    EXPECT_TRUE(validate_config(c, 3).empty());
    c.N = 2;
    EXPECT_EQ(validate_config(c, 3).size(), 1u);
    c.policy = "random";
    EXPECT_TRUE(validate_config(c, 3).empty());
}

TEST(RunCampaign, InitializationOnlyWhenNEqualsK) {
    StarEnv env(certain_star(4, 2));
    auto policy = make_policy("gt-ucb");
    Rng rng(1);
    const auto records = run_campaign(small_config(4, 4), env, *policy, rng);
    ASSERT_EQ(records.size(), 4u);
    for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(records[t].influencers, std::vector<InfluencerId>{static_cast<InfluencerId>(t)});
}

TEST(RunCampaign, CertainStarExhausts) {
    StarEnv env(certain_star(2, 3));
    auto policy = make_policy("gt-ucb");
    Rng rng(2);
    const auto records = run_campaign(small_config(2, 4), env, *policy, rng);
    EXPECT_EQ(records[1].cumulative, 6u);
    EXPECT_EQ(records[3].cumulative, 6u);
}

TEST(RunCampaign, IncompatiblePolicyIsAConfigError) {
    StarEnv env(certain_star(2, 3));
    auto policy = make_policy("max-degree");
    Rng rng(3);
    EXPECT_THROW(run_campaign(small_config(2, 4, "max-degree"), env, *policy, rng), ConfigError);
}

TEST(RunCampaigns, DeterministicAndRunwiseStable) {
    Rng gen(4);
    const std::size_t sizes[] = {30};
    const StarEnv env(gen_calibrated_star(5, sizes, gen));
    CampaignConfig c = small_config(5, 40);
    c.seed = 99;
    c.runs = 3;
    const auto a = run_campaigns(c, env, {});
    const auto b = run_campaigns(c, env, {});
    EXPECT_EQ(a, b);
    c.runs = 1;
    const auto first = run_campaigns(c, env, {});
    EXPECT_TRUE(std::equal(first.begin(), first.end(), a.begin()));
}

TEST(RunCampaigns, RecordInvariants) {
    Rng gen(5);
    const std::size_t sizes[] = {40};
    const StarEnv env(gen_calibrated_star(6, sizes, gen));
    for (const char* name : {"gt-ucb", "fat-gt-ucb", "random", "oracle"}) {
        CampaignConfig c = small_config(6, 50, name);
        c.L = 2;
        c.runs = 4;
        const auto records = run_campaigns(c, env, {});
        std::vector<std::size_t> sums(4, 0);
        std::vector<std::size_t> last(4, 0);
        for (const RoundRecord& r : records) {
            EXPECT_LE(r.new_activations, r.spread_size);
            EXPECT_GE(r.cumulative, last[r.run]);
            EXPECT_EQ(r.influencers.size(), 2u);
            EXPECT_TRUE(std::is_sorted(r.influencers.begin(), r.influencers.end()));
            last[r.run] = r.cumulative;
            sums[r.run] += r.new_activations;
        }
        EXPECT_EQ(sums, final_rewards(records));
    }
}

TEST(WaitingTime, Examples) {
    auto policy = make_policy("gt-ucb");
    Rng rng(6);
    const StarEnv single(certain_star(1, 4));
    EXPECT_EQ(measure_waiting_time(single, *policy, 1, 0.5, kOne, rng), 1u);
    EXPECT_EQ(measure_waiting_time(single, *policy, 1, 1.0, kOne, rng), 0u);
    const StarEnv pair(certain_star(2, 3));
    EXPECT_EQ(measure_waiting_time(pair, *make_policy("gt-ucb"), 1, 0.5, kOne, rng), 2u);

    const CascadeLog log{{{{1}}}};
    const ReplayEnv replay(std::make_shared<const CascadeLog>(log));
    EXPECT_THROW(measure_waiting_time(replay, *policy, 1, 0.5, kOne, rng), UnsupportedOperation);
}

TEST(WaitingTime, NonIncreasingInAlphaAndAboveInitialization) {
    Rng gen(7);
    const StarEnv env(gen_lambda_star(4, 60, 5.0, 20.0, gen));
    const double alphas[] = {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99};
    for (int run = 0; run < 20; ++run) {
        Rng rng(derive_seed(8, run));
        auto policy = make_policy("gt-ucb");
        const auto times = measure_waiting_times(env, *policy, 1, alphas, kOne, rng);
        for (std::size_t i = 0; i < times.size(); ++i) {
            ASSERT_TRUE(times[i].has_value());
            EXPECT_GE(*times[i], 4u);
            if (i > 0) {
                EXPECT_LE(*times[i], *times[i - 1]);
            }
        }
    }
}

TEST(OracleWaitingTime, Examples) {
    Rng rng(9);
    const auto all = oracle_waiting_time(certain_star(3, 5), 0.5, kOne, rng, 10);
    for (const auto t : all) EXPECT_EQ(t, 3u);
    for (const auto t : oracle_waiting_time(certain_star(3, 5), 1.0, kOne, rng, 10)) EXPECT_EQ(t, 0u);

    const StarEnvironment half{{{0}}, {{0.5}}};
    EXPECT_EQ(expected_isolation_waiting_time(half, 0, 0.5, kOne), 1u);
    // Realized: pull until the node fires, so T is geometric with mean 2.
    const auto times = oracle_waiting_time(half, 0.5, kOne, rng, 20000);
    double mean = 0.0;
    std::size_t ones = 0;
    for (const auto t : times) {
        mean += static_cast<double>(t);
        ones += t == 1;
    }
    mean /= static_cast<double>(times.size());
    EXPECT_NEAR(mean, 2.0, 3.0 * std::sqrt(2.0 / 20000.0));
    EXPECT_NEAR(static_cast<double>(ones) / 20000.0, 0.5, 0.015);
}

TEST(Theorem2, BoundAndShiftedAlpha) {
    EXPECT_NEAR(theorem2_bound(10.0, 1, 20.0), 123.21363262031055, 1e-9);
    double last = 0.0;
    for (double tau = 0.0; tau < 1000.0; tau += 7.5) {
        const double b = theorem2_bound(tau, 4, 30.0);
        EXPECT_GT(b, tau);
        EXPECT_GT(b, last);
        last = b;
    }
    EXPECT_DOUBLE_EQ(theorem2_oracle_alpha(0.5, 26.0), 0.0);
    EXPECT_DOUBLE_EQ(theorem2_oracle_alpha(1.0, 26.0), 0.5);
    EXPECT_THROW(theorem2_oracle_alpha(0.4, 26.0), DomainError);
    EXPECT_THROW(theorem2_oracle_alpha(0.9, 12.0), DomainError);
}

TEST(WaitingTimeExperiment, RowsAndBound) {
    Rng gen(10);
    const StarEnvironment env = gen_lambda_star(3, 80, 26.0, 40.0, gen);
    const auto rows = waiting_time_experiment(env, "gt-ucb", {}, 0.6, kOne, 5, 11);
    ASSERT_EQ(rows.size(), 5u);
    for (const auto& r : rows) {
        ASSERT_TRUE(r.t_ucb && r.bound && r.satisfied && r.tau_star);
        EXPECT_GE(*r.t_ucb, 3u);
        EXPECT_EQ(*r.satisfied, static_cast<double>(*r.t_ucb) <= *r.bound);
    }
    EXPECT_EQ(rows.size(), waiting_time_experiment(env, "gt-ucb", {}, 0.6, kOne, 5, 11).size());
    const auto loose = waiting_time_experiment(env, "gt-ucb", {}, 0.2, kOne, 1, 11);
    EXPECT_FALSE(loose[0].bound.has_value());
}

TEST(Generators, CalibratedFamily) {
    Rng rng(12);
    std::vector<double> xs(1000000);
    double mean = 0.0;
    for (double& x : xs) {
        x = calibrated_probability(rng);
        ASSERT_GT(x, 0.0);
        ASSERT_LE(x, 1.0);
        mean += x;
    }
    mean /= static_cast<double>(xs.size());
    std::nth_element(xs.begin(), xs.begin() + 900000, xs.end());
    EXPECT_NEAR(xs[900000], 0.045, 0.005);
    std::nth_element(xs.begin(), xs.begin() + 500000, xs.end());
    EXPECT_LT(xs[500000], mean);
}

TEST(Generators, CalibratedStarShape) {
    Rng rng(13);
    const std::size_t sizes[] = {3, 1, 4};
    const auto env = gen_calibrated_star(3, sizes, rng);
    EXPECT_EQ(env.supports[0], (std::vector<NodeId>{0, 1, 2}));
    EXPECT_EQ(env.supports[2], (std::vector<NodeId>{4, 5, 6, 7}));
    EXPECT_NO_THROW(env.validate());
}

TEST(Generators, LambdaStar) {
    Rng rng(14);
    const auto env = gen_lambda_star(6, 50, 15.0, 40.0, rng);
    for (InfluencerId k = 0; k < 6; ++k) {
        EXPECT_GE(env.lambda(k), 15.0 - 1e-9);
        EXPECT_LE(env.lambda(k), 40.0 + 1e-9);
    }
    EXPECT_NO_THROW(env.validate());
    Rng tight(15);
    const auto capped = gen_lambda_star(2, 10, 9.5, 9.9, tight);
    EXPECT_NO_THROW(capped.validate());
    EXPECT_GE(capped.lambda(0), 9.5 - 1e-9);
}

TEST(Generators, FatigueLogbook) {
    LogbookProfile profile;
    Rng rng(16);
    const CascadeLog log = gen_fatigue_logbook(profile, rng);
    ASSERT_EQ(log.influencer_count(), 20u);
    std::vector<double> tier_mean(4, 0.0);
    for (std::size_t k = 0; k < 20; ++k) {
        for (const auto& c : log.cascades[k]) tier_mean[k / 5] += static_cast<double>(c.size());
    }
    for (std::size_t t = 1; t < 4; ++t) EXPECT_GT(tier_mean[t - 1], tier_mean[t]);
    Rng again(16);
    EXPECT_EQ(gen_fatigue_logbook(profile, again).cascades, log.cascades);
    LogbookProfile empty;
    empty.tier_sizes.clear();
    EXPECT_THROW(gen_fatigue_logbook(empty, rng), DomainError);
}

TEST(Generators, SyntheticGraphIsSimple) {
    Rng rng(17);
    const Graph g = gen_synthetic_graph(500, 4.0, rng);
    EXPECT_EQ(g.edge_count(), 2000u);
    std::size_t max_out = 0;
    std::size_t max_in = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        max_in = std::max(max_in, g.in_degree(u));
        std::set<NodeId> seen;
        for (const Edge& e : g.out_edges(u)) {
            EXPECT_NE(e.target, u);
            EXPECT_TRUE(seen.insert(e.target).second);
        }
        max_out = std::max(max_out, g.out_degree(u));
    }
    EXPECT_GT(max_out, 40u);  // heavy tails: far above the mean of 4
    EXPECT_GT(max_in, 40u);
}

TEST(BuildEnvironment, Kinds) {
    CampaignConfig c;
    c.K = 5;
    c.env.support = 10;
    Rng rng(18);
    auto star = build_environment(c, rng);
    EXPECT_EQ(star->kind(), "star");
    EXPECT_EQ(star->influencer_count(), 5u);
    EXPECT_EQ(star->fatigue(), nullptr);

    c.env.kind = "ic";
    c.env.nodes = 300;
    c.gamma = "inv";
    auto ic = build_environment(c, rng);
    EXPECT_EQ(ic->kind(), "ic");
    EXPECT_NE(ic->graph(), nullptr);
    EXPECT_NE(ic->fatigue(), nullptr);
    EXPECT_EQ(ic->influencer_nodes().size(), 5u);

    c.env.kind = "replay";
    c.env.tiers = {20, 5};
    c.gamma = "one";
    auto replay = build_environment(c, rng);
    EXPECT_EQ(replay->influencer_count(), 10u);

    c.env.kind = "bogus";
    EXPECT_THROW(build_environment(c, rng), ConfigError);
}

TEST(Estimator, TrajectoryRows) {
    Rng rng(19);
    const StarEnvironment env{{{0, 1, 2}}, {{1.0, 1.0, 0.0}}};
    const auto rows = estimator_trajectory(env, 3, rng, 7);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].run, 7u);
    EXPECT_EQ(rows[0].good_turing, 2.0);
    EXPECT_EQ(rows[0].true_remaining, 0.0);
    EXPECT_EQ(rows[1].good_turing, 0.0);
    EXPECT_NEAR(rows[0].bayesian, 1.0 / 22.0, 1e-15);
}

TEST(Csv, HeaderOnlyAndRoundTrip) {
    std::ostringstream empty;
    emit_csv(std::vector<RoundRecord>{}, empty);
    EXPECT_EQ(empty.str(), std::string(kCsvHeader) + "\n");

    Rng gen(20);
    const std::size_t sizes[] = {20};
    const StarEnv env(gen_calibrated_star(4, sizes, gen));
    CampaignConfig c = small_config(4, 30, "random");
    c.L = 2;
    c.runs = 2;
    const auto records = run_campaigns(c, env, {});
    std::stringstream io;
    emit_csv(records, io);
    EXPECT_EQ(parse_csv(io), records);

    std::istringstream bad(std::string(kCsvHeader) + "\n0,1,x,0,1,1\n");
    EXPECT_THROW(parse_csv(bad), ParseError);
    std::istringstream nohdr("run,round\n");
    EXPECT_THROW(parse_csv(nohdr), ParseError);
}

TEST(Csv, FormatDoubleRoundTrips) {
    for (const double x : {0.1, 1.0 / 3.0, 123.21363262031055, 1e-300, 0.0})
        EXPECT_EQ(std::stod(format_double(x)), x);
}
