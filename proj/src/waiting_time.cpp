#include <algorithm>
#include <cmath>
#include <limits>

#include "oimp/errors.hpp"
#include "oimp/harness.hpp"

namespace oimp {

std::vector<std::optional<std::size_t>> measure_waiting_times(const Environment& env, Policy& policy,
                                                              std::size_t L, std::span<const double> alphas,
                                                              const FatigueFunction& gamma, Rng& rng,
                                                              std::size_t max_rounds) {
    const StarEnvironment* star = env.star();
    if (!star) throw UnsupportedOperation("waiting time needs a star environment");
    policy.check(env);
    auto local = env.clone();
    const std::size_t K = local->influencer_count();

    std::vector<double> lambda(K);
    for (InfluencerId k = 0; k < K; ++k) lambda[k] = gamma(1) * star->lambda(k);

    CampaignState state(K);
    std::vector<std::optional<std::size_t>> result(alphas.size());
    std::size_t open = alphas.size();

    auto check = [&](std::size_t t) {
        std::vector<double> remaining(K);
        for (InfluencerId k = 0; k < K; ++k)
            remaining[k] = true_remaining_potential(*star, k, state.activated(), gamma, state.stats()[k].pulls() + 1);
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            if (result[a]) continue;
            bool done = true;
            for (InfluencerId k = 0; k < K && done; ++k) done = remaining[k] <= alphas[a] * lambda[k];
            if (done) {
                result[a] = t;
                --open;
            }
        }
    };

    check(0);
    const auto schedule = policy.needs_initialization() ? initialize(K, L) : std::vector<PolicyDecision>{};
    for (std::size_t t = 1; t <= max_rounds && open > 0; ++t) {
        const PolicyDecision decision = t <= schedule.size() ? schedule[t - 1] : policy.select(*local, state, t, L, rng);
        const Spread spread = local->pull(decision.selected, rng);
        state.observe(decision.selected, spread);
        check(t);
    }
    return result;
}

std::optional<std::size_t> measure_waiting_time(const Environment& env, Policy& policy, std::size_t L,
                                                double alpha, const FatigueFunction& gamma, Rng& rng,
                                                std::size_t max_rounds) {
    const double alphas[] = {alpha};
    return measure_waiting_times(env, policy, L, alphas, gamma, rng, max_rounds).front();
}

std::vector<std::size_t> oracle_waiting_time(const StarEnvironment& env, double alpha, const FatigueFunction& gamma,
                                             Rng& rng, std::size_t replications, std::size_t max_pulls) {
    env.validate();
    std::vector<std::size_t> totals;
    totals.reserve(replications);
    for (std::size_t rep = 0; rep < replications; ++rep) {
        std::size_t total = 0;
        for (InfluencerId k = 0; k < env.influencer_count(); ++k) {
            const double target = alpha * gamma(1) * env.lambda(k);
            NodeSet activated;
            std::size_t s = 0;
            while (s < max_pulls && true_remaining_potential(env, k, activated, gamma, s + 1) > target) {
                ++s;
                const Spread spread = fatigue_filter(star_pull(env, k, rng), gamma, s, rng);
                for (const Activation& a : spread.activations) activated.insert(a.node);
            }
            total += s;
        }
        totals.push_back(total);
    }
    return totals;
}

std::size_t expected_isolation_waiting_time(const StarEnvironment& env, InfluencerId k, double alpha,
                                            const FatigueFunction& gamma, std::size_t max_pulls) {
    const double target = alpha * gamma(1) * env.lambda(k);
    const auto& probs = env.probs.at(k);
    std::vector<double> never(probs.size(), 1.0);
    for (std::size_t s = 0; s < max_pulls; ++s) {
        double expected = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) expected += probs[i] * never[i];
        if (gamma(s + 1) * expected <= target) return s;
        for (std::size_t i = 0; i < probs.size(); ++i) never[i] *= 1.0 - gamma(s + 1) * probs[i];
    }
    return max_pulls;
}

double theorem2_bound(double tau_star, std::size_t K, double lambda_max) {
    const double k = static_cast<double>(K);
    return tau_star + k * lambda_max * std::log(4.0 * tau_star + 11.0 * k * lambda_max) + 2.0 * k;
}

double theorem2_oracle_alpha(double alpha, double lambda_min) {
    if (lambda_min < 13.0) throw DomainError("waiting-time bound needs lambda_min >= 13");
    if (alpha < 13.0 / lambda_min || alpha > 1.0) throw DomainError("alpha must lie in [13/lambda_min, 1]");
    return alpha - 13.0 / lambda_min;
}

std::vector<WaitingTimeRow> waiting_time_experiment(const StarEnvironment& env, std::string_view policy_name,
                                                    const PolicyOptions& options, double alpha,
                                                    const FatigueFunction& gamma, std::size_t runs,
                                                    std::uint64_t seed, std::size_t max_rounds) {
    std::unique_ptr<Environment> prototype = std::make_unique<StarEnv>(env);
    if (!gamma.is_constant_one()) prototype = std::make_unique<FatigueEnv>(std::move(prototype), gamma);

    double lambda_min = std::numeric_limits<double>::infinity();
    double lambda_max = 0.0;
    for (InfluencerId k = 0; k < env.influencer_count(); ++k) {
        lambda_min = std::min(lambda_min, env.lambda(k));
        lambda_max = std::max(lambda_max, env.lambda(k));
    }
    const bool bound_applies = lambda_min >= 13.0 && alpha >= 13.0 / lambda_min && alpha <= 1.0;

    std::vector<WaitingTimeRow> rows;
    for (std::size_t r = 0; r < runs; ++r) {
        Rng base(derive_seed(seed, r));
        Rng policy_rng = base.split();
        Rng oracle_rng = base.split();
        auto policy = make_policy(policy_name, options);

        WaitingTimeRow row;
        row.run = r;
        row.alpha = alpha;
        row.t_ucb = measure_waiting_time(*prototype, *policy, 1, alpha, gamma, policy_rng, max_rounds);
        row.t_oracle = oracle_waiting_time(env, alpha, gamma, oracle_rng, 1).front();
        if (bound_applies) {
            const double shifted = theorem2_oracle_alpha(alpha, lambda_min);
            row.tau_star = oracle_waiting_time(env, shifted, gamma, oracle_rng, 1).front();
            row.bound = theorem2_bound(static_cast<double>(*row.tau_star), env.influencer_count(), lambda_max);
            row.satisfied = row.t_ucb && static_cast<double>(*row.t_ucb) <= *row.bound;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<EstimatorRow> estimator_trajectory(const StarEnvironment& env, std::size_t pulls, Rng& rng,
                                               std::size_t run_index) {
    if (env.influencer_count() == 0) throw DomainError("estimator study needs one influencer");
    const FatigueFunction one;
    const InfluencerId k = 0;
    const InfluencerId seeded[] = {k};
    StatsTable stats(1);
    BayesianBeliefs beliefs(env);
    NodeSet activated;
    std::vector<EstimatorRow> rows;
    for (std::size_t n = 1; n <= pulls; ++n) {
        const Spread spread = star_pull(env, k, rng);
        for (const Activation& a : spread.activations) activated.insert(a.node);
        stats.record_spread(seeded, spread);
        beliefs.observe(k, spread);
        rows.push_back({run_index, n, true_remaining_potential(env, k, activated, one, n + 1),
                        good_turing(stats[k]), beliefs.remaining(k, activated)});
    }
    return rows;
}

}  // namespace oimp
