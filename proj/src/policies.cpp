#include "oimp/policies.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "oimp/errors.hpp"
#include "oimp/extraction.hpp"

namespace oimp {

std::size_t CampaignState::observe(std::span<const InfluencerId> seeded, const Spread& spread) {
    std::size_t fresh = 0;
    for (const Activation& a : spread.activations)
        if (activated_.insert(a.node)) ++fresh;
    stats_.record_spread(seeded, spread);
    ++round_;
    return fresh;
}

std::vector<PolicyDecision> initialize(std::size_t K, std::size_t L) {
    if (L == 0 || L > K) throw ConfigError("need 1 <= L <= K (L=" + std::to_string(L) + ", K=" + std::to_string(K) + ")");
    std::vector<PolicyDecision> rounds;
    for (std::size_t start = 0; start < K; start += L) {
        PolicyDecision d;
        for (std::size_t k = start; k < std::min(start + L, K); ++k) d.selected.push_back(static_cast<InfluencerId>(k));
        for (InfluencerId pad = 0; d.selected.size() < L; ++pad) d.selected.push_back(pad);
        std::sort(d.selected.begin(), d.selected.end());
        rounds.push_back(std::move(d));
    }
    return rounds;
}

PolicyDecision top_l(std::span<const double> scores, std::size_t L) {
    if (L == 0 || L > scores.size()) throw ConfigError("need 1 <= L <= K");
    std::vector<InfluencerId> order(scores.size());
    std::iota(order.begin(), order.end(), InfluencerId{0});
    std::stable_sort(order.begin(), order.end(), [&](InfluencerId a, InfluencerId b) { return scores[a] > scores[b]; });
    PolicyDecision d;
    d.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(L));
    std::sort(d.selected.begin(), d.selected.end());
    d.indices.assign(scores.begin(), scores.end());
    return d;
}

namespace {

void require_initialized(const CampaignState& state) {
    for (InfluencerId k = 0; k < state.influencer_count(); ++k)
        if (state.stats()[k].pulls() == 0)
            throw PreconditionError("influencer " + std::to_string(k) + " has not been initialized");
}

}  // namespace

PolicyDecision gtucb_select(const CampaignState& state, std::size_t t, std::size_t L) {
    require_initialized(state);
    std::vector<double> indices(state.influencer_count());
    for (InfluencerId k = 0; k < indices.size(); ++k) indices[k] = ucb_index(state.stats()[k], t);
    return top_l(indices, L);
}

PolicyDecision fat_gtucb_select(const CampaignState& state, std::size_t t, std::size_t L,
                                const FatigueFunction& gamma) {
    require_initialized(state);
    std::vector<double> indices(state.influencer_count());
    for (InfluencerId k = 0; k < indices.size(); ++k) indices[k] = fat_ucb_index(state.stats()[k], t, gamma);
    return top_l(indices, L);
}

PolicyDecision random_select(std::size_t K, std::size_t L, Rng& rng) {
    if (L == 0 || L > K) throw ConfigError("need 1 <= L <= K");
    std::vector<InfluencerId> pool(K);
    std::iota(pool.begin(), pool.end(), InfluencerId{0});
    for (std::size_t i = 0; i < L; ++i) std::swap(pool[i], pool[i + rng.below(K - i)]);
    PolicyDecision d;
    d.selected.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(L));
    std::sort(d.selected.begin(), d.selected.end());
    return d;
}

PolicyDecision maxdegree_select(const Environment& env, const CampaignState& state, std::size_t L) {
    const Graph* g = env.graph();
    if (!g) throw UnsupportedOperation("max-degree needs a graph-backed environment");
    const auto nodes = env.influencer_nodes();
    std::vector<double> degrees(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        std::size_t d = 0;
        for (const Edge& e : g->out_edges(nodes[k]))
            if (!state.activated().contains(e.target)) ++d;
        degrees[k] = static_cast<double>(d);
    }
    return top_l(degrees, L);
}

PolicyDecision oracle_select(const Environment& env, const CampaignState& state, std::size_t L,
                             std::size_t mc_samples, Rng& rng, bool fatigue_aware) {
    const FatigueFunction one;
    const FatigueFunction& gamma = fatigue_aware && env.fatigue() ? *env.fatigue() : one;
    const std::size_t K = env.influencer_count();
    auto next_pull = [&](InfluencerId k) { return state.stats()[k].pulls() + 1; };

    if (const StarEnvironment* star = env.star()) {
        std::vector<double> potentials(K);
        for (InfluencerId k = 0; k < K; ++k)
            potentials[k] = true_remaining_potential(*star, k, state.activated(), gamma, next_pull(k));
        return top_l(potentials, L);
    }

    const Graph* g = env.graph();
    if (!g || !env.model()) throw UnsupportedOperation("oracle needs a star or graph environment");
    if (L == 0 || L > K) throw ConfigError("need 1 <= L <= K");
    const auto nodes = env.influencer_nodes();
    std::vector<double> scale;
    if (fatigue_aware && env.fatigue()) {
        scale.resize(K);
        for (InfluencerId k = 0; k < K; ++k) scale[k] = gamma(next_pull(k));
    }
    GreedyImOptions options;
    options.model = *env.model();
    options.mc_samples = mc_samples;
    options.discount = &state.activated();
    options.candidates = nodes;
    options.gain_scale = scale;
    const auto picked = greedy_mc_im(*g, L, options, rng);

    PolicyDecision d;
    d.indices.assign(K, 0.0);
    for (std::size_t i = 0; i < picked.influencers.size(); ++i) {
        const auto k = static_cast<InfluencerId>(std::find(nodes.begin(), nodes.end(), picked.influencers[i]) - nodes.begin());
        d.selected.push_back(k);
        d.indices[k] = picked.scores[i];
    }
    std::sort(d.selected.begin(), d.selected.end());
    return d;
}

namespace {

class GtUcbPolicy final : public Policy {
public:
    std::string_view name() const override { return "gt-ucb"; }
    bool needs_initialization() const override { return true; }
    PolicyDecision select(const Environment&, const CampaignState& state, std::size_t t, std::size_t L,
                          Rng&) override {
        return gtucb_select(state, t, L);
    }
};

class FatGtUcbPolicy final : public Policy {
public:
    explicit FatGtUcbPolicy(FatigueFunction gamma) : gamma_(std::move(gamma)) {}
    std::string_view name() const override { return "fat-gt-ucb"; }
    bool needs_initialization() const override { return true; }
    PolicyDecision select(const Environment&, const CampaignState& state, std::size_t t, std::size_t L,
                          Rng&) override {
        return fat_gtucb_select(state, t, L, gamma_);
    }

private:
    FatigueFunction gamma_;
};

class RandomPolicy final : public Policy {
public:
    std::string_view name() const override { return "random"; }
    PolicyDecision select(const Environment& env, const CampaignState&, std::size_t, std::size_t L,
                          Rng& rng) override {
        return random_select(env.influencer_count(), L, rng);
    }
};

class MaxDegreePolicy final : public Policy {
public:
    std::string_view name() const override { return "max-degree"; }
    void check(const Environment& env) const override {
        if (!env.graph()) throw ConfigError("max-degree needs a graph environment (ic or lt), got " + std::string(env.kind()));
    }
    PolicyDecision select(const Environment& env, const CampaignState& state, std::size_t, std::size_t L,
                          Rng&) override {
        return maxdegree_select(env, state, L);
    }
};

class OraclePolicy final : public Policy {
public:
    OraclePolicy(std::size_t samples, std::optional<bool> fatigue_aware)
        : samples_(samples), fatigue_aware_(fatigue_aware) {}
    std::string_view name() const override { return "oracle"; }
    void check(const Environment& env) const override {
        if (!env.star() && !env.graph()) throw ConfigError("oracle needs ground truth; not available for " + std::string(env.kind()));
    }
    PolicyDecision select(const Environment& env, const CampaignState& state, std::size_t, std::size_t L,
                          Rng& rng) override {
        const bool aware = fatigue_aware_.value_or(env.fatigue() != nullptr);
        return oracle_select(env, state, L, samples_, rng, aware);
    }

private:
    std::size_t samples_;
    std::optional<bool> fatigue_aware_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(std::string_view name, const PolicyOptions& options) {
    if (name == "gt-ucb") return std::make_unique<GtUcbPolicy>();
    if (name == "fat-gt-ucb") return std::make_unique<FatGtUcbPolicy>(options.gamma);
    if (name == "random") return std::make_unique<RandomPolicy>();
    if (name == "max-degree") return std::make_unique<MaxDegreePolicy>();
    if (name == "oracle") return std::make_unique<OraclePolicy>(options.oracle_samples, options.oracle_fatigue_aware);
    throw ConfigError("unknown policy '" + std::string(name) + "' (valid: " + std::string(kPolicyNames) + ")");
}

}  // namespace oimp
