#include <algorithm>
#include <fstream>
#include <string>

#include "oimp/errors.hpp"
#include "oimp/harness.hpp"

namespace oimp {

std::vector<std::string> validate_config(const CampaignConfig& config, std::size_t K) {
    if (config.L == 0 || config.L > K)
        throw ConfigError("need 1 <= L <= K (L=" + std::to_string(config.L) + ", K=" + std::to_string(K) + ")");
    std::vector<std::string> warnings;
    const std::size_t init_rounds = (K + config.L - 1) / config.L;
    if ((config.policy == "gt-ucb" || config.policy == "fat-gt-ucb") && init_rounds > config.N)
        warnings.push_back("initialization needs " + std::to_string(init_rounds) + " rounds but N=" +
                           std::to_string(config.N) + "; the campaign ends inside initialization");
    return warnings;
}

namespace {

std::vector<NodeId> read_influencer_ids(const std::filesystem::path& path, std::size_t node_count) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open influencer list " + path.string());
    std::vector<NodeId> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        std::size_t used = 0;
        unsigned long value = 0;
        try {
            value = std::stoul(line, &used);
        } catch (const std::exception&) {
            throw ParseError("invalid influencer id", line_no);
        }
        if (value >= node_count) throw DomainError("influencer node " + line + " out of range");
        ids.push_back(static_cast<NodeId>(value));
    }
    return ids;
}

}  // namespace

std::unique_ptr<Environment> build_environment(const CampaignConfig& config, Rng& rng) {
    const EnvironmentSpec& spec = config.env;
    const FatigueFunction gamma = FatigueFunction::parse(config.gamma);
    std::unique_ptr<Environment> env;

    if (spec.kind == "star") {
        StarEnvironment star;
        if (!spec.star_path.empty()) {
            star = load_star_spec(spec.star_path);
        } else {
            const std::vector<std::size_t> sizes{spec.support};
            star = gen_calibrated_star(config.K, sizes, rng);
        }
        env = std::make_unique<StarEnv>(std::move(star));
    } else if (spec.kind == "ic" || spec.kind == "lt") {
        Graph raw = spec.graph_path.empty()
                        ? gen_synthetic_graph(spec.nodes, spec.avg_degree, rng, spec.exponent)
                        : load_edge_list(spec.graph_path, EdgeListOptions{.undirected = spec.undirected});
        Graph weighted;
        if (spec.weights == "wc")
            weighted = assign_wc_weights(raw);
        else if (spec.weights == "tv")
            weighted = assign_tv_weights(raw, rng);
        else
            throw ConfigError("unknown weight scheme '" + spec.weights + "' (expected wc|tv)");
        auto graph = std::make_shared<const Graph>(std::move(weighted));
        std::vector<NodeId> influencers =
            spec.influencers_path.empty()
                ? extract_influencers(*graph, config.K, spec.extract, rng, config.oracle_samples).influencers
                : read_influencer_ids(spec.influencers_path, graph->node_count());
        const auto model = spec.kind == "ic" ? DiffusionModel::ic : DiffusionModel::lt;
        env = std::make_unique<GraphEnv>(std::move(graph), std::move(influencers), model);
    } else if (spec.kind == "replay") {
        CascadeLog log;
        if (!spec.log_path.empty()) {
            log = load_cascade_log(spec.log_path);
        } else {
            LogbookProfile profile;
            profile.tier_sizes = spec.tiers;
            log = gen_fatigue_logbook(profile, rng);
        }
        env = std::make_unique<ReplayEnv>(std::make_shared<const CascadeLog>(std::move(log)));
    } else {
        throw ConfigError("unknown environment '" + spec.kind + "' (expected star|ic|lt|replay)");
    }

    if (!gamma.is_constant_one()) env = std::make_unique<FatigueEnv>(std::move(env), gamma);
    return env;
}

ExtractionResult extract_influencers(const Graph& g, std::size_t K, std::string_view method, Rng& rng,
                                     std::size_t mc_samples, unsigned hops) {
    if (method == "divrank") return extract_divrank(g, K);
    if (method == "max-degree") return extract_max_degree(g, K);
    if (method == "max-cover") return extract_greedy_max_cover(g, K, hops);
    if (method == "greedy-im") {
        GreedyImOptions options;
        options.mc_samples = mc_samples;
        return greedy_mc_im(g, K, options, rng);
    }
    throw ConfigError("unknown extraction method '" + std::string(method) +
                      "' (expected divrank|max-degree|max-cover|greedy-im)");
}

std::vector<RoundRecord> run_campaign(const CampaignConfig& config, Environment& env, Policy& policy, Rng& rng,
                                      std::size_t run_index) {
    policy.check(env);
    const std::size_t K = env.influencer_count();
    validate_config(config, K);

    CampaignState state(K);
    const auto schedule = policy.needs_initialization() ? initialize(K, config.L) : std::vector<PolicyDecision>{};
    const std::string name(policy.name());

    std::vector<RoundRecord> records;
    records.reserve(config.N);
    for (std::size_t t = 1; t <= config.N; ++t) {
        const PolicyDecision decision =
            t <= schedule.size() ? schedule[t - 1] : policy.select(env, state, t, config.L, rng);
        const Spread spread = env.pull(decision.selected, rng);
        const std::size_t fresh = state.observe(decision.selected, spread);
        records.push_back({run_index, t, name, decision.selected, spread.size(), fresh, state.reward()});
    }
    return records;
}

std::vector<RoundRecord> run_campaigns(const CampaignConfig& config, const Environment& prototype,
                                       const PolicyOptions& options) {
    std::vector<RoundRecord> all;
    for (std::size_t r = 0; r < config.runs; ++r) {
        auto env = prototype.clone();
        auto policy = make_policy(config.policy, options);
        Rng rng(derive_seed(config.seed, r));
        auto records = run_campaign(config, *env, *policy, rng, r);
        all.insert(all.end(), std::make_move_iterator(records.begin()), std::make_move_iterator(records.end()));
    }
    std::stable_sort(all.begin(), all.end(), [](const RoundRecord& a, const RoundRecord& b) {
        return a.run != b.run ? a.run < b.run : a.round < b.round;
    });
    return all;
}

std::vector<std::size_t> final_rewards(std::span<const RoundRecord> records) {
    std::vector<std::size_t> rewards;
    for (const RoundRecord& r : records) {
        if (r.run >= rewards.size()) rewards.resize(r.run + 1, 0);
        rewards[r.run] = std::max(rewards[r.run], r.cumulative);
    }
    return rewards;
}

}  // namespace oimp
