#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "oimp/errors.hpp"
#include "oimp/harness.hpp"

namespace oimp {

namespace {

struct CliOptions {
    CampaignConfig config;
    std::string method = "divrank";
    unsigned hops = 1;
    std::size_t mc_samples = 200;
    double damping = 0.85;
    std::vector<double> alphas = {0.5};
    double lambda_min = 26.0;
    double lambda_max = 40.0;
    std::size_t max_rounds = 100000;
    bool remap_ids = false;
};

// Environment generators draw from a stream no run index can reach.
Rng environment_rng(std::uint64_t seed) { return Rng(derive_seed(seed, std::numeric_limits<std::uint64_t>::max())); }

void write_output(const std::filesystem::path& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

Graph load_or_generate_graph(const CliOptions& o, Rng& rng) {
    const EnvironmentSpec& spec = o.config.env;
    Graph raw = spec.graph_path.empty()
                    ? gen_synthetic_graph(spec.nodes, spec.avg_degree, rng, spec.exponent)
                    : load_edge_list(spec.graph_path, EdgeListOptions{spec.undirected, o.remap_ids});
    if (spec.weights == "wc") return assign_wc_weights(raw);
    if (spec.weights == "tv") return assign_tv_weights(raw, rng);
    throw ConfigError("unknown weight scheme '" + spec.weights + "' (expected wc|tv)");
}

std::string do_extract(const CliOptions& o) {
    Rng rng = environment_rng(o.config.seed);
    const Graph g = load_or_generate_graph(o, rng);
    ExtractionResult result;
    if (o.method == "divrank") {
        DivRankOptions options;
        options.alpha = o.damping;
        result = extract_divrank(g, o.config.K, options);
    } else {
        result = extract_influencers(g, o.config.K, o.method, rng, o.mc_samples, o.hops);
    }
    std::ostringstream out;
    for (const NodeId u : result.influencers) out << u << '\n';
    return out.str();
}

PolicyOptions policy_options(const CampaignConfig& config) {
    PolicyOptions options;
    options.gamma = FatigueFunction::parse(config.gamma);
    options.oracle_samples = config.oracle_samples;
    return options;
}

std::string do_run(const CliOptions& o) {
    const PolicyOptions options = policy_options(o.config);
    make_policy(o.config.policy, options);
    Rng rng = environment_rng(o.config.seed);
    const auto env = build_environment(o.config, rng);
    for (const std::string& w : validate_config(o.config, env->influencer_count())) std::cerr << "warning: " << w << '\n';
    const auto records = run_campaigns(o.config, *env, options);
    std::ostringstream out;
    emit_csv(records, out);
    return out.str();
}

std::string do_waiting_time(const CliOptions& o) {
    const PolicyOptions options = policy_options(o.config);
    make_policy(o.config.policy, options);
    if (o.config.env.kind != "star") throw ConfigError("waiting-time runs on star environments only");
    Rng rng = environment_rng(o.config.seed);
    const StarEnvironment star =
        o.config.env.star_path.empty()
            ? gen_lambda_star(o.config.K, o.config.env.support, o.lambda_min, o.lambda_max, rng)
            : load_star_spec(o.config.env.star_path);
    if (!options.gamma.is_constant_one())
        std::cerr << "note: waiting-time under fatigue is exploratory; the bound is stated for gamma = one\n";
    std::vector<WaitingTimeRow> rows;
    for (const double alpha : o.alphas) {
        auto part = waiting_time_experiment(star, o.config.policy, options, alpha, options.gamma, o.config.runs,
                                            o.config.seed, o.max_rounds);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    std::ostringstream out;
    emit_waiting_time_csv(rows, out);
    return out.str();
}

std::string do_estimator_study(const CliOptions& o) {
    std::optional<StarEnvironment> fixed;
    if (!o.config.env.star_path.empty()) fixed = load_star_spec(o.config.env.star_path);
    std::vector<EstimatorRow> rows;
    for (std::size_t r = 0; r < o.config.runs; ++r) {
        Rng rng(derive_seed(o.config.seed, r));
        const std::size_t sizes[] = {o.config.env.support};
        const StarEnvironment star = fixed ? *fixed : gen_calibrated_star(1, sizes, rng);
        auto part = estimator_trajectory(star, o.config.N, rng, r);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    std::ostringstream out;
    emit_estimator_csv(rows, out);
    return out.str();
}

std::string do_fatigue_study(CliOptions o, bool gamma_given) {
    if (!gamma_given) o.config.gamma = "invsqrt";
    const PolicyOptions options = policy_options(o.config);
    Rng rng = environment_rng(o.config.seed);
    const auto env = build_environment(o.config, rng);
    std::vector<RoundRecord> records;
    for (const char* name : {"fat-gt-ucb", "gt-ucb", "random"}) {
        CampaignConfig config = o.config;
        config.policy = name;
        for (const std::string& w : validate_config(config, env->influencer_count()))
            std::cerr << "warning: " << w << '\n';
        auto part = run_campaigns(config, *env, options);
        records.insert(records.end(), part.begin(), part.end());
    }
    std::ostringstream out;
    emit_csv(records, out);
    return out.str();
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Online influencer marketing with persistence: policies, environments and experiments"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");

    CliOptions o;
    CampaignConfig& c = o.config;
    EnvironmentSpec& e = c.env;

    auto* env_opt = app.add_option("--env", e.kind, "Environment: star|ic|lt|replay")
                        ->check(CLI::IsMember({"star", "ic", "lt", "replay"}));
    (void)env_opt;
    app.add_option("--weights", e.weights, "Edge weights: wc|tv")->check(CLI::IsMember({"wc", "tv"}));
    app.add_option("--policy", c.policy, "gt-ucb|fat-gt-ucb|random|max-degree|oracle");
    auto* gamma_opt = app.add_option("--gamma", c.gamma, "Weariness: one|inv|invsqrt")
                          ->check(CLI::IsMember({"one", "inv", "invsqrt"}));
    app.add_option("--K", c.K, "Number of influencers")->check(CLI::PositiveNumber);
    app.add_option("--L", c.L, "Influencers seeded per trial");
    app.add_option("--N", c.N, "Trials per campaign (pulls per run for estimator-study)");
    app.add_option("--runs", c.runs, "Independent replications");
    app.add_option("--seed", c.seed, "Base seed");
    app.add_option("--out", c.out, "Output file (stdout when omitted)");
    app.add_option("--graph", e.graph_path, "Edge list file");
    app.add_flag("--undirected", e.undirected, "Read every edge in both directions");
    app.add_flag("--remap-ids", o.remap_ids, "Map edge-list ids to 0..n-1 by first appearance");
    app.add_option("--star", e.star_path, "Star spec file");
    app.add_option("--log", e.log_path, "Cascade log file");
    app.add_option("--influencers", e.influencers_path, "Influencer node ids, one per line");
    app.add_option("--nodes", e.nodes, "Synthetic graph size");
    app.add_option("--avg-degree", e.avg_degree, "Synthetic graph average out-degree");
    app.add_option("--exponent", e.exponent, "Synthetic graph power-law exponent");
    app.add_option("--support", e.support, "Synthetic star support size per influencer");
    app.add_option("--tiers", e.tiers, "Synthetic logbook tier sizes")->delimiter(',');
    app.add_option("--extract", e.extract, "Influencer extraction for graph environments");
    app.add_option("--oracle-samples", c.oracle_samples, "Monte-Carlo samples per oracle evaluation");
    app.add_option("--method", o.method, "extract: divrank|max-degree|max-cover|greedy-im");
    app.add_option("--hops", o.hops, "extract max-cover: neighbourhood radius removed per pick");
    app.add_option("--mc-samples", o.mc_samples, "extract greedy-im: Monte-Carlo samples");
    app.add_option("--damping", o.damping, "extract divrank: damping factor");
    app.add_option("--alpha", o.alphas, "waiting-time: target fractions")->delimiter(',');
    app.add_option("--lambda-min", o.lambda_min, "waiting-time: lower end of generated lambda_k");
    app.add_option("--lambda-max", o.lambda_max, "waiting-time: upper end of generated lambda_k");
    app.add_option("--max-rounds", o.max_rounds, "waiting-time: give up after this many rounds");

    auto* extract = app.add_subcommand("extract", "Write K influencer node ids, one per line");
    auto* run = app.add_subcommand("run", "Run campaigns and write round records as CSV");
    auto* waiting = app.add_subcommand("waiting-time", "Waiting time of a policy against the oracle");
    auto* estimator = app.add_subcommand("estimator-study", "Good-Turing against Bayesian remaining-potential estimates");
    auto* fatigue = app.add_subcommand("fatigue-study", "fat-gt-ucb, gt-ucb and random on a replayed log with fatigue");
    for (CLI::App* sub : {extract, run, waiting, estimator, fatigue}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    }

    try {
        std::string text;
        if (extract->parsed())
            text = do_extract(o);
        else if (run->parsed())
            text = do_run(o);
        else if (waiting->parsed())
            text = do_waiting_time(o);
        else if (estimator->parsed())
            text = do_estimator_study(o);
        else
            text = do_fatigue_study(o, gamma_opt->count() > 0);
        write_output(c.out, text);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace oimp
