#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oimp/environments.hpp"
#include "oimp/extraction.hpp"
#include "oimp/graph.hpp"
#include "oimp/policies.hpp"

namespace oimp {

// ---------------------------------------------------------------------------
// Configuration

/// Where the diffusion medium comes from. Files win over generators.
struct EnvironmentSpec {
    std::string kind = "star";  // star | ic | lt | replay
    std::string weights = "wc";  // wc | tv
    std::filesystem::path graph_path;
    bool undirected = false;
    std::filesystem::path star_path;
    std::filesystem::path log_path;
    std::filesystem::path influencers_path;

    // Generators used when no file is given.
    std::size_t nodes = 2000;
    double avg_degree = 2.0;
    double exponent = 2.5;
    std::size_t support = 50;
    std::vector<std::size_t> tiers = {1000, 100, 10, 1};
    std::string extract = "divrank";
};

struct CampaignConfig {
    std::size_t K = 20;
    std::size_t N = 500;
    std::size_t L = 1;
    std::string policy = "gt-ucb";
    EnvironmentSpec env;
    std::string gamma = "one";
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::size_t oracle_samples = 200;
    std::filesystem::path out;
};

/// Throws ConfigError when 1 <= L <= K is violated; returns warnings otherwise
/// (e.g. when the initialization rounds do not fit within N).
std::vector<std::string> validate_config(const CampaignConfig& config, std::size_t K);

/// Builds the environment described by `config`, wrapped in a fatigue
/// decorator unless gamma is "one". Generators draw from `rng`.
std::unique_ptr<Environment> build_environment(const CampaignConfig& config, Rng& rng);

// ---------------------------------------------------------------------------
// Campaigns

struct RoundRecord {
    std::size_t run = 0;
    std::size_t round = 0;
    std::string policy;
    std::vector<InfluencerId> influencers;
    std::size_t spread_size = 0;
    std::size_t new_activations = 0;
    std::size_t cumulative = 0;

    friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// One campaign of config.N trials on `env`: the initialization schedule when
/// the policy needs it, then policy choices. Throws ConfigError when the
/// policy cannot run on `env`.
std::vector<RoundRecord> run_campaign(const CampaignConfig& config, Environment& env, Policy& policy, Rng& rng,
                                      std::size_t run_index = 0);

/// config.runs independent campaigns. Run r uses a clone of `prototype`, a
/// fresh policy and Rng(derive_seed(config.seed, r)). Records come back sorted
/// by (run, round).
std::vector<RoundRecord> run_campaigns(const CampaignConfig& config, const Environment& prototype,
                                       const PolicyOptions& options);

/// Per-run final |W| of a record stream.
std::vector<std::size_t> final_rewards(std::span<const RoundRecord> records);

// ---------------------------------------------------------------------------
// Waiting time

/// First round at which every influencer k has remaining potential at most
/// alpha * lambda_k, where lambda_k = gamma(1) * sum_u p_k(u). Round 0 counts
/// when the condition holds before any trial. nullopt if not reached within
/// max_rounds. Throws UnsupportedOperation for non-star environments.
std::optional<std::size_t> measure_waiting_time(const Environment& env, Policy& policy, std::size_t L,
                                                double alpha, const FatigueFunction& gamma, Rng& rng,
                                                std::size_t max_rounds = 100000);

/// Waiting times for several alphas along a single trajectory.
std::vector<std::optional<std::size_t>> measure_waiting_times(const Environment& env, Policy& policy,
                                                              std::size_t L, std::span<const double> alphas,
                                                              const FatigueFunction& gamma, Rng& rng,
                                                              std::size_t max_rounds = 100000);

/// Oracle waiting time: every influencer is pulled in isolation until its own
/// remaining potential reaches alpha * lambda_k; the per-influencer pull
/// counts are summed. One value per replication.
std::vector<std::size_t> oracle_waiting_time(const StarEnvironment& env, double alpha, const FatigueFunction& gamma,
                                             Rng& rng, std::size_t replications, std::size_t max_pulls = 1000000);

/// Smallest s with gamma(s+1) * sum_u p(u) prod_{i<=s} (1 - gamma(i) p(u)) <= alpha * gamma(1) * lambda_k,
/// i.e. the isolation waiting time of k measured on the expected potential.
std::size_t expected_isolation_waiting_time(const StarEnvironment& env, InfluencerId k, double alpha,
                                            const FatigueFunction& gamma, std::size_t max_pulls = 1000000);

/// tau* + K lambda_max log(4 tau* + 11 K lambda_max) + 2K.
double theorem2_bound(double tau_star, std::size_t K, double lambda_max);

/// alpha - 13 / lambda_min, the oracle target inside the bound. Throws
/// DomainError unless lambda_min >= 13 and alpha lies in [13/lambda_min, 1].
double theorem2_oracle_alpha(double alpha, double lambda_min);

struct WaitingTimeRow {
    std::size_t run = 0;
    double alpha = 0.0;
    std::optional<std::size_t> t_ucb;
    std::size_t t_oracle = 0;
    /// Oracle waiting time at the shifted alpha; absent when the bound does not apply.
    std::optional<std::size_t> tau_star;
    std::optional<double> bound;
    std::optional<bool> satisfied;
};

/// T_UCB(alpha) against T*(alpha) and the waiting-time bound, one row per run.
/// Run r draws from Rng(derive_seed(seed, r)).
std::vector<WaitingTimeRow> waiting_time_experiment(const StarEnvironment& env, std::string_view policy,
                                                    const PolicyOptions& options, double alpha,
                                                    const FatigueFunction& gamma, std::size_t runs,
                                                    std::uint64_t seed, std::size_t max_rounds = 100000);

// ---------------------------------------------------------------------------
// Estimator study

struct EstimatorRow {
    std::size_t run = 0;
    std::size_t pull = 0;
    double true_remaining = 0.0;
    double good_turing = 0.0;
    double bayesian = 0.0;
};

/// Single influencer pulled `pulls` times; after each pull, the true remaining
/// potential next to the Good-Turing and Beta(1,20) posterior estimates.
std::vector<EstimatorRow> estimator_trajectory(const StarEnvironment& env, std::size_t pulls, Rng& rng,
                                               std::size_t run_index = 0);

// ---------------------------------------------------------------------------
// Generators

/// Lower end of the log-uniform activation-probability family: 0.045^10, so
/// the 90th percentile of p = p_min^(1-u) is 0.045.
inline constexpr double kCalibratedPMin = 3.405062891601561e-14;

/// One draw from the log-uniform family on [p_min, 1].
double calibrated_probability(Rng& rng, double p_min = kCalibratedPMin);

/// Influencers with disjoint supports of the given sizes (ids allocated
/// consecutively), probabilities drawn from the calibrated family.
StarEnvironment gen_calibrated_star(std::size_t K, std::span<const std::size_t> support_sizes, Rng& rng,
                                    double p_min = kCalibratedPMin);

/// Disjoint supports of `support` nodes each whose probabilities sum to a
/// target lambda_k drawn uniformly from [lambda_lo, lambda_hi].
StarEnvironment gen_lambda_star(std::size_t K, std::size_t support, double lambda_lo, double lambda_hi, Rng& rng);

struct LogbookProfile {
    /// Support size of each tier.
    std::vector<std::size_t> tier_sizes = {1000, 100, 10, 1};
    std::size_t influencers_per_tier = 5;
    std::size_t cascades_per_influencer = 50;
    /// Mean per-node activation probability; node probabilities are U(0, 2q).
    double activation_probability = 0.05;
};

/// Synthetic cascade log: tier t contributes influencers_per_tier influencers
/// with disjoint supports of tier_sizes[t] nodes. Throws DomainError on an empty profile.
CascadeLog gen_fatigue_logbook(const LogbookProfile& profile, Rng& rng);

/// Directed graph with heavy-tailed in- and out-degrees: edge sources and
/// targets follow independent power laws over nodes. No self-loops or parallel edges.
Graph gen_synthetic_graph(std::size_t nodes, double avg_degree, Rng& rng, double exponent = 2.5);

/// Influencer extraction by method name: divrank | max-degree | max-cover | greedy-im.
ExtractionResult extract_influencers(const Graph& g, std::size_t K, std::string_view method, Rng& rng,
                                     std::size_t mc_samples = 200, unsigned hops = 1);

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCsvHeader = "run,round,policy,influencers,spread_size,new_activations,cumulative";

void emit_csv(std::span<const RoundRecord> records, std::ostream& out);
void emit_csv(std::span<const RoundRecord> records, const std::filesystem::path& path);
/// Inverse of emit_csv. Throws ParseError on malformed rows.
std::vector<RoundRecord> parse_csv(std::istream& in);

void emit_waiting_time_csv(std::span<const WaitingTimeRow> rows, std::ostream& out);
void emit_estimator_csv(std::span<const EstimatorRow> rows, std::ostream& out);

/// Shortest round-trip decimal form.
std::string format_double(double x);

// ---------------------------------------------------------------------------
// CLI

/// Entry point of the `oimp` tool. Returns 0 on success and a non-zero code
/// after printing a diagnostic on any error.
int cli_main(int argc, const char* const* argv);

}  // namespace oimp
