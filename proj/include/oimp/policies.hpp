#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "oimp/environments.hpp"
#include "oimp/estimation.hpp"
#include "oimp/random.hpp"

namespace oimp {

/// Influencers seeded in one trial, ascending, plus the per-influencer scores
/// the choice was made on (empty for schedule- or chance-driven choices).
struct PolicyDecision {
    std::vector<InfluencerId> selected;
    std::vector<double> indices;
};

/// Everything a policy may look at: the round counter, the persistent
/// activated set W and the per-influencer statistics.
class CampaignState {
public:
    explicit CampaignState(std::size_t influencers) : stats_(influencers) {}

    /// Completed trials.
    std::size_t round() const noexcept { return round_; }
    const NodeSet& activated() const noexcept { return activated_; }
    const StatsTable& stats() const noexcept { return stats_; }
    std::size_t influencer_count() const noexcept { return stats_.size(); }
    /// |W|.
    std::size_t reward() const noexcept { return activated_.size(); }

    /// Books one trial and returns the number of newly activated nodes.
    std::size_t observe(std::span<const InfluencerId> seeded, const Spread& spread);

private:
    std::size_t round_ = 0;
    NodeSet activated_;
    StatsTable stats_;
};

/// Rounds that play every influencer once: ceil(K/L) batches of L, the last
/// one padded with the lowest ids already played. Throws ConfigError unless 1 <= L <= K.
std::vector<PolicyDecision> initialize(std::size_t K, std::size_t L);

/// The L largest scores, ties to the lowest id; `selected` comes back ascending.
PolicyDecision top_l(std::span<const double> scores, std::size_t L);

/// Top-L Good-Turing UCB indices at round t. Throws PreconditionError if some
/// influencer has never been pulled.
PolicyDecision gtucb_select(const CampaignState& state, std::size_t t, std::size_t L);
PolicyDecision fat_gtucb_select(const CampaignState& state, std::size_t t, std::size_t L,
                                const FatigueFunction& gamma);

/// Uniform sample of L distinct influencers.
PolicyDecision random_select(std::size_t K, std::size_t L, Rng& rng);

/// Top-L influencer nodes by out-degree towards nodes not yet activated.
/// Throws UnsupportedOperation for environments without a graph.
PolicyDecision maxdegree_select(const Environment& env, const CampaignState& state, std::size_t L);

/// Ground-truth choice. Star: top-L true remaining potentials. Graph: lazy
/// greedy Monte-Carlo marginal gains with activated nodes counted as zero.
/// With `fatigue_aware`, scores are multiplied by gamma(n_k + 1).
/// Throws UnsupportedOperation for replayed environments.
PolicyDecision oracle_select(const Environment& env, const CampaignState& state, std::size_t L,
                             std::size_t mc_samples, Rng& rng, bool fatigue_aware = false);

struct PolicyOptions {
    /// Weariness function assumed by fat-gt-ucb.
    FatigueFunction gamma;
    std::size_t oracle_samples = 200;
    /// Unset: on exactly when the environment applies fatigue.
    std::optional<bool> oracle_fatigue_aware;
};

class Policy {
public:
    virtual ~Policy() = default;

    virtual std::string_view name() const = 0;
    /// Whether the campaign opens with the initialization schedule.
    virtual bool needs_initialization() const { return false; }
    /// Throws ConfigError if the policy cannot run on `env`.
    virtual void check(const Environment& env) const { (void)env; }
    /// Choice for round t (1-based).
    virtual PolicyDecision select(const Environment& env, const CampaignState& state, std::size_t t,
                                  std::size_t L, Rng& rng) = 0;
};

/// Names: gt-ucb | fat-gt-ucb | random | max-degree | oracle. Throws ConfigError otherwise.
std::unique_ptr<Policy> make_policy(std::string_view name, const PolicyOptions& options = {});

inline constexpr std::string_view kPolicyNames = "gt-ucb|fat-gt-ucb|random|max-degree|oracle";

}  // namespace oimp
