#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oimp/environments.hpp"
#include "oimp/types.hpp"

namespace oimp {

/// Activation history of one node under one influencer.
struct NodeTally {
    std::uint32_t count = 0;
    /// Influencer-local pull index of the single activation; 0 unless count == 1.
    std::uint32_t hapax_round = 0;
};

/// Per-influencer statistics: pull count, spread sizes, per-node tallies and
/// the hapaxes no other influencer has touched. Owned by a StatsTable, which
/// keeps the cross-influencer part consistent.
class InfluencerStats {
public:
    std::size_t pulls() const noexcept { return spread_sizes_.size(); }
    std::span<const std::size_t> spread_sizes() const noexcept { return spread_sizes_; }
    std::size_t total_spread() const noexcept { return total_spread_; }

    std::size_t activation_count(NodeId u) const;
    /// Pull index of u's only activation, or 0 if u was activated zero or several times.
    std::size_t hapax_round(NodeId u) const;
    const std::unordered_map<NodeId, NodeTally>& tallies() const noexcept { return tallies_; }

    /// Nodes activated exactly once by this influencer and never by any other.
    std::size_t exclusive_hapaxes() const noexcept { return exclusive_hapaxes_; }
    /// Same nodes, bucketed by hapax pull index: entry i-1 counts pull i.
    std::span<const std::size_t> exclusive_hapaxes_by_round() const noexcept { return hapaxes_by_round_; }

private:
    friend class StatsTable;

    std::vector<std::size_t> spread_sizes_;
    std::size_t total_spread_ = 0;
    std::unordered_map<NodeId, NodeTally> tallies_;
    std::vector<std::size_t> hapaxes_by_round_;
    std::size_t exclusive_hapaxes_ = 0;
};

/// Statistics of every influencer in a campaign plus per-node totals across
/// influencers (the "never activated by another influencer" test).
class StatsTable {
public:
    explicit StatsTable(std::size_t influencers = 0) : stats_(influencers) {}

    /// Books one trial. Every seeded influencer gains a pull (and a spread size,
    /// possibly 0); every activation updates the tallies of its influencer.
    /// Throws PreconditionError if an activation is attributed to an unseeded influencer.
    void record_spread(std::span<const InfluencerId> seeded, const Spread& spread);

    std::size_t size() const noexcept { return stats_.size(); }
    const InfluencerStats& operator[](InfluencerId k) const { return stats_.at(k); }

    /// Activations of u summed over all influencers.
    std::size_t total_activations(NodeId u) const;

private:
    struct NodeRecord {
        std::uint32_t total = 0;
        InfluencerId owner = 0;
        std::uint32_t round = 0;
    };

    std::vector<InfluencerStats> stats_;
    std::vector<NodeRecord> nodes_;
};

/// Good-Turing remaining-potential estimate: exclusive hapaxes over pulls.
double good_turing(const InfluencerStats& stats);

/// Mean spread size.
double lambda_hat(const InfluencerStats& stats);

/// (1 + sqrt 2) sqrt(lambda * log_term / n) + log_term / (3 n).
/// With log_term = log(4/delta) this is the deviation bound beta_n; with
/// log_term = log(4t) it is the exploration bonus of the index.
double confidence_radius(double lambda, std::size_t n, double log_term);

/// Optimistic index from already computed estimates at round t >= 1.
double ucb_index(double remaining_estimate, double lambda_estimate, std::size_t n, std::size_t t);
double ucb_index(const InfluencerStats& stats, std::size_t t);

/// Fatigue-aware Good-Turing: each exclusive hapax from pull i weighs gamma(n+1)/gamma(i).
double fat_good_turing(const InfluencerStats& stats, const FatigueFunction& gamma);

/// gamma(n+1)/n * sum_s |S_s| / gamma(s).
double fat_lambda_hat(const InfluencerStats& stats, const FatigueFunction& gamma);

double fat_ucb_index(const InfluencerStats& stats, std::size_t t, const FatigueFunction& gamma);

/// beta_n at confidence 1 - delta. Throws DomainError unless delta is in (0, 1).
double beta_bound(std::size_t n, double lambda, double delta);

/// Interval [-gamma(n+1) lambda / n, 0] holding E[R_n] - E[R_hat_n].
std::pair<double, double> bias_interval(double lambda, std::size_t n, const FatigueFunction& gamma);

/// Beta posteriors on every (influencer, support node) activation probability.
class BayesianBeliefs {
public:
    explicit BayesianBeliefs(const StarEnvironment& env, double prior_a = 1.0, double prior_b = 20.0);

    /// Updates every support node of k: success if the node is attributed to k in `spread`.
    void observe(InfluencerId k, const Spread& spread);

    /// Posterior parameters (a, b) of the i-th support node of k.
    std::pair<double, double> parameters(InfluencerId k, std::size_t i) const;

    /// Sum of posterior means over support nodes of k not in `activated`.
    double remaining(InfluencerId k, const NodeSet& activated) const;

private:
    std::vector<std::vector<NodeId>> supports_;
    std::vector<std::vector<std::pair<double, double>>> params_;
};

inline double bayes_remaining(const BayesianBeliefs& beliefs, InfluencerId k, const NodeSet& activated) {
    return beliefs.remaining(k, activated);
}

}  // namespace oimp
