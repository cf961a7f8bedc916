#include "oimp/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oimp/errors.hpp"

namespace oimp {

std::size_t InfluencerStats::activation_count(NodeId u) const {
    auto it = tallies_.find(u);
    return it == tallies_.end() ? 0 : it->second.count;
}

std::size_t InfluencerStats::hapax_round(NodeId u) const {
    auto it = tallies_.find(u);
    return it == tallies_.end() ? 0 : it->second.hapax_round;
}

void StatsTable::record_spread(std::span<const InfluencerId> seeded, const Spread& spread) {
    for (InfluencerId k : seeded) {
        if (k >= stats_.size()) throw DomainError("unknown influencer " + std::to_string(k));
        auto& s = stats_[k];
        s.spread_sizes_.push_back(0);
        s.hapaxes_by_round_.push_back(0);
    }
    for (const Activation& a : spread.activations) {
        if (std::find(seeded.begin(), seeded.end(), a.influencer) == seeded.end())
            throw PreconditionError("activation attributed to influencer " + std::to_string(a.influencer) +
                                    " which was not seeded");
        auto& s = stats_[a.influencer];
        const auto round = static_cast<std::uint32_t>(s.pulls());
        ++s.spread_sizes_.back();
        ++s.total_spread_;

        NodeTally& tally = s.tallies_[a.node];
        ++tally.count;
        tally.hapax_round = tally.count == 1 ? round : 0;

        if (a.node >= nodes_.size()) nodes_.resize(std::size_t{a.node} + 1);
        NodeRecord& rec = nodes_[a.node];
        ++rec.total;
        if (rec.total == 1) {
            rec.owner = a.influencer;
            rec.round = round;
            ++s.hapaxes_by_round_[round - 1];
            ++s.exclusive_hapaxes_;
        } else if (rec.total == 2) {
            auto& previous = stats_[rec.owner];
            --previous.hapaxes_by_round_[rec.round - 1];
            --previous.exclusive_hapaxes_;
        }
    }
}

std::size_t StatsTable::total_activations(NodeId u) const {
    return u < nodes_.size() ? nodes_[u].total : 0;
}

namespace {

void require_pulls(const InfluencerStats& stats) {
    if (stats.pulls() == 0) throw PreconditionError("estimator needs at least one pull");
}

}  // namespace

double good_turing(const InfluencerStats& stats) {
    require_pulls(stats);
    return static_cast<double>(stats.exclusive_hapaxes()) / static_cast<double>(stats.pulls());
}

double lambda_hat(const InfluencerStats& stats) {
    require_pulls(stats);
    return static_cast<double>(stats.total_spread()) / static_cast<double>(stats.pulls());
}

double confidence_radius(double lambda, std::size_t n, double log_term) {
    if (n == 0) throw PreconditionError("confidence radius needs n >= 1");
    const double dn = static_cast<double>(n);
    return (1.0 + std::numbers::sqrt2) * std::sqrt(lambda * log_term / dn) + log_term / (3.0 * dn);
}

double ucb_index(double remaining_estimate, double lambda_estimate, std::size_t n, std::size_t t) {
    if (t == 0) throw PreconditionError("round index must be >= 1");
    return remaining_estimate + confidence_radius(lambda_estimate, n, std::log(4.0 * static_cast<double>(t)));
}

double ucb_index(const InfluencerStats& stats, std::size_t t) {
    return ucb_index(good_turing(stats), lambda_hat(stats), stats.pulls(), t);
}

double fat_good_turing(const InfluencerStats& stats, const FatigueFunction& gamma) {
    require_pulls(stats);
    const std::size_t n = stats.pulls();
    const double next = gamma(n + 1);
    const auto by_round = stats.exclusive_hapaxes_by_round();
    double sum = 0.0;
    for (std::size_t i = 0; i < by_round.size(); ++i)
        if (by_round[i] != 0) sum += static_cast<double>(by_round[i]) * (next / gamma(i + 1));
    return sum / static_cast<double>(n);
}

double fat_lambda_hat(const InfluencerStats& stats, const FatigueFunction& gamma) {
    require_pulls(stats);
    const std::size_t n = stats.pulls();
    const auto sizes = stats.spread_sizes();
    double sum = 0.0;
    for (std::size_t s = 0; s < sizes.size(); ++s) sum += static_cast<double>(sizes[s]) / gamma(s + 1);
    return gamma(n + 1) * sum / static_cast<double>(n);
}

double fat_ucb_index(const InfluencerStats& stats, std::size_t t, const FatigueFunction& gamma) {
    return ucb_index(fat_good_turing(stats, gamma), fat_lambda_hat(stats, gamma), stats.pulls(), t);
}

double beta_bound(std::size_t n, double lambda, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
    if (lambda < 0.0) throw DomainError("lambda must be non-negative");
    return confidence_radius(lambda, n, std::log(4.0 / delta));
}

std::pair<double, double> bias_interval(double lambda, std::size_t n, const FatigueFunction& gamma) {
    if (n == 0) throw PreconditionError("bias interval needs n >= 1");
    return {-gamma(n + 1) * lambda / static_cast<double>(n), 0.0};
}

BayesianBeliefs::BayesianBeliefs(const StarEnvironment& env, double prior_a, double prior_b)
    : supports_(env.supports) {
    if (!(prior_a > 0.0 && prior_b > 0.0)) throw DomainError("Beta prior parameters must be positive");
    params_.reserve(supports_.size());
    for (const auto& support : supports_) params_.emplace_back(support.size(), std::make_pair(prior_a, prior_b));
}

void BayesianBeliefs::observe(InfluencerId k, const Spread& spread) {
    if (k >= supports_.size()) throw DomainError("unknown influencer " + std::to_string(k));
    NodeSet hit;
    for (const Activation& a : spread.activations)
        if (a.influencer == k) hit.insert(a.node);
    for (std::size_t i = 0; i < supports_[k].size(); ++i) {
        if (hit.contains(supports_[k][i]))
            params_[k][i].first += 1.0;
        else
            params_[k][i].second += 1.0;
    }
}

std::pair<double, double> BayesianBeliefs::parameters(InfluencerId k, std::size_t i) const {
    return params_.at(k).at(i);
}

double BayesianBeliefs::remaining(InfluencerId k, const NodeSet& activated) const {
    if (k >= supports_.size()) throw DomainError("unknown influencer " + std::to_string(k));
    double sum = 0.0;
    for (std::size_t i = 0; i < supports_[k].size(); ++i) {
        if (activated.contains(supports_[k][i])) continue;
        const auto [a, b] = params_[k][i];
        sum += a / (a + b);
    }
    return sum;
}

}  // namespace oimp
