#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "oimp/errors.hpp"
#include "oimp/harness.hpp"

namespace oimp {

double calibrated_probability(Rng& rng, double p_min) {
    if (!(p_min > 0.0) || p_min > 1.0) throw DomainError("p_min must lie in (0, 1]");
    return std::pow(p_min, 1.0 - rng.uniform());
}

StarEnvironment gen_calibrated_star(std::size_t K, std::span<const std::size_t> support_sizes, Rng& rng,
                                    double p_min) {
    if (support_sizes.size() != 1 && support_sizes.size() != K)
        throw DomainError("need one support size or one per influencer");
    StarEnvironment env;
    env.supports.resize(K);
    env.probs.resize(K);
    NodeId next = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t size = support_sizes.size() == 1 ? support_sizes[0] : support_sizes[k];
        for (std::size_t i = 0; i < size; ++i) {
            env.supports[k].push_back(next++);
            env.probs[k].push_back(calibrated_probability(rng, p_min));
        }
    }
    return env;
}

StarEnvironment gen_lambda_star(std::size_t K, std::size_t support, double lambda_lo, double lambda_hi, Rng& rng) {
    if (!(lambda_lo > 0.0) || lambda_hi < lambda_lo) throw DomainError("need 0 < lambda_lo <= lambda_hi");
    if (lambda_hi > static_cast<double>(support)) throw DomainError("lambda cannot exceed the support size");
    StarEnvironment env;
    env.supports.resize(K);
    env.probs.resize(K);
    NodeId next = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const double target = lambda_lo + (lambda_hi - lambda_lo) * rng.uniform();
        std::vector<double> w(support);
        for (double& x : w) x = rng.uniform() + 1e-3;
        std::vector<double> p(support, 0.0);
        std::vector<bool> capped(support, false);
        // Scale to the target, capping at 1 and redistributing the excess.
        for (;;) {
            double free_weight = 0.0;
            double budget = target;
            for (std::size_t i = 0; i < support; ++i) {
                if (capped[i])
                    budget -= 1.0;
                else
                    free_weight += w[i];
            }
            bool changed = false;
            for (std::size_t i = 0; i < support; ++i) {
                if (capped[i]) continue;
                p[i] = budget * w[i] / free_weight;
                if (p[i] > 1.0) {
                    p[i] = 1.0;
                    capped[i] = true;
                    changed = true;
                }
            }
            if (!changed) break;
        }
        for (std::size_t i = 0; i < support; ++i) {
            env.supports[k].push_back(next++);
            env.probs[k].push_back(p[i]);
        }
    }
    return env;
}

CascadeLog gen_fatigue_logbook(const LogbookProfile& profile, Rng& rng) {
    if (profile.tier_sizes.empty() || profile.influencers_per_tier == 0 || profile.cascades_per_influencer == 0)
        throw DomainError("empty logbook profile");
    if (!(profile.activation_probability > 0.0) || profile.activation_probability > 0.5)
        throw DomainError("activation probability must lie in (0, 0.5]");
    CascadeLog log;
    NodeId next = 0;
    for (const std::size_t size : profile.tier_sizes) {
        for (std::size_t j = 0; j < profile.influencers_per_tier; ++j) {
            std::vector<double> p(size);
            for (double& x : p) x = 2.0 * profile.activation_probability * rng.uniform();
            const NodeId first = next;
            next += static_cast<NodeId>(size);
            std::vector<std::vector<NodeId>> cascades(profile.cascades_per_influencer);
            for (auto& cascade : cascades)
                for (std::size_t i = 0; i < size; ++i)
                    if (rng.bernoulli(p[i])) cascade.push_back(first + static_cast<NodeId>(i));
            log.cascades.push_back(std::move(cascades));
        }
    }
    return log;
}

Graph gen_synthetic_graph(std::size_t nodes, double avg_degree, Rng& rng, double exponent) {
    if (nodes < 2) throw DomainError("need at least two nodes");
    if (!(exponent > 1.0)) throw DomainError("power-law exponent must exceed 1");
    const auto wanted = static_cast<std::size_t>(std::llround(avg_degree * static_cast<double>(nodes)));
    if (wanted > nodes * (nodes - 1)) throw DomainError("average degree too large for a simple graph");

    // Rank r gets weight r^(-1/(exponent-1)); sources and targets use independent rank orders.
    auto shuffled = [&] {
        std::vector<NodeId> order(nodes);
        std::iota(order.begin(), order.end(), NodeId{0});
        for (std::size_t i = nodes - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
        return order;
    };
    const std::vector<NodeId> source_rank = shuffled();
    const std::vector<NodeId> target_rank = shuffled();
    std::vector<double> cumulative(nodes);
    double total = 0.0;
    for (std::size_t r = 0; r < nodes; ++r) {
        total += std::pow(static_cast<double>(r + 1), -1.0 / (exponent - 1.0));
        cumulative[r] = total;
    }
    auto draw = [&](const std::vector<NodeId>& order) {
        const double x = rng.uniform() * total;
        const auto r = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                                                cumulative.begin());
        return order[std::min(r, nodes - 1)];
    };

    std::vector<std::vector<Edge>> out(nodes);
    std::unordered_set<std::uint64_t> seen;
    std::size_t placed = 0;
    for (std::size_t attempts = 0; placed < wanted && attempts < 100 * wanted + 1000; ++attempts) {
        const NodeId u = draw(source_rank);
        const NodeId v = draw(target_rank);
        if (u == v || !seen.insert((std::uint64_t{u} << 32) | v).second) continue;
        out[u].push_back({v, 0.0});
        ++placed;
    }
    return Graph(nodes, std::move(out));
}

}  // namespace oimp
