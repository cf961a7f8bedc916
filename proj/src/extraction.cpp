#include "oimp/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "oimp/errors.hpp"

namespace oimp {

namespace {

void require_k(const Graph& g, std::size_t K) {
    if (K > g.node_count())
        throw DomainError("cannot extract " + std::to_string(K) + " influencers from " +
                          std::to_string(g.node_count()) + " nodes");
}

// Indices of the K largest scores, ties to the lowest index.
std::vector<std::size_t> top_indices(std::span<const double> scores, std::size_t K) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    order.resize(std::min(K, order.size()));
    return order;
}

ExtractionResult take_top(std::span<const double> scores, std::size_t K) {
    ExtractionResult result;
    for (std::size_t i : top_indices(scores, K)) {
        result.influencers.push_back(static_cast<NodeId>(i));
        result.scores.push_back(scores[i]);
    }
    return result;
}

std::vector<double> out_degrees(const Graph& g) {
    std::vector<double> degrees(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) degrees[u] = static_cast<double>(g.out_degree(u));
    return degrees;
}

}  // namespace

ExtractionResult extract_max_degree(const Graph& g, std::size_t K) {
    require_k(g, K);
    return take_top(out_degrees(g), K);
}

ExtractionResult extract_greedy_max_cover(const Graph& g, std::size_t K, unsigned hops) {
    require_k(g, K);
    if (hops == 0) throw DomainError("max cover needs hops >= 1");
    const std::size_t n = g.node_count();
    std::vector<char> removed(n, 0);
    std::vector<char> selected(n, 0);
    std::vector<std::uint32_t> stamp(n, 0);
    std::uint32_t epoch = 0;
    ExtractionResult result;

    auto remaining_neighbours = [&](NodeId u) {
        std::vector<NodeId> out;
        ++epoch;
        for (const Edge& e : g.out_edges(u)) {
            if (removed[e.target] || e.target == u || stamp[e.target] == epoch) continue;
            stamp[e.target] = epoch;
            out.push_back(e.target);
        }
        return out;
    };

    while (result.influencers.size() < K) {
        std::size_t best_count = 0;
        NodeId best = 0;
        bool found = false;
        for (NodeId u = 0; u < n; ++u) {
            if (removed[u]) continue;
            std::size_t count = 0;
            ++epoch;
            for (const Edge& e : g.out_edges(u)) {
                if (removed[e.target] || e.target == u || stamp[e.target] == epoch) continue;
                stamp[e.target] = epoch;
                ++count;
            }
            if (!found || count > best_count) {
                best = u;
                best_count = count;
                found = true;
            }
        }
        if (!found) break;

        result.influencers.push_back(best);
        result.scores.push_back(static_cast<double>(best_count));
        result.counted.push_back(remaining_neighbours(best));
        selected[best] = 1;

        // Remove the selected node and its out-neighbourhood up to `hops` hops.
        std::vector<NodeId> layer{best};
        removed[best] = 1;
        for (unsigned h = 0; h < hops && !layer.empty(); ++h) {
            std::vector<NodeId> next;
            for (NodeId u : layer)
                for (const Edge& e : g.out_edges(u))
                    if (!removed[e.target]) {
                        removed[e.target] = 1;
                        next.push_back(e.target);
                    }
            layer = std::move(next);
        }
    }

    if (result.influencers.size() < K) {
        result.padded = true;
        const auto degrees = out_degrees(g);
        for (std::size_t i : top_indices(degrees, n)) {
            if (result.influencers.size() == K) break;
            if (selected[i]) continue;
            result.influencers.push_back(static_cast<NodeId>(i));
            result.scores.push_back(degrees[i]);
            result.counted.emplace_back();
        }
    }
    return result;
}

DivRankTrace divrank(const Graph& g, const DivRankOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw DomainError("DivRank alpha must lie in (0, 1)");
    if (!(options.self_loop > 0.0 && options.self_loop < 1.0))
        throw DomainError("DivRank self-loop weight must lie in (0, 1)");
    const std::size_t n = g.node_count();
    if (n == 0) throw DomainError("DivRank needs a non-empty graph");

    // Reversed adjacency: x -> y for every original edge y -> x.
    std::vector<std::vector<NodeId>> reversed(n);
    for (NodeId u = 0; u < n; ++u)
        for (const Edge& e : g.out_edges(u))
            if (e.target != u) reversed[e.target].push_back(u);

    std::vector<double> stay(n);
    std::vector<double> move(n);
    for (NodeId x = 0; x < n; ++x) {
        if (reversed[x].empty()) {
            stay[x] = 1.0;
            move[x] = 0.0;
        } else {
            stay[x] = options.self_loop;
            move[x] = (1.0 - options.self_loop) / static_cast<double>(reversed[x].size());
        }
    }

    const double uniform = 1.0 / static_cast<double>(n);
    DivRankTrace trace;
    std::vector<double> score(n, uniform);
    std::vector<double> visits(score);
    std::vector<double> next(n);

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        std::fill(next.begin(), next.end(), (1.0 - options.alpha) * uniform);
        for (NodeId x = 0; x < n; ++x) {
            double normalizer = stay[x] * visits[x];
            for (NodeId y : reversed[x]) normalizer += move[x] * visits[y];
            const double coef = options.alpha * score[x] / normalizer;
            next[x] += coef * stay[x] * visits[x];
            for (NodeId y : reversed[x]) next[y] += coef * move[x] * visits[y];
        }
        double change = 0.0;
        double sum = 0.0;
        for (NodeId x = 0; x < n; ++x) {
            change = std::max(change, std::abs(next[x] - score[x]));
            sum += next[x];
        }
        score.swap(next);
        for (NodeId x = 0; x < n; ++x) visits[x] += score[x];
        trace.sums.push_back(sum);
        trace.iterations = it + 1;
        if (change < options.tolerance) break;
    }
    trace.scores = std::move(score);
    return trace;
}

ExtractionResult extract_divrank(const Graph& g, std::size_t K, const DivRankOptions& options) {
    require_k(g, K);
    const auto trace = divrank(g, options);
    return take_top(trace.scores, K);
}

SpreadEstimate estimate_spread(const Graph& g, DiffusionModel model, std::span<const NodeId> seeds,
                               std::size_t samples, const NodeSet* discount, Rng& rng,
                               CascadeWorkspace& workspace) {
    if (samples == 0) throw DomainError("Monte-Carlo estimate needs at least one sample");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto reach = static_cast<double>(cascade_reach(g, model, seeds, discount, rng, workspace));
        sum += reach;
        sum_sq += reach * reach;
    }
    const double m = static_cast<double>(samples);
    const double mean = sum / m;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0)) : 0.0;
    return {mean, std::sqrt(var / m)};
}

ExtractionResult greedy_mc_im(const Graph& g, std::size_t K, const GreedyImOptions& options, Rng& rng) {
    std::vector<NodeId> all;
    std::span<const NodeId> candidates = options.candidates;
    if (candidates.empty()) {
        all.resize(g.node_count());
        std::iota(all.begin(), all.end(), NodeId{0});
        candidates = all;
    }
    if (K > candidates.size()) throw DomainError("K exceeds the number of candidates");
    if (!options.gain_scale.empty() && options.gain_scale.size() != candidates.size())
        throw DomainError("gain scale must match the candidate list");

    struct Entry {
        double gain;
        double spread;
        double error;
        std::size_t candidate;
        std::size_t version;
    };
    auto worse = [](const Entry& a, const Entry& b) {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.candidate > b.candidate;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);

    CascadeWorkspace workspace;
    std::vector<NodeId> seeds;
    double current = 0.0;
    auto evaluate = [&](std::size_t c, std::size_t version) {
        seeds.push_back(candidates[c]);
        const auto est = estimate_spread(g, options.model, seeds, options.mc_samples, options.discount, rng, workspace);
        seeds.pop_back();
        const double scale = options.gain_scale.empty() ? 1.0 : options.gain_scale[c];
        return Entry{(est.mean - current) * scale, est.mean, est.standard_error, c, version};
    };

    for (std::size_t c = 0; c < candidates.size(); ++c) heap.push(evaluate(c, 0));

    ExtractionResult result;
    while (result.influencers.size() < K) {
        Entry top = heap.top();
        heap.pop();
        if (top.version == result.influencers.size()) {
            result.influencers.push_back(candidates[top.candidate]);
            result.scores.push_back(top.gain);
            result.score_errors.push_back(top.error);
            seeds.push_back(candidates[top.candidate]);
            current = top.spread;
        } else {
            heap.push(evaluate(top.candidate, result.influencers.size()));
        }
    }
    return result;
}

}  // namespace oimp
