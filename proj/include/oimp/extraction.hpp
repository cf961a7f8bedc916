#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oimp/environments.hpp"
#include "oimp/graph.hpp"
#include "oimp/random.hpp"

namespace oimp {

/// K influencer nodes in selection order with the score each was chosen on.
struct ExtractionResult {
    std::vector<NodeId> influencers;
    std::vector<double> scores;
    /// Standard error of each score when it is a Monte-Carlo estimate.
    std::vector<double> score_errors;
    /// Greedy MaxCover only: the out-neighbours counted for each selection.
    std::vector<std::vector<NodeId>> counted;
    /// Set when the heuristic ran out of candidates and padded by degree.
    bool padded = false;
};

/// The K nodes of largest out-degree, ties to the lowest id.
ExtractionResult extract_max_degree(const Graph& g, std::size_t K);

/// Greedy cover: K times, take the remaining node with most remaining
/// out-neighbours and remove it and everything within `hops` out-hops.
ExtractionResult extract_greedy_max_cover(const Graph& g, std::size_t K, unsigned hops = 1);

struct DivRankOptions {
    /// Weight of the reinforced walk; 1 - alpha goes to uniform teleport.
    double alpha = 0.85;
    /// Probability mass the organic walk keeps on the current node.
    double self_loop = 0.25;
    std::size_t max_iterations = 200;
    double tolerance = 1e-9;
};

struct DivRankTrace {
    std::vector<double> scores;
    std::size_t iterations = 0;
    /// Sum of the score vector after every iteration.
    std::vector<double> sums;
};

/// Cumulative DivRank on the edge-reversed graph, so mass accumulates on nodes
/// with many outgoing edges. Transition x -> y is proportional to the organic
/// walk probability times the cumulative score of y.
DivRankTrace divrank(const Graph& g, const DivRankOptions& options = {});

ExtractionResult extract_divrank(const Graph& g, std::size_t K, const DivRankOptions& options = {});

struct GreedyImOptions {
    DiffusionModel model = DiffusionModel::ic;
    std::size_t mc_samples = 200;
    /// Nodes that contribute nothing to spread size.
    const NodeSet* discount = nullptr;
    /// Candidate seeds; empty means every node.
    std::span<const NodeId> candidates = {};
    /// Optional multiplier on each candidate's marginal gain (same length as candidates).
    std::span<const double> gain_scale = {};
};

/// Monte-Carlo mean of |cascade(seeds) \ discount| and its standard error.
struct SpreadEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};
SpreadEstimate estimate_spread(const Graph& g, DiffusionModel model, std::span<const NodeId> seeds,
                               std::size_t samples, const NodeSet* discount, Rng& rng,
                               CascadeWorkspace& workspace);

/// Lazy greedy (CELF) maximization of the Monte-Carlo spread estimate. Scores
/// are the marginal gains at selection time. Ties go to the earlier candidate.
ExtractionResult greedy_mc_im(const Graph& g, std::size_t K, const GreedyImOptions& options, Rng& rng);

}  // namespace oimp
