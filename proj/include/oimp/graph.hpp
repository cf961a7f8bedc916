#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "oimp/random.hpp"
#include "oimp/types.hpp"

namespace oimp {

struct Edge {
    NodeId target;
    double weight;
};

/// Directed weighted graph with out-adjacency lists and cached in-degrees.
///
/// Immutable once built; weight schemes return a new graph. Parallel edges are
/// kept and count toward in-degree.
class Graph {
public:
    Graph() = default;

    /// Builds from (source, edge) pairs. Throws ValidationError if a weight
    /// lies outside [0, 1] or a target is out of range.
    Graph(std::size_t node_count, std::vector<std::vector<Edge>> out_edges);

    std::size_t node_count() const noexcept { return out_edges_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    std::span<const Edge> out_edges(NodeId u) const { return out_edges_[u]; }
    std::size_t out_degree(NodeId u) const { return out_edges_[u].size(); }
    std::size_t in_degree(NodeId v) const { return in_degree_[v]; }
    std::span<const std::size_t> in_degrees() const noexcept { return in_degree_; }

    /// Largest summed weight of incoming edges over all nodes.
    double max_incoming_weight() const noexcept { return max_incoming_weight_; }

    friend bool operator==(const Graph& a, const Graph& b);

private:
    std::vector<std::vector<Edge>> out_edges_;
    std::vector<std::size_t> in_degree_;
    std::size_t edge_count_ = 0;
    double max_incoming_weight_ = 0.0;
};

struct EdgeListOptions {
    /// Emit both directions for every line (collaboration-style input).
    bool undirected = false;
    /// Map ids to 0..n-1 in order of first appearance instead of using them verbatim.
    bool remap_ids = false;
};

struct EdgeListReport {
    std::size_t edges = 0;
    std::size_t self_loops_dropped = 0;
    /// Original id of every node when ids were remapped; empty otherwise.
    std::vector<std::uint64_t> original_ids;
};

/// Reads "src dst [weight]" lines; `#` lines and blank lines are skipped.
/// Missing weights are 0. Self-loops are dropped and counted in `report`.
Graph read_edge_list(std::istream& in, const EdgeListOptions& options = {},
                     EdgeListReport* report = nullptr);
Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {},
                     EdgeListReport* report = nullptr);

/// Writes "src dst weight" lines with round-trip precision.
void write_edge_list(const Graph& g, std::ostream& out);

/// Weighted cascade: every edge (u, v) gets 1 / in_degree(v).
Graph assign_wc_weights(const Graph& g);

/// Tri-valency: every edge gets a weight drawn uniformly from {0.1, 0.01, 0.001}.
Graph assign_tv_weights(const Graph& g, Rng& rng);

}  // namespace oimp
