#include "oimp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "oimp/errors.hpp"

namespace oimp {

Graph::Graph(std::size_t node_count, std::vector<std::vector<Edge>> out_edges)
    : out_edges_(std::move(out_edges)), in_degree_(node_count, 0) {
    if (out_edges_.size() != node_count)
        throw ValidationError("adjacency size does not match node count");
    std::vector<double> incoming(node_count, 0.0);
    for (const auto& edges : out_edges_) {
        for (const Edge& e : edges) {
            if (e.target >= node_count)
                throw ValidationError("edge target " + std::to_string(e.target) + " out of range");
            if (!(e.weight >= 0.0 && e.weight <= 1.0))
                throw ValidationError("edge weight " + std::to_string(e.weight) + " outside [0,1]");
            ++in_degree_[e.target];
            incoming[e.target] += e.weight;
            ++edge_count_;
        }
    }
    for (double w : incoming) max_incoming_weight_ = std::max(max_incoming_weight_, w);
}

bool operator==(const Graph& a, const Graph& b) {
    if (a.node_count() != b.node_count()) return false;
    for (std::size_t u = 0; u < a.node_count(); ++u) {
        const auto& ea = a.out_edges_[u];
        const auto& eb = b.out_edges_[u];
        if (!std::equal(ea.begin(), ea.end(), eb.begin(), eb.end(), [](const Edge& x, const Edge& y) {
                return x.target == y.target && x.weight == y.weight;
            }))
            return false;
    }
    return true;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

std::uint64_t parse_id(std::string_view token, std::size_t line) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("invalid node id '" + std::string(token) + "'", line);
    if (value >= 0xFFFFFFFFULL) throw ParseError("node id too large", line);
    return value;
}

double parse_weight(std::string_view token, std::size_t line) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("invalid weight '" + std::string(token) + "'", line);
    return value;
}

}  // namespace

Graph read_edge_list(std::istream& in, const EdgeListOptions& options, EdgeListReport* report) {
    struct RawEdge {
        NodeId src, dst;
        double weight;
    };
    std::vector<RawEdge> raw;
    std::unordered_map<std::uint64_t, NodeId> remap;
    EdgeListReport local;
    std::size_t node_count = 0;

    auto node_of = [&](std::uint64_t id) -> NodeId {
        if (!options.remap_ids) return static_cast<NodeId>(id);
        auto [it, inserted] = remap.try_emplace(id, static_cast<NodeId>(remap.size()));
        if (inserted) local.original_ids.push_back(id);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.front().front() == '#') {
            // "# nodes N" is the node-count trailer written by write_edge_list.
            if (!options.remap_ids && tokens.size() == 3 && tokens[0] == "#" && tokens[1] == "nodes")
                node_count = std::max<std::size_t>(node_count, parse_id(tokens[2], line_no));
            continue;
        }
        if (tokens.size() != 2 && tokens.size() != 3)
            throw ParseError("expected 'src dst [weight]'", line_no);
        const NodeId src = node_of(parse_id(tokens[0], line_no));
        const NodeId dst = node_of(parse_id(tokens[1], line_no));
        const double weight = tokens.size() == 3 ? parse_weight(tokens[2], line_no) : 0.0;
        if (!(weight >= 0.0 && weight <= 1.0))
            throw ValidationError("line " + std::to_string(line_no) + ": weight outside [0,1]");
        node_count = std::max<std::size_t>(node_count, std::max(src, dst) + std::size_t{1});
        if (src == dst) {
            ++local.self_loops_dropped;
            continue;
        }
        raw.push_back({src, dst, weight});
        if (options.undirected) raw.push_back({dst, src, weight});
    }

    std::vector<std::vector<Edge>> adjacency(node_count);
    for (const RawEdge& e : raw) adjacency[e.src].push_back({e.dst, e.weight});
    local.edges = raw.size();
    if (report) *report = std::move(local);
    return Graph(node_count, std::move(adjacency));
}

Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options,
                     EdgeListReport* report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list " + path.string());
    return read_edge_list(in, options, report);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    char buf[64];
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (const Edge& e : g.out_edges(u)) {
            auto res = std::to_chars(buf, buf + sizeof buf, e.weight);
            out << u << ' ' << e.target << ' ' << std::string_view(buf, res.ptr - buf) << '\n';
        }
    }
    // Trailing isolated nodes would otherwise be lost.
    if (g.node_count() > 0) out << "# nodes " << g.node_count() << '\n';
}

Graph assign_wc_weights(const Graph& g) {
    std::vector<std::vector<Edge>> adjacency(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (const Edge& e : g.out_edges(u))
            adjacency[u].push_back({e.target, 1.0 / static_cast<double>(g.in_degree(e.target))});
    }
    return Graph(g.node_count(), std::move(adjacency));
}

Graph assign_tv_weights(const Graph& g, Rng& rng) {
    static constexpr double kLevels[] = {0.1, 0.01, 0.001};
    std::vector<std::vector<Edge>> adjacency(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (const Edge& e : g.out_edges(u)) adjacency[u].push_back({e.target, kLevels[rng.below(3)]});
    }
    return Graph(g.node_count(), std::move(adjacency));
}

}  // namespace oimp
