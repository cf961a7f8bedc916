#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oimp/graph.hpp"
#include "oimp/random.hpp"
#include "oimp/types.hpp"

namespace oimp {

struct Activation {
    NodeId node;
    InfluencerId influencer;

    friend bool operator==(const Activation&, const Activation&) = default;
};

/// Nodes activated by one trial, each attributed to the seeded influencer
/// responsible for it. Node ids are distinct.
struct Spread {
    std::vector<Activation> activations;

    std::size_t size() const noexcept { return activations.size(); }
    bool empty() const noexcept { return activations.empty(); }
    std::size_t count_for(InfluencerId k) const;
    std::vector<NodeId> nodes() const;

    friend bool operator==(const Spread&, const Spread&) = default;
};

/// Known non-increasing weariness function on pull indices s >= 1, valued in (0, 1].
class FatigueFunction {
public:
    enum class Kind { constant_one, inverse, inverse_sqrt, table };

    FatigueFunction() = default;

    static FatigueFunction one() { return FatigueFunction(Kind::constant_one, {}); }
    static FatigueFunction inverse() { return FatigueFunction(Kind::inverse, {}); }
    static FatigueFunction inverse_sqrt() { return FatigueFunction(Kind::inverse_sqrt, {}); }
    /// values[s-1] is gamma(s); the last value extends to larger s.
    /// Throws ValidationError unless values are in (0,1] and non-increasing.
    static FatigueFunction table(std::vector<double> values);

    /// Accepts "one", "inv" and "invsqrt".
    static FatigueFunction parse(std::string_view name);

    double operator()(std::size_t s) const;

    Kind kind() const noexcept { return kind_; }
    std::string name() const;
    bool is_constant_one() const noexcept { return kind_ == Kind::constant_one; }

private:
    FatigueFunction(Kind kind, std::vector<double> values) : kind_(kind), values_(std::move(values)) {}

    Kind kind_ = Kind::constant_one;
    std::vector<double> values_;
};

/// Influencers with explicit supports A_k and activation probabilities p_k(u).
/// Supports may overlap.
struct StarEnvironment {
    std::vector<std::vector<NodeId>> supports;
    std::vector<std::vector<double>> probs;

    /// Throws ValidationError on shape mismatch or probabilities outside [0,1].
    void validate() const;

    std::size_t influencer_count() const noexcept { return supports.size(); }
    /// One past the largest node id in any support.
    std::size_t node_count() const;
    /// Expected first-pull spread: sum of p_k(u) over A_k.
    double lambda(InfluencerId k) const;
};

/// Historical spreads per influencer, replayed verbatim.
struct CascadeLog {
    std::vector<std::vector<std::vector<NodeId>>> cascades;

    std::size_t influencer_count() const noexcept { return cascades.size(); }
    std::size_t node_count() const;
};

/// Each node of A_k is activated independently with probability p_k(u).
/// Throws DomainError for an unknown influencer.
Spread star_pull(const StarEnvironment& env, InfluencerId k, Rng& rng);

/// Simultaneous trial of several influencers. A node activated by more than
/// one of them is attributed to the lowest influencer id.
Spread star_pull(const StarEnvironment& env, std::span<const InfluencerId> seeded, Rng& rng);

enum class DiffusionModel { ic, lt };

struct Seed {
    InfluencerId influencer;
    NodeId node;
};

/// Reusable scratch buffers for graph cascades. One per thread.
class CascadeWorkspace {
public:
    void prepare(std::size_t node_count);

    std::vector<std::uint32_t> active;
    std::vector<std::uint32_t> touched;
    std::vector<double> threshold;
    std::vector<double> incoming;
    std::vector<Seed> frontier;
    std::vector<Seed> next;
    std::uint32_t epoch = 0;
};

/// Independent cascade. Frontiers advance layer by layer in lockstep; within a
/// layer nodes are processed by ascending influencer id, so a node reached by
/// several seeds in the same layer goes to the lowest id.
Spread ic_cascade(const Graph& g, std::span<const Seed> seeds, Rng& rng,
                  CascadeWorkspace* workspace = nullptr);
/// Seeds given as node ids; the position in `seeds` is the influencer id.
Spread ic_cascade(const Graph& g, std::span<const NodeId> seeds, Rng& rng);

/// Linear threshold with per-cascade thresholds uniform on (0, 1]. Throws
/// ValidationError when some node's incoming weights sum above 1 + 1e-9.
Spread lt_cascade(const Graph& g, std::span<const Seed> seeds, Rng& rng,
                  CascadeWorkspace* workspace = nullptr);
Spread lt_cascade(const Graph& g, std::span<const NodeId> seeds, Rng& rng);

/// Number of activated nodes outside `discount`, without building a Spread.
std::size_t cascade_reach(const Graph& g, DiffusionModel model, std::span<const NodeId> seeds,
                          const NodeSet* discount, Rng& rng, CascadeWorkspace& workspace);

/// One logged cascade of k chosen uniformly at random. Throws DomainError if k
/// has no logged cascade.
Spread replay_pull(const CascadeLog& log, InfluencerId k, Rng& rng);

/// Keeps each activation independently with probability gamma(s).
/// With gamma(s) == 1 the spread is returned unchanged and no draws are consumed.
Spread fatigue_filter(const Spread& spread, const FatigueFunction& gamma, std::size_t s, Rng& rng);

/// gamma(next_pull) times the summed p_k(u) of support nodes not in `activated`.
double true_remaining_potential(const StarEnvironment& env, InfluencerId k, const NodeSet& activated,
                                const FatigueFunction& gamma, std::size_t next_pull);

/// Diffusion medium queried by campaigns: seed some influencers, observe the spread.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string_view kind() const = 0;
    virtual std::size_t influencer_count() const = 0;
    virtual std::size_t node_count() const = 0;

    /// One trial. `seeded` holds distinct influencer ids in ascending order.
    virtual Spread pull(std::span<const InfluencerId> seeded, Rng& rng) = 0;

    /// Fresh instance with the same parameters and no per-run state.
    virtual std::unique_ptr<Environment> clone() const = 0;

    virtual const StarEnvironment* star() const { return nullptr; }
    virtual const Graph* graph() const { return nullptr; }
    virtual std::span<const NodeId> influencer_nodes() const { return {}; }
    virtual std::optional<DiffusionModel> model() const { return std::nullopt; }
    virtual const FatigueFunction* fatigue() const { return nullptr; }
};

class StarEnv final : public Environment {
public:
    explicit StarEnv(StarEnvironment env);

    std::string_view kind() const override { return "star"; }
    std::size_t influencer_count() const override { return env_.influencer_count(); }
    std::size_t node_count() const override { return node_count_; }
    Spread pull(std::span<const InfluencerId> seeded, Rng& rng) override;
    std::unique_ptr<Environment> clone() const override;
    const StarEnvironment* star() const override { return &env_; }

private:
    StarEnvironment env_;
    std::size_t node_count_;
};

/// IC or LT cascades on a shared graph, seeded from fixed influencer nodes.
class GraphEnv final : public Environment {
public:
    GraphEnv(std::shared_ptr<const Graph> graph, std::vector<NodeId> influencers, DiffusionModel model);

    std::string_view kind() const override { return model_ == DiffusionModel::ic ? "ic" : "lt"; }
    std::size_t influencer_count() const override { return influencers_.size(); }
    std::size_t node_count() const override { return graph_->node_count(); }
    Spread pull(std::span<const InfluencerId> seeded, Rng& rng) override;
    std::unique_ptr<Environment> clone() const override;
    const Graph* graph() const override { return graph_.get(); }
    std::span<const NodeId> influencer_nodes() const override { return influencers_; }
    std::optional<DiffusionModel> model() const override { return model_; }

private:
    std::shared_ptr<const Graph> graph_;
    std::vector<NodeId> influencers_;
    DiffusionModel model_;
    CascadeWorkspace workspace_;
};

class ReplayEnv final : public Environment {
public:
    /// Throws ValidationError if some influencer has no logged cascade.
    explicit ReplayEnv(std::shared_ptr<const CascadeLog> log);

    std::string_view kind() const override { return "replay"; }
    std::size_t influencer_count() const override { return log_->influencer_count(); }
    std::size_t node_count() const override { return node_count_; }
    Spread pull(std::span<const InfluencerId> seeded, Rng& rng) override;
    std::unique_ptr<Environment> clone() const override;

private:
    std::shared_ptr<const CascadeLog> log_;
    std::size_t node_count_;
};

/// Decorator applying influencer fatigue: the s-th pull of k keeps each node
/// attributed to k with probability gamma(s). Counters are per instance.
class FatigueEnv final : public Environment {
public:
    FatigueEnv(std::unique_ptr<Environment> inner, FatigueFunction gamma);

    std::string_view kind() const override { return inner_->kind(); }
    std::size_t influencer_count() const override { return inner_->influencer_count(); }
    std::size_t node_count() const override { return inner_->node_count(); }
    Spread pull(std::span<const InfluencerId> seeded, Rng& rng) override;
    std::unique_ptr<Environment> clone() const override;

    const StarEnvironment* star() const override { return inner_->star(); }
    const Graph* graph() const override { return inner_->graph(); }
    std::span<const NodeId> influencer_nodes() const override { return inner_->influencer_nodes(); }
    std::optional<DiffusionModel> model() const override { return inner_->model(); }
    const FatigueFunction* fatigue() const override { return &gamma_; }

    std::size_t pull_count(InfluencerId k) const { return pulls_.at(k); }

private:
    std::unique_ptr<Environment> inner_;
    FatigueFunction gamma_;
    std::vector<std::size_t> pulls_;
};

/// Remaining potential from an environment that exposes ground truth; throws
/// UnsupportedOperation otherwise.
double true_remaining_potential(const Environment& env, InfluencerId k, const NodeSet& activated,
                                const FatigueFunction& gamma, std::size_t next_pull);

// Text formats.
//   cascade log:  "influencer_id;node,node,node" per line
//   star spec:    "influencer_id;node:prob,node:prob" per line
// '#' lines and blank lines are ignored in both.
CascadeLog read_cascade_log(std::istream& in);
CascadeLog load_cascade_log(const std::filesystem::path& path);
void write_cascade_log(const CascadeLog& log, std::ostream& out);

StarEnvironment read_star_spec(std::istream& in);
StarEnvironment load_star_spec(const std::filesystem::path& path);
void write_star_spec(const StarEnvironment& env, std::ostream& out);

}  // namespace oimp
