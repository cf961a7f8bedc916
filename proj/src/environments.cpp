#include "oimp/environments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "oimp/errors.hpp"

namespace oimp {

std::size_t Spread::count_for(InfluencerId k) const {
    return static_cast<std::size_t>(std::count_if(activations.begin(), activations.end(),
                                                  [k](const Activation& a) { return a.influencer == k; }));
}

std::vector<NodeId> Spread::nodes() const {
    std::vector<NodeId> out;
    out.reserve(activations.size());
    for (const auto& a : activations) out.push_back(a.node);
    return out;
}

// ---------------------------------------------------------------------------
// FatigueFunction

FatigueFunction FatigueFunction::table(std::vector<double> values) {
    if (values.empty()) throw ValidationError("fatigue table is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0 && values[i] <= 1.0))
            throw ValidationError("fatigue value outside (0,1]");
        if (i > 0 && values[i] > values[i - 1]) throw ValidationError("fatigue table is increasing");
    }
    return FatigueFunction(Kind::table, std::move(values));
}

FatigueFunction FatigueFunction::parse(std::string_view name) {
    if (name == "one") return one();
    if (name == "inv") return inverse();
    if (name == "invsqrt") return inverse_sqrt();
    throw ConfigError("unknown fatigue function '" + std::string(name) + "' (expected one|inv|invsqrt)");
}

double FatigueFunction::operator()(std::size_t s) const {
    if (s == 0) throw DomainError("fatigue is defined for pull indices s >= 1");
    switch (kind_) {
        case Kind::constant_one: return 1.0;
        case Kind::inverse: return 1.0 / static_cast<double>(s);
        case Kind::inverse_sqrt: return 1.0 / std::sqrt(static_cast<double>(s));
        case Kind::table: return values_[std::min(s, values_.size()) - 1];
    }
    return 1.0;
}

std::string FatigueFunction::name() const {
    switch (kind_) {
        case Kind::constant_one: return "one";
        case Kind::inverse: return "inv";
        case Kind::inverse_sqrt: return "invsqrt";
        case Kind::table: return "table";
    }
    return "one";
}

// ---------------------------------------------------------------------------
// Star environment

void StarEnvironment::validate() const {
    if (supports.size() != probs.size()) throw ValidationError("supports and probabilities differ in length");
    for (std::size_t k = 0; k < supports.size(); ++k) {
        if (supports[k].size() != probs[k].size())
            throw ValidationError("influencer " + std::to_string(k) + ": support/probability shape mismatch");
        for (double p : probs[k])
            if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("activation probability outside [0,1]");
        auto sorted = supports[k];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ValidationError("influencer " + std::to_string(k) + ": duplicate support node");
    }
}

std::size_t StarEnvironment::node_count() const {
    std::size_t n = 0;
    for (const auto& s : supports)
        for (NodeId u : s) n = std::max<std::size_t>(n, std::size_t{u} + 1);
    return n;
}

double StarEnvironment::lambda(InfluencerId k) const {
    if (k >= probs.size()) throw DomainError("unknown influencer " + std::to_string(k));
    double sum = 0.0;
    for (double p : probs[k]) sum += p;
    return sum;
}

std::size_t CascadeLog::node_count() const {
    std::size_t n = 0;
    for (const auto& per : cascades)
        for (const auto& c : per)
            for (NodeId u : c) n = std::max<std::size_t>(n, std::size_t{u} + 1);
    return n;
}

Spread star_pull(const StarEnvironment& env, InfluencerId k, Rng& rng) {
    if (k >= env.influencer_count()) throw DomainError("unknown influencer " + std::to_string(k));
    Spread spread;
    const auto& support = env.supports[k];
    const auto& probs = env.probs[k];
    for (std::size_t i = 0; i < support.size(); ++i)
        if (rng.bernoulli(probs[i])) spread.activations.push_back({support[i], k});
    return spread;
}

Spread star_pull(const StarEnvironment& env, std::span<const InfluencerId> seeded, Rng& rng) {
    if (seeded.size() == 1) return star_pull(env, seeded.front(), rng);
    Spread spread;
    NodeSet seen;
    for (InfluencerId k : seeded) {
        Spread part = star_pull(env, k, rng);
        for (const Activation& a : part.activations)
            if (seen.insert(a.node)) spread.activations.push_back(a);
    }
    return spread;
}

// ---------------------------------------------------------------------------
// Graph cascades

void CascadeWorkspace::prepare(std::size_t node_count) {
    if (active.size() < node_count) {
        active.assign(node_count, 0);
        touched.assign(node_count, 0);
        threshold.assign(node_count, 0.0);
        incoming.assign(node_count, 0.0);
        epoch = 0;
    }
    if (++epoch == 0) {
        std::fill(active.begin(), active.end(), 0);
        std::fill(touched.begin(), touched.end(), 0);
        epoch = 1;
    }
    frontier.clear();
    next.clear();
}

namespace {

constexpr double kLtTolerance = 1e-9;

std::vector<Seed> sorted_seeds(std::span<const Seed> seeds) {
    std::vector<Seed> out(seeds.begin(), seeds.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const Seed& a, const Seed& b) { return a.influencer < b.influencer; });
    return out;
}

std::vector<Seed> positional_seeds(std::span<const NodeId> nodes) {
    std::vector<Seed> out;
    out.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out.push_back({static_cast<InfluencerId>(i), nodes[i]});
    return out;
}

// Layered diffusion shared by both models. `on_activate(seed)` fires once per
// activated node in activation order, seeds first.
template <class OnActivate>
void diffuse(const Graph& g, DiffusionModel model, std::span<const Seed> seeds, Rng& rng,
             CascadeWorkspace& ws, OnActivate&& on_activate) {
    if (model == DiffusionModel::lt && g.max_incoming_weight() > 1.0 + kLtTolerance)
        throw ValidationError("linear threshold needs incoming weights summing to at most 1");
    ws.prepare(g.node_count());
    const std::uint32_t epoch = ws.epoch;

    for (const Seed& s : seeds) {
        if (s.node >= g.node_count()) throw DomainError("seed node " + std::to_string(s.node) + " out of range");
        if (ws.active[s.node] == epoch) continue;
        ws.active[s.node] = epoch;
        ws.frontier.push_back(s);
        on_activate(s);
    }

    while (!ws.frontier.empty()) {
        ws.next.clear();
        for (const Seed& from : ws.frontier) {
            for (const Edge& e : g.out_edges(from.node)) {
                const NodeId v = e.target;
                if (ws.active[v] == epoch) continue;
                bool fire;
                if (model == DiffusionModel::ic) {
                    fire = rng.bernoulli(e.weight);
                } else {
                    if (ws.touched[v] != epoch) {
                        ws.touched[v] = epoch;
                        ws.threshold[v] = 1.0 - rng.uniform();  // (0, 1]
                        ws.incoming[v] = 0.0;
                    }
                    ws.incoming[v] += e.weight;
                    fire = ws.incoming[v] >= ws.threshold[v];
                }
                if (fire) {
                    ws.active[v] = epoch;
                    const Seed reached{from.influencer, v};
                    ws.next.push_back(reached);
                    on_activate(reached);
                }
            }
        }
        std::swap(ws.frontier, ws.next);
    }
}

Spread run_cascade(const Graph& g, DiffusionModel model, std::span<const Seed> seeds, Rng& rng,
                   CascadeWorkspace* workspace) {
    CascadeWorkspace local;
    CascadeWorkspace& ws = workspace ? *workspace : local;
    const auto ordered = sorted_seeds(seeds);
    Spread spread;
    diffuse(g, model, ordered, rng, ws,
            [&](const Seed& s) { spread.activations.push_back({s.node, s.influencer}); });
    return spread;
}

}  // namespace

Spread ic_cascade(const Graph& g, std::span<const Seed> seeds, Rng& rng, CascadeWorkspace* workspace) {
    return run_cascade(g, DiffusionModel::ic, seeds, rng, workspace);
}

Spread ic_cascade(const Graph& g, std::span<const NodeId> seeds, Rng& rng) {
    return ic_cascade(g, positional_seeds(seeds), rng);
}

Spread lt_cascade(const Graph& g, std::span<const Seed> seeds, Rng& rng, CascadeWorkspace* workspace) {
    return run_cascade(g, DiffusionModel::lt, seeds, rng, workspace);
}

Spread lt_cascade(const Graph& g, std::span<const NodeId> seeds, Rng& rng) {
    return lt_cascade(g, positional_seeds(seeds), rng);
}

std::size_t cascade_reach(const Graph& g, DiffusionModel model, std::span<const NodeId> seeds,
                          const NodeSet* discount, Rng& rng, CascadeWorkspace& workspace) {
    thread_local std::vector<Seed> buffer;
    buffer.clear();
    for (std::size_t i = 0; i < seeds.size(); ++i) buffer.push_back({static_cast<InfluencerId>(i), seeds[i]});
    std::size_t reach = 0;
    diffuse(g, model, buffer, rng, workspace, [&](const Seed& s) {
        if (!discount || !discount->contains(s.node)) ++reach;
    });
    return reach;
}

// ---------------------------------------------------------------------------
// Replay and fatigue

Spread replay_pull(const CascadeLog& log, InfluencerId k, Rng& rng) {
    if (k >= log.influencer_count() || log.cascades[k].empty())
        throw DomainError("no logged cascade for influencer " + std::to_string(k));
    const auto& chosen = log.cascades[k][rng.below(log.cascades[k].size())];
    Spread spread;
    spread.activations.reserve(chosen.size());
    for (NodeId u : chosen) spread.activations.push_back({u, k});
    return spread;
}

Spread fatigue_filter(const Spread& spread, const FatigueFunction& gamma, std::size_t s, Rng& rng) {
    const double keep = gamma(s);
    if (keep >= 1.0) return spread;
    Spread out;
    for (const Activation& a : spread.activations)
        if (rng.bernoulli(keep)) out.activations.push_back(a);
    return out;
}

double true_remaining_potential(const StarEnvironment& env, InfluencerId k, const NodeSet& activated,
                                const FatigueFunction& gamma, std::size_t next_pull) {
    if (k >= env.influencer_count()) throw DomainError("unknown influencer " + std::to_string(k));
    double sum = 0.0;
    const auto& support = env.supports[k];
    for (std::size_t i = 0; i < support.size(); ++i)
        if (!activated.contains(support[i])) sum += env.probs[k][i];
    return gamma(next_pull) * sum;
}

double true_remaining_potential(const Environment& env, InfluencerId k, const NodeSet& activated,
                                const FatigueFunction& gamma, std::size_t next_pull) {
    const StarEnvironment* star = env.star();
    if (!star) throw UnsupportedOperation("remaining potential needs a star environment");
    return true_remaining_potential(*star, k, activated, gamma, next_pull);
}

// ---------------------------------------------------------------------------
// Environment adapters

StarEnv::StarEnv(StarEnvironment env) : env_(std::move(env)) {
    env_.validate();
    node_count_ = env_.node_count();
}

Spread StarEnv::pull(std::span<const InfluencerId> seeded, Rng& rng) { return star_pull(env_, seeded, rng); }

std::unique_ptr<Environment> StarEnv::clone() const { return std::make_unique<StarEnv>(env_); }

GraphEnv::GraphEnv(std::shared_ptr<const Graph> graph, std::vector<NodeId> influencers, DiffusionModel model)
    : graph_(std::move(graph)), influencers_(std::move(influencers)), model_(model) {
    for (NodeId u : influencers_)
        if (u >= graph_->node_count()) throw DomainError("influencer node " + std::to_string(u) + " out of range");
    if (model_ == DiffusionModel::lt && graph_->max_incoming_weight() > 1.0 + kLtTolerance)
        throw ValidationError("linear threshold needs incoming weights summing to at most 1");
}

Spread GraphEnv::pull(std::span<const InfluencerId> seeded, Rng& rng) {
    std::vector<Seed> seeds;
    seeds.reserve(seeded.size());
    for (InfluencerId k : seeded) {
        if (k >= influencers_.size()) throw DomainError("unknown influencer " + std::to_string(k));
        seeds.push_back({k, influencers_[k]});
    }
    return run_cascade(*graph_, model_, seeds, rng, &workspace_);
}

std::unique_ptr<Environment> GraphEnv::clone() const {
    return std::make_unique<GraphEnv>(graph_, influencers_, model_);
}

ReplayEnv::ReplayEnv(std::shared_ptr<const CascadeLog> log) : log_(std::move(log)) {
    for (std::size_t k = 0; k < log_->influencer_count(); ++k)
        if (log_->cascades[k].empty())
            throw ValidationError("influencer " + std::to_string(k) + " has no logged cascade");
    node_count_ = log_->node_count();
}

Spread ReplayEnv::pull(std::span<const InfluencerId> seeded, Rng& rng) {
    if (seeded.size() == 1) return replay_pull(*log_, seeded.front(), rng);
    Spread spread;
    NodeSet seen;
    for (InfluencerId k : seeded) {
        Spread part = replay_pull(*log_, k, rng);
        for (const Activation& a : part.activations)
            if (seen.insert(a.node)) spread.activations.push_back(a);
    }
    return spread;
}

std::unique_ptr<Environment> ReplayEnv::clone() const { return std::make_unique<ReplayEnv>(log_); }

FatigueEnv::FatigueEnv(std::unique_ptr<Environment> inner, FatigueFunction gamma)
    : inner_(std::move(inner)), gamma_(std::move(gamma)), pulls_(inner_->influencer_count(), 0) {}

Spread FatigueEnv::pull(std::span<const InfluencerId> seeded, Rng& rng) {
    Spread raw = inner_->pull(seeded, rng);
    for (InfluencerId k : seeded) ++pulls_.at(k);
    if (gamma_.is_constant_one()) return raw;
    Spread out;
    out.activations.reserve(raw.size());
    for (const Activation& a : raw.activations) {
        const double keep = gamma_(pulls_[a.influencer]);
        if (keep >= 1.0 || rng.bernoulli(keep)) out.activations.push_back(a);
    }
    return out;
}

std::unique_ptr<Environment> FatigueEnv::clone() const {
    return std::make_unique<FatigueEnv>(inner_->clone(), gamma_);
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <class T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
    token = trim(token);
    T value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(std::string("invalid ") + what + " '" + std::string(token) + "'", line);
    return value;
}

template <class OnLine>
void for_each_record(std::istream& in, OnLine&& on_line) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto semi = line.find(';');
        if (semi == std::string_view::npos) throw ParseError("expected 'influencer;...'", line_no);
        const auto k = parse_number<std::uint32_t>(line.substr(0, semi), line_no, "influencer id");
        on_line(k, trim(line.substr(semi + 1)), line_no);
    }
}

template <class OnItem>
void for_each_item(std::string_view list, OnItem&& on_item) {
    while (!list.empty()) {
        const auto comma = list.find(',');
        on_item(list.substr(0, comma));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
}

void write_double(std::ostream& out, double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.write(buf, res.ptr - buf);
}

}  // namespace

CascadeLog read_cascade_log(std::istream& in) {
    CascadeLog log;
    for_each_record(in, [&](std::uint32_t k, std::string_view rest, std::size_t line) {
        if (k >= log.cascades.size()) log.cascades.resize(std::size_t{k} + 1);
        std::vector<NodeId> cascade;
        for_each_item(rest, [&](std::string_view item) {
            cascade.push_back(parse_number<NodeId>(item, line, "node id"));
        });
        auto sorted = cascade;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ParseError("duplicate node in cascade", line);
        log.cascades[k].push_back(std::move(cascade));
    });
    return log;
}

CascadeLog load_cascade_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cascade log " + path.string());
    return read_cascade_log(in);
}

void write_cascade_log(const CascadeLog& log, std::ostream& out) {
    for (std::size_t k = 0; k < log.cascades.size(); ++k) {
        for (const auto& cascade : log.cascades[k]) {
            out << k << ';';
            for (std::size_t i = 0; i < cascade.size(); ++i) out << (i ? "," : "") << cascade[i];
            out << '\n';
        }
    }
}

StarEnvironment read_star_spec(std::istream& in) {
    StarEnvironment env;
    for_each_record(in, [&](std::uint32_t k, std::string_view rest, std::size_t line) {
        if (k >= env.supports.size()) {
            env.supports.resize(std::size_t{k} + 1);
            env.probs.resize(std::size_t{k} + 1);
        }
        for_each_item(rest, [&](std::string_view item) {
            const auto colon = item.find(':');
            if (colon == std::string_view::npos) throw ParseError("expected 'node:probability'", line);
            env.supports[k].push_back(parse_number<NodeId>(item.substr(0, colon), line, "node id"));
            env.probs[k].push_back(parse_number<double>(item.substr(colon + 1), line, "probability"));
        });
    });
    env.validate();
    return env;
}

StarEnvironment load_star_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open star spec " + path.string());
    return read_star_spec(in);
}

void write_star_spec(const StarEnvironment& env, std::ostream& out) {
    for (std::size_t k = 0; k < env.supports.size(); ++k) {
        out << k << ';';
        for (std::size_t i = 0; i < env.supports[k].size(); ++i) {
            out << (i ? "," : "") << env.supports[k][i] << ':';
            write_double(out, env.probs[k][i]);
        }
        out << '\n';
    }
}

}  // namespace oimp
