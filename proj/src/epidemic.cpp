#include "hirenet/epidemic.hpp"

#include <algorithm>
#include <stdexcept>

#include "hirenet/parallel.hpp"

namespace hirenet {

std::uint64_t trial_key(std::uint64_t master_seed, NodeId seed_node, double p, double q,
                        std::uint64_t trial) {
    std::uint64_t k = master_seed;
    k = rng::combine(k, static_cast<std::uint64_t>(seed_node));
    k = rng::combine(k, rng::key_from_double(p));
    k = rng::combine(k, rng::key_from_double(q));
    k = rng::combine(k, trial);
    return k;
}

UnreachableSets unreachable_sets(const HiringNetwork& net) {
    const NodeId n = net.node_count();
    UnreachableSets sets(static_cast<std::size_t>(n));
    for (NodeId u = 0; u < n; ++u) {
        const auto reach = reachable_set(net, u);
        auto& out = sets[static_cast<std::size_t>(u)];
        out.reserve(static_cast<std::size_t>(n) - reach.size());
        std::size_t r = 0;
        for (NodeId v = 0; v < n; ++v) {
            if (r < reach.size() && reach[r] == v) {
                ++r;
            } else {
                out.push_back(v);
            }
        }
    }
    return sets;
}

namespace {

// Reusable per-thread buffers; the epoch trick spares a clear per trial.
struct SiWorkspace {
    std::vector<std::uint32_t> mark;
    std::uint32_t epoch = 0;
    std::vector<NodeId> frontier;
    std::vector<NodeId> next;

    void reset(std::size_t n) {
        if (mark.size() != n) {
            mark.assign(n, 0);
            epoch = 0;
        }
        ++epoch;
        frontier.clear();
        next.clear();
    }

    bool infected(NodeId v) const { return mark[static_cast<std::size_t>(v)] == epoch; }
    void infect(NodeId v) { mark[static_cast<std::size_t>(v)] = epoch; }
};

struct SiStats {
    std::int64_t size = 1;
    int length = 0;
    int jumps = 0;
};

SiStats run_core(const HiringNetwork& net, NodeId seed_node, double p, double q,
                 const UnreachableSets* unreachable, const TrialStream& stream,
                 SiWorkspace& ws) {
    if (!net.valid_node(seed_node)) throw std::invalid_argument("invalid seed node");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("q must lie in [0, 1]");
    if (q > 0.0 && unreachable == nullptr)
        throw std::invalid_argument("jump model requires precomputed unreachable sets");

    ws.reset(static_cast<std::size_t>(net.node_count()));
    ws.infect(seed_node);
    ws.frontier.push_back(seed_node);

    SiStats stats;
    int step = 0;
    while (!ws.frontier.empty()) {
        ++step;
        ws.next.clear();
        for (const NodeId u : ws.frontier) {
            const std::size_t base = net.out_offset(u);
            const auto edges = net.out_edges(u);
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const NodeId v = edges[i].dst;
                if (v == u || ws.infected(v)) continue; // self-loop / spent on an infected head
                if (stream.edge_uniform(base + i) < p) {
                    ws.infect(v);
                    ws.next.push_back(v);
                }
            }
            if (q > 0.0) {
                const auto& pool = (*unreachable)[static_cast<std::size_t>(u)];
                if (!pool.empty() && stream.jump_uniform(u) < q) {
                    ++stats.jumps;
                    const NodeId w = pool[stream.jump_choice(u, pool.size())];
                    if (!ws.infected(w)) {
                        ws.infect(w);
                        ws.next.push_back(w);
                    }
                }
            }
        }
        if (!ws.next.empty()) {
            stats.length = step;
            stats.size += static_cast<std::int64_t>(ws.next.size());
        }
        ws.frontier.swap(ws.next);
    }
    return stats;
}

EpidemicOutcome collect(const HiringNetwork& net, const SiWorkspace& ws, const SiStats& stats) {
    EpidemicOutcome outcome;
    outcome.size_Y = stats.size;
    outcome.length_L = stats.length;
    outcome.jumps_taken = stats.jumps;
    outcome.infected.reserve(static_cast<std::size_t>(stats.size));
    for (NodeId v = 0; v < net.node_count(); ++v)
        if (ws.infected(v)) outcome.infected.push_back(v);
    return outcome;
}

} // namespace

EpidemicOutcome run_si(const HiringNetwork& net, NodeId seed_node, double p,
                       const TrialStream& stream) {
    SiWorkspace ws;
    const auto stats = run_core(net, seed_node, p, 0.0, nullptr, stream, ws);
    return collect(net, ws, stats);
}

EpidemicOutcome run_si_jump(const HiringNetwork& net, NodeId seed_node, double p, double q,
                            const UnreachableSets& unreachable, const TrialStream& stream) {
    if (unreachable.size() != static_cast<std::size_t>(net.node_count()))
        throw std::invalid_argument("unreachable sets must cover all nodes");
    SiWorkspace ws;
    const auto stats = run_core(net, seed_node, p, q, &unreachable, stream, ws);
    return collect(net, ws, stats);
}

namespace {

McSummary summarize_cell(const HiringNetwork& net, NodeId seed_node, double p, double q,
                         std::uint64_t trials, std::uint64_t master_seed,
                         const UnreachableSets* unreachable, SiWorkspace& ws) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    std::int64_t size_total = 0;
    std::int64_t length_total = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const TrialStream stream(trial_key(master_seed, seed_node, p, q, t));
        const auto stats = run_core(net, seed_node, p, q, unreachable, stream, ws);
        size_total += stats.size;
        length_total += stats.length;
    }
    McSummary summary;
    summary.mean_size_frac = static_cast<double>(size_total) /
                             (static_cast<double>(trials) * static_cast<double>(net.node_count()));
    summary.mean_length = static_cast<double>(length_total) / static_cast<double>(trials);
    if (const auto ell = mean_geodesic_length(net, seed_node))
        summary.mean_length_norm = summary.mean_length / *ell;
    return summary;
}

} // namespace

McSummary mc_summary(const HiringNetwork& net, NodeId seed_node, const EpidemicConfig& config) {
    SiWorkspace ws;
    UnreachableSets unreachable;
    const UnreachableSets* sets = nullptr;
    if (config.q > 0.0) {
        unreachable = unreachable_sets(net);
        sets = &unreachable;
    }
    return summarize_cell(net, seed_node, config.p, config.q, config.trials, config.master_seed,
                          sets, ws);
}

SweepResult sweep(const HiringNetwork& net, std::span<const NodeId> seeds,
                  std::span<const double> p_grid, std::span<const double> q_grid,
                  std::uint64_t trials, std::uint64_t master_seed, unsigned workers) {
    if (p_grid.empty() || q_grid.empty()) throw std::invalid_argument("parameter grids must be nonempty");
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    for (const NodeId s : seeds)
        if (!net.valid_node(s)) throw std::invalid_argument("invalid seed node " + std::to_string(s));

    const bool any_jump = std::any_of(q_grid.begin(), q_grid.end(), [](double q) { return q > 0.0; });
    UnreachableSets unreachable;
    if (any_jump) unreachable = unreachable_sets(net);

    const std::size_t cells = seeds.size() * p_grid.size() * q_grid.size();
    SweepResult result;
    result.rows.resize(cells);
    parallel_for(cells, workers, [&](std::size_t cell) {
        thread_local SiWorkspace ws;
        const std::size_t qi = cell % q_grid.size();
        const std::size_t pi = (cell / q_grid.size()) % p_grid.size();
        const std::size_t si = cell / (q_grid.size() * p_grid.size());
        const NodeId node = seeds[si];
        const double p = p_grid[pi];
        const double q = q_grid[qi];
        const auto summary = summarize_cell(net, node, p, q, trials, master_seed,
                                            any_jump ? &unreachable : nullptr, ws);
        result.rows[cell] = {node, p, q, summary.mean_size_frac, summary.mean_length,
                             summary.mean_length_norm, trials};
    });
    return result;
}

} // namespace hirenet
