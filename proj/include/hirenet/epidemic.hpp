#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hirenet/graph.hpp"
#include "hirenet/rng.hpp"

namespace hirenet {

struct EpidemicConfig {
    double p = 0.0;               // per-edge transmission probability
    double q = 0.0;               // per-infected-node jump probability
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
};

struct EpidemicOutcome {
    std::vector<NodeId> infected; // sorted by id, includes the seed
    std::int64_t size_Y = 0;
    int length_L = 0;             // last step index that produced a new infection
    int jumps_taken = 0;          // jump transmissions executed (target drawn)
};

// All random draws in one trial come from a TrialStream. The uniform used
// for an edge is a pure function of (stream key, edge index), and likewise
// for a node's jump decision and jump target, so outcomes for two parameter
// values can be coupled by handing both runs the same stream.
class TrialStream {
public:
    explicit TrialStream(std::uint64_t key)
        : edge_(rng::Stream(key).derive(0x45444745)),   // "EDGE"
          jump_(rng::Stream(key).derive(0x4a554d50)),   // "JUMP"
          target_(rng::Stream(key).derive(0x54524754)) {} // "TRGT"

    double edge_uniform(std::size_t edge_index) const { return edge_.uniform(edge_index); }
    double jump_uniform(NodeId u) const { return jump_.uniform(static_cast<std::uint64_t>(u)); }
    std::uint64_t jump_choice(NodeId u, std::uint64_t n) const {
        return target_.below(static_cast<std::uint64_t>(u), n);
    }

private:
    rng::Stream edge_;
    rng::Stream jump_;
    rng::Stream target_;
};

// Stream key for one Monte Carlo trial. Keys hash the parameter *values*,
// so a sweep cell's results do not depend on where the cell sits in a grid.
std::uint64_t trial_key(std::uint64_t master_seed, NodeId seed_node, double p, double q,
                        std::uint64_t trial);

// unreachable[u] = complement of reachable_set(net, u), sorted by id.
using UnreachableSets = std::vector<std::vector<NodeId>>;
UnreachableSets unreachable_sets(const HiringNetwork& net);

// Discrete-time SI cascade from seed_node. A node infected at step t tries
// each of its out-edges once at step t+1 (parallel edges independently);
// self-loops are skipped; the run ends when a step infects nobody.
EpidemicOutcome run_si(const HiringNetwork& net, NodeId seed_node, double p,
                       const TrialStream& stream);

// SI plus jumps: at its transmission step every infected node (the seed
// included) makes one jump attempt; with probability q it transmits to a
// uniformly chosen node it cannot reach through the network, wasted if that
// node is already infected. Nodes that reach everything never attempt.
EpidemicOutcome run_si_jump(const HiringNetwork& net, NodeId seed_node, double p, double q,
                            const UnreachableSets& unreachable, const TrialStream& stream);

struct McSummary {
    double mean_size_frac = 0.0;              // mean Y / N
    double mean_length = 0.0;                 // mean L
    std::optional<double> mean_length_norm;   // mean L / geodesic mean from seed
};

// Means over exactly config.trials independent runs; trial i draws from the
// stream keyed by (master_seed, seed_node, p, q, i). Accumulation is in
// exact integers, so the result is identical for any evaluation order.
McSummary mc_summary(const HiringNetwork& net, NodeId seed_node, const EpidemicConfig& config);

struct SweepRow {
    NodeId node;
    double p;
    double q;
    double mean_size_frac;
    double mean_length;
    std::optional<double> mean_length_norm;
    std::uint64_t trials;
};

struct SweepResult {
    std::vector<SweepRow> rows; // ordered by (seed position, p position, q position)
};

SweepResult sweep(const HiringNetwork& net, std::span<const NodeId> seeds,
                  std::span<const double> p_grid, std::span<const double> q_grid,
                  std::uint64_t trials, std::uint64_t master_seed, unsigned workers = 1);

} // namespace hirenet
