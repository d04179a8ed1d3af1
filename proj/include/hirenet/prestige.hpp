#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hirenet/graph.hpp"

namespace hirenet {

// pi[node] is the node's rank in 1..N; rank 1 is the most prestigious.
struct Ranking {
    std::vector<int> pi;

    friend bool operator==(const Ranking&, const Ranking&) = default;
    friend auto operator<=>(const Ranking& a, const Ranking& b) { return a.pi <=> b.pi; }
};

struct PrestigeScores {
    std::vector<double> mean_rank; // node id -> rank averaged over sampled rankings
    std::size_t samples_used = 0;
};

// Edges (u, v), counted with multiplicity, whose destination outranks their
// source (pi[v] < pi[u]). Self-loops never count.
long long count_violations(const HiringNetwork& net, const Ranking& r);

struct MinimizeResult {
    std::vector<Ranking> rankings; // distinct rankings at best_violations, sorted
    long long best_violations = 0;
};

// Zero-temperature local search over pairwise rank swaps with random
// restarts. Moves that do not increase the violation count are accepted.
// Restart i draws from a stream derived from (seed, i), so the result is
// identical for any worker count, and a larger budget never yields a worse
// violation count under the same seed.
MinimizeResult minimize_violations(const HiringNetwork& net, std::size_t restarts,
                                   std::size_t steps_per_restart, std::uint64_t seed,
                                   unsigned workers = 1);

// Per-node arithmetic mean of ranks across samples.
PrestigeScores average_prestige(std::span<const Ranking> samples);

// Fraction of non-self-loop edges whose destination has a better (smaller)
// mean rank than their source.
double upward_fraction(const HiringNetwork& net, const PrestigeScores& scores);

} // namespace hirenet
