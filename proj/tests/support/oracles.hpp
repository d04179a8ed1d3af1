#pragma once

// Independent brute-force oracles used only by tests. Each one re-derives a
// result by a different route than the library under test.

#include <cstdint>
#include <map>
#include <vector>

#include "hirenet/graph.hpp"
#include "hirenet/prestige.hpp"

namespace hirenet::testing {

// All-pairs shortest paths by Floyd-Warshall over the simple projection.
// dist[u][v] == -1 where unreachable.
std::vector<std::vector<int>> floyd_warshall(const HiringNetwork& net);

// Kosaraju SCCs (two DFS passes); returns component id per node.
std::vector<int> kosaraju_components(const HiringNetwork& net);

// Exhaustive minimum violation count over all N! rankings (N <= 9), plus
// every ranking attaining it.
struct ExhaustiveMvr {
    long long minimum;
    std::vector<Ranking> minima;
};
ExhaustiveMvr exhaustive_mvr(const HiringNetwork& net);

// Exact SI outcome distribution from `seed`: enumerate all 2^m edge-trial
// combinations; each open set determines (Y, L) by BFS over open edges.
// Key: (Y, L) -> probability.
std::map<std::pair<std::int64_t, int>, double> exact_si_distribution(const HiringNetwork& net,
                                                                     NodeId seed, double p);

// Pearson correlation.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

} // namespace hirenet::testing
