#include "hirenet/prestige.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "hirenet/parallel.hpp"
#include "hirenet/rng.hpp"

namespace hirenet {

long long count_violations(const HiringNetwork& net, const Ranking& r) {
    if (r.pi.size() != static_cast<std::size_t>(net.node_count()))
        throw std::invalid_argument("ranking must cover all nodes");
    long long violations = 0;
    for (const Edge& e : net.edges()) {
        if (e.src == e.dst) continue;
        if (r.pi[static_cast<std::size_t>(e.dst)] < r.pi[static_cast<std::size_t>(e.src)]) ++violations;
    }
    return violations;
}

namespace {

// Aggregated neighbours with multiplicities, self-loops dropped. Used for
// O(deg) re-evaluation of a rank swap.
struct IncidenceLists {
    struct Arc {
        NodeId other;
        int count;
    };
    std::vector<std::vector<Arc>> out;
    std::vector<std::vector<Arc>> in;

    explicit IncidenceLists(const HiringNetwork& net) {
        const auto n = static_cast<std::size_t>(net.node_count());
        out.resize(n);
        in.resize(n);
        for (NodeId u = 0; u < net.node_count(); ++u) {
            const auto span = net.out_edges(u);
            for (std::size_t i = 0; i < span.size();) {
                std::size_t j = i;
                while (j < span.size() && span[j].dst == span[i].dst) ++j;
                if (span[i].dst != u) {
                    const int c = static_cast<int>(j - i);
                    out[static_cast<std::size_t>(u)].push_back({span[i].dst, c});
                    in[static_cast<std::size_t>(span[i].dst)].push_back({u, c});
                }
                i = j;
            }
        }
    }
};

long long incident_violations(const IncidenceLists& inc, const std::vector<int>& pi, NodeId a, NodeId b) {
    long long v = 0;
    const auto ai = static_cast<std::size_t>(a);
    const auto bi = static_cast<std::size_t>(b);
    for (const auto& arc : inc.out[ai])
        if (pi[static_cast<std::size_t>(arc.other)] < pi[ai]) v += arc.count;
    for (const auto& arc : inc.in[ai])
        if (pi[ai] < pi[static_cast<std::size_t>(arc.other)]) v += arc.count;
    // Arcs between a and b were already counted in a's pass.
    for (const auto& arc : inc.out[bi])
        if (arc.other != a && pi[static_cast<std::size_t>(arc.other)] < pi[bi]) v += arc.count;
    for (const auto& arc : inc.in[bi])
        if (arc.other != a && pi[bi] < pi[static_cast<std::size_t>(arc.other)]) v += arc.count;
    return v;
}

struct RestartOutcome {
    Ranking ranking;
    long long violations = 0;
};

RestartOutcome run_restart(const HiringNetwork& net, const IncidenceLists& inc,
                           std::size_t steps, rng::Stream stream) {
    const auto n = static_cast<std::size_t>(net.node_count());
    rng::Sequence seq(stream);

    Ranking r;
    r.pi.resize(n);
    std::iota(r.pi.begin(), r.pi.end(), 1);
    rng::shuffle(r.pi, seq);

    long long violations = count_violations(net, r);
    if (n < 2) return {std::move(r), violations};

    for (std::size_t step = 0; step < steps; ++step) {
        const auto a = static_cast<NodeId>(seq.next_below(n));
        auto b = static_cast<NodeId>(seq.next_below(n - 1));
        if (b >= a) ++b;
        const long long before = incident_violations(inc, r.pi, a, b);
        std::swap(r.pi[static_cast<std::size_t>(a)], r.pi[static_cast<std::size_t>(b)]);
        const long long after = incident_violations(inc, r.pi, a, b);
        if (after > before) {
            std::swap(r.pi[static_cast<std::size_t>(a)], r.pi[static_cast<std::size_t>(b)]);
        } else {
            violations += after - before;
        }
    }
    return {std::move(r), violations};
}

} // namespace

MinimizeResult minimize_violations(const HiringNetwork& net, std::size_t restarts,
                                   std::size_t steps_per_restart, std::uint64_t seed,
                                   unsigned workers) {
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    const IncidenceLists inc(net);

    std::vector<RestartOutcome> outcomes(restarts);
    parallel_for(restarts, workers, [&](std::size_t i) {
        outcomes[i] = run_restart(net, inc, steps_per_restart, rng::Stream(rng::combine(seed, i)));
    });

    long long best = outcomes[0].violations;
    for (const auto& o : outcomes) best = std::min(best, o.violations);

    std::set<Ranking> distinct;
    for (auto& o : outcomes)
        if (o.violations == best) distinct.insert(std::move(o.ranking));

    MinimizeResult result;
    result.best_violations = best;
    result.rankings.assign(distinct.begin(), distinct.end());
    return result;
}

PrestigeScores average_prestige(std::span<const Ranking> samples) {
    if (samples.empty()) throw std::invalid_argument("cannot average an empty sample set");
    const std::size_t n = samples.front().pi.size();
    std::vector<long long> totals(n, 0);
    for (const Ranking& r : samples) {
        if (r.pi.size() != n) throw std::invalid_argument("rankings must share one node set");
        for (std::size_t v = 0; v < n; ++v) totals[v] += r.pi[v];
    }
    PrestigeScores scores;
    scores.samples_used = samples.size();
    scores.mean_rank.resize(n);
    for (std::size_t v = 0; v < n; ++v)
        scores.mean_rank[v] = static_cast<double>(totals[v]) / static_cast<double>(samples.size());
    return scores;
}

double upward_fraction(const HiringNetwork& net, const PrestigeScores& scores) {
    if (scores.mean_rank.size() != static_cast<std::size_t>(net.node_count()))
        throw std::invalid_argument("scores must cover all nodes");
    long long upward = 0;
    long long total = 0;
    for (const Edge& e : net.edges()) {
        if (e.src == e.dst) continue;
        ++total;
        if (scores.mean_rank[static_cast<std::size_t>(e.dst)] < scores.mean_rank[static_cast<std::size_t>(e.src)])
            ++upward;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(upward) / static_cast<double>(total);
}

} // namespace hirenet
