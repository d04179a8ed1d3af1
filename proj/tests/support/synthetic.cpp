#include "support/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "hirenet/rng.hpp"

namespace hirenet::testing {

namespace {

std::string node_label(NodeId v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "U%03d", v);
    return buf;
}

std::vector<Institution> labelled_institutions(NodeId n) {
    std::vector<Institution> out;
    out.reserve(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) out.push_back({v, node_label(v)});
    return out;
}

// Out-degree sequence w_i ~ (i + c)^-s with every node producing at least
// one edge; s is searched so that exactly the top 18 nodes cover half of
// all placements.
std::vector<std::size_t> degrees_for_exponent(NodeId n, std::size_t total, double s) {
    const double c = 3.0;
    const auto nn = static_cast<std::size_t>(n);
    std::vector<double> w(nn);
    for (std::size_t i = 0; i < nn; ++i) w[i] = std::pow(static_cast<double>(i) + c, -s);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);

    const auto spread = total - nn;
    std::vector<std::size_t> deg(nn, 1);
    std::vector<std::pair<double, std::size_t>> frac(nn);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < nn; ++i) {
        const double exact = static_cast<double>(spread) * w[i] / sum;
        const auto whole = static_cast<std::size_t>(exact);
        deg[i] += whole;
        assigned += whole;
        frac[i] = {exact - static_cast<double>(whole), i};
    }
    std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
        return std::tie(b.first, a.second) < std::tie(a.first, b.second);
    });
    for (std::size_t k = 0; assigned < spread; ++k, ++assigned) ++deg[frac[k % nn].second];
    return deg;
}

int half_coverage_count(const std::vector<std::size_t>& deg, std::size_t total) {
    std::vector<std::size_t> sorted = deg;
    std::sort(sorted.rbegin(), sorted.rend());
    std::size_t acc = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        acc += sorted[i];
        if (2 * acc >= total) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(sorted.size());
}

std::vector<std::size_t> degree_sequence(NodeId n, std::size_t total) {
    double lo = 0.3, hi = 4.0;
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (half_coverage_count(degrees_for_exponent(n, total, mid), total) > 18) lo = mid;
        else hi = mid;
    }
    return degrees_for_exponent(n, total, hi);
}

} // namespace

HiringNetwork synthetic_hierarchy(const HierarchyParams& params) {
    const NodeId n = params.nodes;
    const auto nn = static_cast<std::size_t>(n);
    rng::Sequence seq{rng::Stream(params.seed)};

    // Prefix sums of exp(-rank / core_decay); a rank in [lo, hi] is drawn
    // proportional to that weight by CDF inversion.
    std::vector<double> prefix(nn + 1, 0.0);
    for (std::size_t r = 0; r < nn; ++r)
        prefix[r + 1] = prefix[r] + std::exp(-static_cast<double>(r) / params.core_decay);
    const auto sample_rank = [&](NodeId lo, NodeId hi) {
        if (seq.next_uniform() >= params.core_pull)
            return static_cast<NodeId>(lo + static_cast<NodeId>(seq.next_below(
                                                static_cast<std::uint64_t>(hi - lo + 1))));
        const double x = prefix[static_cast<std::size_t>(lo)] +
                         seq.next_uniform() * (prefix[static_cast<std::size_t>(hi) + 1] -
                                               prefix[static_cast<std::size_t>(lo)]);
        const auto it = std::upper_bound(prefix.begin() + lo + 1, prefix.begin() + hi + 1, x);
        return static_cast<NodeId>(it - prefix.begin() - 1);
    };

    // Truncated-geometric climb: offset k in [1, max_off], weight exp(-k/reach).
    const auto climb = [&](NodeId max_off) {
        const double a = std::exp(-1.0 / params.up_reach);
        const double total = 1.0 - std::pow(a, max_off);
        const double x = seq.next_uniform() * total;
        const double k = 1.0 + std::floor(std::log1p(-x) / std::log(a));
        return static_cast<NodeId>(std::clamp(k, 1.0, static_cast<double>(max_off)));
    };

    const auto deg = degree_sequence(n, params.edges);
    std::vector<Edge> edges;
    edges.reserve(params.edges);
    for (NodeId src = 0; src < n; ++src) {
        for (std::size_t j = 0; j < deg[static_cast<std::size_t>(src)]; ++j) {
            const double u = seq.next_uniform();
            NodeId dst;
            if (u < params.upward && src > 0) {
                dst = src - climb(src);
            } else if (u < params.upward + params.self_loop || src == n - 1) {
                dst = src;
            } else {
                dst = sample_rank(src + 1, n - 1);
            }
            edges.push_back({src, dst});
        }
    }
    return HiringNetwork(labelled_institutions(n), std::move(edges));
}

HiringNetwork random_multigraph(NodeId nodes, std::size_t edges, std::uint64_t seed,
                                bool allow_self_loops) {
    rng::Sequence seq{rng::Stream(seed)};
    std::vector<Edge> edge_list;
    edge_list.reserve(edges);
    for (std::size_t e = 0; e < edges; ++e) {
        const auto src = static_cast<NodeId>(seq.next_below(static_cast<std::uint64_t>(nodes)));
        NodeId dst = static_cast<NodeId>(seq.next_below(static_cast<std::uint64_t>(nodes)));
        if (!allow_self_loops && nodes > 1) {
            while (dst == src)
                dst = static_cast<NodeId>(seq.next_below(static_cast<std::uint64_t>(nodes)));
        }
        edge_list.push_back({src, dst});
    }
    return HiringNetwork(labelled_institutions(nodes), std::move(edge_list));
}

std::string vertices_tsv(const HiringNetwork& net) {
    std::ostringstream out;
    out << "# id\tlabel\n";
    for (NodeId v = 0; v < net.node_count(); ++v) out << v << '\t' << net.label(v) << '\n';
    return out.str();
}

std::string edges_tsv(const HiringNetwork& net) {
    std::ostringstream out;
    out << "# src\tdst\n";
    for (const Edge& e : net.edges()) out << e.src << '\t' << e.dst << '\n';
    return out.str();
}

TopicSpec synthetic_topic() {
    return {"perfect-hashing", {"perfect hashing", "minimal perfect hash"}};
}

namespace {

Publication on_topic_pub(int year, int salt) {
    return {year, "Perfect Hashing Structures over Static Key Sets no. " + std::to_string(salt)};
}

Publication off_topic_pub(int year, int salt) {
    return {year, "Notes on Compiler Construction volume " + std::to_string(salt)};
}

} // namespace

PlantedCorpus planted_corpus(int n_departments, std::uint64_t seed) {
    PlantedCorpus corpus;
    corpus.topic = synthetic_topic();
    rng::Sequence seq{rng::Stream(seed)};
    int salt = 0;

    for (int d = 0; d < n_departments; ++d) {
        const NodeId dept = d;
        const int kind = d % 3;
        const int t0 = 1995 + static_cast<int>(seq.next_below(8)); // hire year of interest
        const auto fid = [&](int k) { return "F" + std::to_string(d) + "_" + std::to_string(k); };
        const auto phd = static_cast<NodeId>(seq.next_below(static_cast<std::uint64_t>(n_departments)));

        if (kind == 0) {
            // Hiring adoption: new hire publishes on topic the year before
            // and after arrival; the incumbent only much later.
            FacultyCareer hire{fid(0), phd, dept, t0, {on_topic_pub(t0 - 1, ++salt),
                                                       on_topic_pub(t0 + 1, ++salt),
                                                       off_topic_pub(t0 + 2, ++salt)}};
            FacultyCareer incumbent{fid(1), phd, dept, t0 - 10, {off_topic_pub(t0 - 5, ++salt),
                                                                 on_topic_pub(t0 + 4, ++salt)}};
            corpus.careers.push_back(std::move(hire));
            corpus.careers.push_back(std::move(incumbent));
            corpus.expected.push_back({dept, Scenario::Hiring, fid(0), t0});
        } else if (kind == 1) {
            // Non-hiring adoption: a long-tenured incumbent goes first.
            FacultyCareer incumbent{fid(0), phd, dept, t0 - 12, {off_topic_pub(t0 - 8, ++salt),
                                                                 on_topic_pub(t0 - 4, ++salt),
                                                                 on_topic_pub(t0, ++salt)}};
            FacultyCareer hire{fid(1), phd, dept, t0, {on_topic_pub(t0 - 1, ++salt),
                                                       on_topic_pub(t0 + 1, ++salt)}};
            corpus.careers.push_back(std::move(incumbent));
            corpus.careers.push_back(std::move(hire));
            corpus.expected.push_back({dept, Scenario::NonHiring, fid(0), t0 - 4});
        } else {
            FacultyCareer a{fid(0), phd, dept, t0 - 6, {off_topic_pub(t0 - 2, ++salt),
                                                        off_topic_pub(t0 + 1, ++salt)}};
            FacultyCareer b{fid(1), phd, dept, t0, {off_topic_pub(t0 + 2, ++salt)}};
            corpus.careers.push_back(std::move(a));
            corpus.careers.push_back(std::move(b));
            corpus.expected.push_back({dept, Scenario::Null, "", 0});
        }
    }
    return corpus;
}

std::vector<FacultyCareer> null_corpus(const NullCorpusParams& params) {
    rng::Sequence seq{rng::Stream(params.seed)};
    const int total_slots = params.departments * params.faculty_per_department * params.pubs_per_faculty;
    const int on_topic = static_cast<int>(params.on_topic_fraction * total_slots);

    std::vector<int> pool(static_cast<std::size_t>(total_slots), 0);
    std::fill(pool.begin(), pool.begin() + on_topic, 1);
    rng::shuffle(pool, seq);

    std::vector<FacultyCareer> careers;
    int slot = 0;
    int salt = 0;
    for (int d = 0; d < params.departments; ++d) {
        for (int f = 0; f < params.faculty_per_department; ++f) {
            FacultyCareer career;
            career.faculty_id = "N" + std::to_string(d) + "_" + std::to_string(f);
            career.phd_institution = static_cast<NodeId>(seq.next_below(
                static_cast<std::uint64_t>(params.departments)));
            career.job_institution = d;
            career.hire_year = 1985 + static_cast<int>(seq.next_below(20));
            for (int k = 0; k < params.pubs_per_faculty; ++k) {
                const int year = career.hire_year - 6 + static_cast<int>(seq.next_below(16));
                career.publications.push_back(pool[static_cast<std::size_t>(slot++)]
                                                  ? on_topic_pub(year, ++salt)
                                                  : off_topic_pub(year, ++salt));
            }
            std::stable_sort(career.publications.begin(), career.publications.end(),
                             [](const Publication& a, const Publication& b) { return a.year < b.year; });
            careers.push_back(std::move(career));
        }
    }
    return careers;
}

} // namespace hirenet::testing
