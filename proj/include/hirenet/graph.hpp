#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hirenet {

using NodeId = std::int32_t;

struct Institution {
    NodeId id;
    std::string label;
};

// One edge per placed person: doctorate at src, job at dst. Parallel edges
// and self-loops are both meaningful.
struct Edge {
    NodeId src;
    NodeId dst;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed multigraph of institutions. Immutable after construction; the
// edge list is sorted by (src, dst) so that edge indices are canonical and
// independent of input order.
class HiringNetwork {
public:
    HiringNetwork(std::vector<Institution> institutions, std::vector<Edge> edges);

    NodeId node_count() const { return static_cast<NodeId>(institutions_.size()); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<Institution>& institutions() const { return institutions_; }
    const std::string& label(NodeId u) const { return institutions_[static_cast<std::size_t>(u)].label; }

    // Canonical (src, dst)-sorted edge list. The position of an edge in this
    // list is its global edge index.
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const Edge> out_edges(NodeId u) const {
        return {edges_.data() + out_offsets_[static_cast<std::size_t>(u)],
                edges_.data() + out_offsets_[static_cast<std::size_t>(u) + 1]};
    }

    // Global edge index of u's first out-edge.
    std::size_t out_offset(NodeId u) const { return out_offsets_[static_cast<std::size_t>(u)]; }

    std::size_t out_degree(NodeId u) const {
        return out_offsets_[static_cast<std::size_t>(u) + 1] - out_offsets_[static_cast<std::size_t>(u)];
    }

    bool valid_node(NodeId u) const { return u >= 0 && u < node_count(); }

private:
    std::vector<Institution> institutions_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offsets_; // CSR offsets over the sorted edge list
};

struct LoadedNetwork {
    HiringNetwork net;
    // Filled when the vertex file carries a third `pi` column of
    // precomputed prestige ranks.
    std::optional<std::vector<double>> preset_prestige;
};

// Vertex rows: `id<TAB>label[<TAB>pi]`. Edge rows: `src<TAB>dst[<TAB>count]`.
// Lines starting with '#' and blank lines are skipped. Throws load_error
// naming the offending line on malformed input.
LoadedNetwork load_network(std::istream& vertex_text, std::istream& edge_text,
                           const std::string& vertex_name = "<vertices>",
                           const std::string& edge_name = "<edges>");

// Nodes reachable from u along edge direction, including u. Sorted by id.
std::vector<NodeId> reachable_set(const HiringNetwork& net, NodeId u);

// BFS hop counts from u over the simple projection (parallel edges do not
// shorten paths); -1 where unreachable.
std::vector<int> geodesic_distances(const HiringNetwork& net, NodeId u);

// Mean shortest directed path length from u to every reachable node other
// than u itself. Absent when u reaches nothing else.
std::optional<double> mean_geodesic_length(const HiringNetwork& net, NodeId u);

struct SccResult {
    HiringNetwork net;                    // induced sub-network, ids remapped to 0..n-1
    std::vector<NodeId> original_ids;     // new id -> id in the parent network
};

// Largest strongly connected component; ties broken by the smallest
// contained original id. Edge multiplicity and self-loops are preserved.
SccResult largest_scc(const HiringNetwork& net);

// Nodes split into 10 prestige deciles: sort by (mean_rank, id) ascending,
// decile 0 is the most prestigious tenth. Returns decile index per node.
std::vector<int> prestige_deciles(std::span<const double> mean_rank);

using DecileMatrix = std::array<std::array<double, 10>, 10>;

// Density of edges between prestige deciles: cell (a, b) is the number of
// edges from decile a to decile b divided by |a|*|b| source-destination
// pairs. Requires at least 10 nodes.
DecileMatrix decile_density_matrix(const HiringNetwork& net, std::span<const double> mean_rank);

} // namespace hirenet
