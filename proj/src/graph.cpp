#include "hirenet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <istream>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "hirenet/errors.hpp"

namespace hirenet {

HiringNetwork::HiringNetwork(std::vector<Institution> institutions, std::vector<Edge> edges)
    : institutions_(std::move(institutions)), edges_(std::move(edges)) {
    const auto n = static_cast<std::size_t>(institutions_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (institutions_[i].id != static_cast<NodeId>(i))
            throw std::invalid_argument("institution ids must be dense 0..N-1 and sorted");
        if (institutions_[i].label.empty())
            throw std::invalid_argument("institution labels must be non-empty");
    }
    for (const Edge& e : edges_) {
        if (e.src < 0 || e.dst < 0 || static_cast<std::size_t>(e.src) >= n ||
            static_cast<std::size_t>(e.dst) >= n)
            throw std::invalid_argument("edge endpoint out of range");
    }
    // Canonical order: results downstream must not depend on input order.
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
    out_offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) ++out_offsets_[static_cast<std::size_t>(e.src) + 1];
    std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
}

namespace {

std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

std::vector<std::string_view> split_tabs(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '\t') {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

template <typename T>
T parse_number(std::string_view field, const std::string& file, std::size_t line, const char* what) {
    T value{};
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw load_error(file, line, std::string("malformed ") + what + " '" + std::string(field) + "'");
    return value;
}

double parse_real(std::string_view field, const std::string& file, std::size_t line, const char* what) {
    // std::from_chars<double> is used where available; fall back through stod
    // for toolchains without FP from_chars.
    try {
        std::size_t pos = 0;
        const std::string text(field);
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw load_error(file, line, std::string("malformed ") + what + " '" + std::string(field) + "'");
    }
}

} // namespace

LoadedNetwork load_network(std::istream& vertex_text, std::istream& edge_text,
                           const std::string& vertex_name, const std::string& edge_name) {
    struct Row {
        NodeId id;
        std::string label;
        std::optional<double> pi;
    };
    std::vector<Row> rows;
    std::unordered_set<std::string> labels_seen;
    std::string line;
    std::size_t lineno = 0;
    bool any_pi = false;
    while (std::getline(vertex_text, line)) {
        ++lineno;
        const auto text = strip(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_tabs(text);
        if (fields.size() != 2 && fields.size() != 3)
            throw load_error(vertex_name, lineno, "expected id<TAB>label[<TAB>pi]");
        Row row;
        row.id = parse_number<NodeId>(fields[0], vertex_name, lineno, "vertex id");
        row.label = std::string(strip(fields[1]));
        if (row.label.empty()) throw load_error(vertex_name, lineno, "empty label");
        if (!labels_seen.insert(row.label).second)
            throw load_error(vertex_name, lineno, "duplicate label '" + row.label + "'");
        if (fields.size() == 3) {
            row.pi = parse_real(fields[2], vertex_name, lineno, "prestige value");
            any_pi = true;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw load_error(vertex_name, lineno, "no vertices");

    const auto n = rows.size();
    std::vector<Institution> institutions(n);
    std::vector<char> seen(n, 0);
    std::vector<double> prestige(n, 0.0);
    for (const Row& row : rows) {
        if (row.id < 0 || static_cast<std::size_t>(row.id) >= n)
            throw load_error(vertex_name, 0, "vertex ids must be dense 0.." + std::to_string(n - 1) +
                                                 "; got " + std::to_string(row.id));
        if (seen[static_cast<std::size_t>(row.id)])
            throw load_error(vertex_name, 0, "duplicate vertex id " + std::to_string(row.id));
        seen[static_cast<std::size_t>(row.id)] = 1;
        institutions[static_cast<std::size_t>(row.id)] = {row.id, row.label};
        if (any_pi) {
            if (!row.pi)
                throw load_error(vertex_name, 0, "prestige column present on some rows but missing for id " +
                                                     std::to_string(row.id));
            prestige[static_cast<std::size_t>(row.id)] = *row.pi;
        }
    }

    std::vector<Edge> edges;
    lineno = 0;
    while (std::getline(edge_text, line)) {
        ++lineno;
        const auto text = strip(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_tabs(text);
        if (fields.size() != 2 && fields.size() != 3)
            throw load_error(edge_name, lineno, "expected src<TAB>dst[<TAB>count]");
        const NodeId src = parse_number<NodeId>(fields[0], edge_name, lineno, "edge source");
        const NodeId dst = parse_number<NodeId>(fields[1], edge_name, lineno, "edge destination");
        if (src < 0 || static_cast<std::size_t>(src) >= n)
            throw load_error(edge_name, lineno, "unknown source id " + std::to_string(src));
        if (dst < 0 || static_cast<std::size_t>(dst) >= n)
            throw load_error(edge_name, lineno, "unknown destination id " + std::to_string(dst));
        long long count = 1;
        if (fields.size() == 3) count = parse_number<long long>(fields[2], edge_name, lineno, "edge count");
        if (count <= 0) throw load_error(edge_name, lineno, "edge count must be positive");
        for (long long c = 0; c < count; ++c) edges.push_back({src, dst});
    }

    LoadedNetwork result{HiringNetwork(std::move(institutions), std::move(edges)), std::nullopt};
    if (any_pi) result.preset_prestige = std::move(prestige);
    return result;
}

namespace {

void require_valid(const HiringNetwork& net, NodeId u) {
    if (!net.valid_node(u)) throw std::invalid_argument("invalid node id " + std::to_string(u));
}

} // namespace

std::vector<NodeId> reachable_set(const HiringNetwork& net, NodeId u) {
    require_valid(net, u);
    std::vector<char> visited(static_cast<std::size_t>(net.node_count()), 0);
    std::vector<NodeId> stack{u};
    visited[static_cast<std::size_t>(u)] = 1;
    while (!stack.empty()) {
        const NodeId x = stack.back();
        stack.pop_back();
        for (const Edge& e : net.out_edges(x)) {
            if (!visited[static_cast<std::size_t>(e.dst)]) {
                visited[static_cast<std::size_t>(e.dst)] = 1;
                stack.push_back(e.dst);
            }
        }
    }
    std::vector<NodeId> out;
    for (NodeId v = 0; v < net.node_count(); ++v)
        if (visited[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

std::vector<int> geodesic_distances(const HiringNetwork& net, NodeId u) {
    require_valid(net, u);
    std::vector<int> dist(static_cast<std::size_t>(net.node_count()), -1);
    std::deque<NodeId> queue;
    dist[static_cast<std::size_t>(u)] = 0;
    queue.push_back(u);
    while (!queue.empty()) {
        const NodeId x = queue.front();
        queue.pop_front();
        for (const Edge& e : net.out_edges(x)) {
            auto& d = dist[static_cast<std::size_t>(e.dst)];
            if (d < 0) {
                d = dist[static_cast<std::size_t>(x)] + 1;
                queue.push_back(e.dst);
            }
        }
    }
    return dist;
}

std::optional<double> mean_geodesic_length(const HiringNetwork& net, NodeId u) {
    const auto dist = geodesic_distances(net, u);
    long long total = 0;
    long long reached = 0;
    for (NodeId v = 0; v < net.node_count(); ++v) {
        if (v == u) continue;
        const int d = dist[static_cast<std::size_t>(v)];
        if (d >= 0) {
            total += d;
            ++reached;
        }
    }
    if (reached == 0) return std::nullopt;
    return static_cast<double>(total) / static_cast<double>(reached);
}

namespace {

// Iterative Tarjan; returns component index per node.
std::vector<int> scc_components(const HiringNetwork& net, int& component_count) {
    const auto n = static_cast<std::size_t>(net.node_count());
    std::vector<int> index(n, -1), lowlink(n, 0), component(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeId> stack;
    struct Frame {
        NodeId node;
        std::size_t next_edge;
    };
    std::vector<Frame> call;
    int next_index = 0;
    component_count = 0;

    for (NodeId root = 0; root < net.node_count(); ++root) {
        if (index[static_cast<std::size_t>(root)] >= 0) continue;
        call.push_back({root, net.out_offset(root)});
        index[static_cast<std::size_t>(root)] = lowlink[static_cast<std::size_t>(root)] = next_index++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;
        while (!call.empty()) {
            Frame& frame = call.back();
            const auto u = static_cast<std::size_t>(frame.node);
            const std::size_t end = net.out_offset(frame.node) + net.out_degree(frame.node);
            if (frame.next_edge < end) {
                const NodeId w = net.edges()[frame.next_edge].dst;
                ++frame.next_edge;
                const auto wi = static_cast<std::size_t>(w);
                if (index[wi] < 0) {
                    index[wi] = lowlink[wi] = next_index++;
                    stack.push_back(w);
                    on_stack[wi] = 1;
                    call.push_back({w, net.out_offset(w)});
                } else if (on_stack[wi]) {
                    lowlink[u] = std::min(lowlink[u], index[wi]);
                }
            } else {
                if (lowlink[u] == index[u]) {
                    while (true) {
                        const NodeId w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        component[static_cast<std::size_t>(w)] = component_count;
                        if (w == frame.node) break;
                    }
                    ++component_count;
                }
                call.pop_back();
                if (!call.empty()) {
                    const auto parent = static_cast<std::size_t>(call.back().node);
                    lowlink[parent] = std::min(lowlink[parent], lowlink[u]);
                }
            }
        }
    }
    return component;
}

} // namespace

SccResult largest_scc(const HiringNetwork& net) {
    int count = 0;
    const auto component = scc_components(net, count);
    std::vector<std::size_t> size(static_cast<std::size_t>(count), 0);
    std::vector<NodeId> smallest(static_cast<std::size_t>(count), net.node_count());
    for (NodeId v = 0; v < net.node_count(); ++v) {
        const auto c = static_cast<std::size_t>(component[static_cast<std::size_t>(v)]);
        ++size[c];
        smallest[c] = std::min(smallest[c], v);
    }
    int best = 0;
    for (int c = 1; c < count; ++c) {
        const auto cc = static_cast<std::size_t>(c);
        const auto bb = static_cast<std::size_t>(best);
        if (size[cc] > size[bb] || (size[cc] == size[bb] && smallest[cc] < smallest[bb])) best = c;
    }

    std::vector<NodeId> original_ids;
    std::vector<NodeId> remap(static_cast<std::size_t>(net.node_count()), -1);
    for (NodeId v = 0; v < net.node_count(); ++v) {
        if (component[static_cast<std::size_t>(v)] == best) {
            remap[static_cast<std::size_t>(v)] = static_cast<NodeId>(original_ids.size());
            original_ids.push_back(v);
        }
    }
    std::vector<Institution> institutions;
    institutions.reserve(original_ids.size());
    for (std::size_t i = 0; i < original_ids.size(); ++i)
        institutions.push_back({static_cast<NodeId>(i), net.label(original_ids[i])});
    std::vector<Edge> edges;
    for (const Edge& e : net.edges()) {
        const NodeId s = remap[static_cast<std::size_t>(e.src)];
        const NodeId d = remap[static_cast<std::size_t>(e.dst)];
        if (s >= 0 && d >= 0) edges.push_back({s, d});
    }
    return {HiringNetwork(std::move(institutions), std::move(edges)), std::move(original_ids)};
}

std::vector<int> prestige_deciles(std::span<const double> mean_rank) {
    const std::size_t n = mean_rank.size();
    if (n < 10) throw std::invalid_argument("deciles undefined for fewer than 10 nodes");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(mean_rank[a], a) < std::tie(mean_rank[b], b);
    });
    std::vector<int> decile(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos)
        decile[order[pos]] = static_cast<int>(pos * 10 / n);
    return decile;
}

DecileMatrix decile_density_matrix(const HiringNetwork& net, std::span<const double> mean_rank) {
    if (mean_rank.size() != static_cast<std::size_t>(net.node_count()))
        throw std::invalid_argument("prestige scores must cover all nodes");
    const auto decile = prestige_deciles(mean_rank);
    std::array<double, 10> members{};
    for (int d : decile) members[static_cast<std::size_t>(d)] += 1.0;
    DecileMatrix counts{};
    for (const Edge& e : net.edges())
        counts[static_cast<std::size_t>(decile[static_cast<std::size_t>(e.src)])]
              [static_cast<std::size_t>(decile[static_cast<std::size_t>(e.dst)])] += 1.0;
    DecileMatrix density{};
    for (std::size_t a = 0; a < 10; ++a)
        for (std::size_t b = 0; b < 10; ++b)
            density[a][b] = counts[a][b] / (members[a] * members[b]);
    return density;
}

} // namespace hirenet
