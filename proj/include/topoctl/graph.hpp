#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "node_id.hpp"

namespace topoctl {

/// Undirected edge between node ranks, stored with a < b.
struct Edge {
    std::uint32_t a;
    std::uint32_t b;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(std::uint32_t u, std::uint32_t v) {
    if (u == v) throw std::invalid_argument("make_edge: self-loop");
    return u < v ? Edge{u, v} : Edge{v, u};
}

/// Partition of a vertex subset into disjoint blocks. Blocks are internally
/// sorted and listed by smallest member, so the block index is deterministic.
struct Partition {
    std::vector<std::vector<std::uint32_t>> blocks;

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Symmetric, irreflexive neighbor lists over a shared id universe.
/// Neighbor lists are sorted by rank, which is also id order.
class Adjacency {
public:
    static Adjacency from_points(const PointSet& points, const DiskModel& model) {
        const std::size_t n = points.size();
        Adjacency adj;
        adj.ids_ = points.ids_ptr();
        adj.nbrs_.resize(n);
        const double r2 = model.range * model.range;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j)
                if (points.squared_distance(i, j) <= r2) {
                    adj.nbrs_[i].push_back(j);
                    adj.nbrs_[j].push_back(i);
                }
        adj.edge_count_ = 0;
        for (const auto& l : adj.nbrs_) adj.edge_count_ += l.size();
        adj.edge_count_ /= 2;
        return adj;
    }

    static Adjacency from_edges(IdTablePtr ids, std::vector<Edge> edges) {
        Adjacency adj;
        const std::size_t n = ids->size();
        adj.ids_ = std::move(ids);
        adj.nbrs_.resize(n);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (const Edge& e : edges) {
            if (e.a >= e.b || e.b >= n)
                throw std::invalid_argument("Adjacency::from_edges: edge out of range");
            adj.nbrs_[e.a].push_back(e.b);
            adj.nbrs_[e.b].push_back(e.a);
        }
        for (auto& l : adj.nbrs_) std::sort(l.begin(), l.end());
        adj.edge_count_ = edges.size();
        return adj;
    }

    // Convenience for hand-built instances and file input.
    static Adjacency from_id_edges(std::vector<NodeId> nodes,
                                   const std::vector<std::pair<NodeId, NodeId>>& edges) {
        std::sort(nodes.begin(), nodes.end());
        auto table = std::make_shared<const IdTable>(std::move(nodes));
        std::vector<Edge> ranked;
        ranked.reserve(edges.size());
        for (const auto& [u, v] : edges)
            ranked.push_back(make_edge(table->require_rank(u), table->require_rank(v)));
        return from_edges(std::move(table), std::move(ranked));
    }

    std::size_t node_count() const { return nbrs_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    const IdTable& ids() const { return *ids_; }
    const IdTablePtr& ids_ptr() const { return ids_; }

    std::span<const std::uint32_t> neighbors(std::uint32_t rank) const {
        if (rank >= nbrs_.size()) throw std::out_of_range("Adjacency: rank out of range");
        return nbrs_[rank];
    }

    std::size_t degree(std::uint32_t rank) const { return neighbors(rank).size(); }

    bool adjacent(std::uint32_t u, std::uint32_t v) const {
        const auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    std::vector<Edge> edge_list() const {
        std::vector<Edge> edges;
        edges.reserve(edge_count_);
        for (std::uint32_t i = 0; i < nbrs_.size(); ++i)
            for (std::uint32_t j : nbrs_[i])
                if (i < j) edges.push_back(Edge{i, j});
        return edges;
    }

private:
    IdTablePtr ids_;
    std::vector<std::vector<std::uint32_t>> nbrs_;
    std::size_t edge_count_ = 0;
};

/// Spanning subgraph candidate: a simple undirected edge set over the same
/// node universe as the adjacency it was derived from.
class Topology {
public:
    Topology(IdTablePtr ids, std::vector<Edge> edges) : ids_(std::move(ids)) {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (const Edge& e : edges)
            if (e.a >= e.b || e.b >= ids_->size())
                throw std::invalid_argument("Topology: edge out of range");
        edges_ = std::move(edges);
    }

    std::size_t node_count() const { return ids_->size(); }
    std::span<const Edge> edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }
    const IdTable& ids() const { return *ids_; }
    const IdTablePtr& ids_ptr() const { return ids_; }

    friend bool operator==(const Topology& a, const Topology& b) {
        return a.ids_->size() == b.ids_->size() && a.edges_ == b.edges_;
    }

private:
    IdTablePtr ids_;
    std::vector<Edge> edges_;
};

inline bool is_spanning_subgraph(const Topology& topo, const Adjacency& adj) {
    if (topo.node_count() != adj.node_count()) return false;
    for (const Edge& e : topo.edges())
        if (!adj.adjacent(e.a, e.b)) return false;
    return true;
}

/// Flat adjacency-array view used by the traversal routines; buildable from
/// either an Adjacency or a Topology.
struct CompactGraph {
    std::vector<std::uint32_t> offsets; // size n+1
    std::vector<std::uint32_t> targets;

    std::size_t node_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }

    std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
        return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
    }

    static CompactGraph from(const Adjacency& adj) {
        CompactGraph g;
        const std::size_t n = adj.node_count();
        g.offsets.resize(n + 1, 0);
        for (std::uint32_t v = 0; v < n; ++v) g.offsets[v + 1] = g.offsets[v] + adj.degree(v);
        g.targets.resize(g.offsets.back());
        std::size_t k = 0;
        for (std::uint32_t v = 0; v < n; ++v)
            for (std::uint32_t w : adj.neighbors(v)) g.targets[k++] = w;
        return g;
    }

    static CompactGraph from(const Topology& topo) {
        CompactGraph g;
        const std::size_t n = topo.node_count();
        g.offsets.assign(n + 1, 0);
        for (const Edge& e : topo.edges()) {
            ++g.offsets[e.a + 1];
            ++g.offsets[e.b + 1];
        }
        for (std::size_t v = 0; v < n; ++v) g.offsets[v + 1] += g.offsets[v];
        g.targets.resize(g.offsets.back());
        std::vector<std::uint32_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
        for (const Edge& e : topo.edges()) {
            g.targets[cursor[e.a]++] = e.b;
            g.targets[cursor[e.b]++] = e.a;
        }
        for (std::uint32_t v = 0; v < n; ++v)
            std::sort(g.targets.begin() + g.offsets[v], g.targets.begin() + g.offsets[v + 1]);
        return g;
    }
};

// ---- Neighborhood queries -------------------------------------------------

/// Neighbors of `rank` with smaller rank. Neighbor lists are sorted, so this
/// is a prefix of the list.
inline std::span<const std::uint32_t> lesser_ranks(const Adjacency& adj, std::uint32_t rank) {
    const auto nb = adj.neighbors(rank);
    const auto split = std::lower_bound(nb.begin(), nb.end(), rank);
    return nb.subspan(0, static_cast<std::size_t>(split - nb.begin()));
}

inline std::span<const std::uint32_t> greater_ranks(const Adjacency& adj, std::uint32_t rank) {
    const auto nb = adj.neighbors(rank);
    const auto split = std::upper_bound(nb.begin(), nb.end(), rank);
    return nb.subspan(static_cast<std::size_t>(split - nb.begin()));
}

inline std::vector<NodeId> lesser_neighborhood(const Adjacency& adj, const NodeId& id) {
    const std::uint32_t rank = adj.ids().require_rank(id);
    std::vector<NodeId> out;
    for (std::uint32_t r : lesser_ranks(adj, rank)) out.push_back(adj.ids()[r]);
    return out;
}

inline std::vector<NodeId> greater_neighborhood(const Adjacency& adj, const NodeId& id) {
    const std::uint32_t rank = adj.ids().require_rank(id);
    std::vector<NodeId> out;
    for (std::uint32_t r : greater_ranks(adj, rank)) out.push_back(adj.ids()[r]);
    return out;
}

// ---- Components -----------------------------------------------------------

namespace detail {

// BFS over an arbitrary neighbor callback restricted to `members` (dense flag
// array indexed by rank). Appends each discovered block, sorted.
template <class NeighborsOf>
Partition components_impl(std::span<const std::uint32_t> seeds, std::vector<char>& member,
                          NeighborsOf&& neighbors_of) {
    Partition part;
    std::vector<std::uint32_t> queue;
    for (std::uint32_t seed : seeds) {
        if (!member[seed]) continue;
        member[seed] = 0;
        queue.assign(1, seed);
        std::vector<std::uint32_t> block;
        while (!queue.empty()) {
            const std::uint32_t u = queue.back();
            queue.pop_back();
            block.push_back(u);
            for (std::uint32_t w : neighbors_of(u))
                if (w < member.size() && member[w]) {
                    member[w] = 0;
                    queue.push_back(w);
                }
        }
        std::sort(block.begin(), block.end());
        part.blocks.push_back(std::move(block));
    }
    // seeds are scanned in ascending order, so blocks are already ordered by
    // their minimum member.
    return part;
}

} // namespace detail

/// Connected components of the subgraph induced by `subset` (ranks, any
/// order, no duplicates). Blocks come out sorted by smallest member.
inline Partition induced_components(const Adjacency& adj, std::span<const std::uint32_t> subset) {
    std::vector<char> member(adj.node_count(), 0);
    std::vector<std::uint32_t> seeds(subset.begin(), subset.end());
    std::sort(seeds.begin(), seeds.end());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (i > 0 && seeds[i] == seeds[i - 1])
            throw std::invalid_argument("induced_components: duplicate member");
        if (seeds[i] >= adj.node_count())
            throw std::invalid_argument("induced_components: member not in adjacency");
        member[seeds[i]] = 1;
    }
    return detail::components_impl(seeds, member, [&](std::uint32_t u) { return adj.neighbors(u); });
}

inline Partition induced_components(const Adjacency& adj, const std::vector<NodeId>& subset) {
    std::vector<std::uint32_t> ranks;
    ranks.reserve(subset.size());
    for (const NodeId& id : subset) ranks.push_back(adj.ids().require_rank(id));
    return induced_components(adj, std::span<const std::uint32_t>(ranks));
}

inline Partition connected_components(const CompactGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<char> member(n, 1);
    std::vector<std::uint32_t> seeds(n);
    for (std::uint32_t v = 0; v < n; ++v) seeds[v] = v;
    return detail::components_impl(seeds, member, [&](std::uint32_t u) { return g.neighbors(u); });
}

inline Partition connected_components(const Adjacency& adj) {
    const std::size_t n = adj.node_count();
    std::vector<char> member(n, 1);
    std::vector<std::uint32_t> seeds(n);
    for (std::uint32_t v = 0; v < n; ++v) seeds[v] = v;
    return detail::components_impl(seeds, member, [&](std::uint32_t u) { return adj.neighbors(u); });
}

inline Partition connected_components(const Topology& topo) {
    return connected_components(CompactGraph::from(topo));
}

// A graph with no vertices is connected by convention; so is a single node.
inline bool is_connected(const Adjacency& adj) {
    return connected_components(adj).blocks.size() <= 1;
}

inline bool is_connected(const Topology& topo) {
    return connected_components(topo).blocks.size() <= 1;
}

// ---- Degrees ----------------------------------------------------------------

inline std::vector<std::uint32_t> degrees_by_rank(const Topology& topo) {
    std::vector<std::uint32_t> deg(topo.node_count(), 0);
    for (const Edge& e : topo.edges()) {
        ++deg[e.a];
        ++deg[e.b];
    }
    return deg;
}

inline std::map<NodeId, std::uint32_t> degree_sequence(const Topology& topo) {
    const auto deg = degrees_by_rank(topo);
    std::map<NodeId, std::uint32_t> out;
    for (std::uint32_t v = 0; v < deg.size(); ++v) out.emplace(topo.ids()[v], deg[v]);
    return out;
}

inline std::uint32_t max_degree(const Topology& topo) {
    const auto deg = degrees_by_rank(topo);
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

// ---- Weighted shortest paths ------------------------------------------------

constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

/// Hop distances from `source`; unreachable nodes get UINT32_MAX.
inline std::vector<std::uint32_t> hop_distances_from(const CompactGraph& g, std::uint32_t source) {
    constexpr std::uint32_t unreachable = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> dist(g.node_count(), unreachable);
    std::vector<std::uint32_t> frontier{source};
    dist[source] = 0;
    std::vector<std::uint32_t> next;
    std::uint32_t level = 0;
    while (!frontier.empty()) {
        ++level;
        next.clear();
        for (std::uint32_t u : frontier)
            for (std::uint32_t w : g.neighbors(u))
                if (dist[w] == unreachable) {
                    dist[w] = level;
                    next.push_back(w);
                }
        frontier.swap(next);
    }
    return dist;
}

/// Dijkstra with edge weight |x_u - x_v|^alpha. alpha = 0 gives hop counts.
inline std::vector<double> path_costs_from(const CompactGraph& g, const PointSet& points,
                                           std::uint32_t source, double alpha) {
    std::vector<double> dist(g.node_count(), kInfiniteCost);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (std::uint32_t w : g.neighbors(u)) {
            // pow(0, 0) == 1, so zero-length edges still count one hop at alpha = 0.
            const double cand = d + std::pow(points.distance(u, w), alpha);
            if (cand < dist[w]) {
                dist[w] = cand;
                heap.emplace(cand, w);
            }
        }
    }
    return dist;
}

namespace detail {

inline double path_cost_ranked(const CompactGraph& g, const PointSet& points, std::uint32_t i,
                               std::uint32_t j, double alpha) {
    if (i == j) throw std::invalid_argument("path_cost: endpoints must be distinct");
    if (!(alpha >= 0.0)) throw std::invalid_argument("path_cost: alpha must be >= 0");
    if (alpha == 0.0) {
        const auto hops = hop_distances_from(g, i);
        return hops[j] == std::numeric_limits<std::uint32_t>::max() ? kInfiniteCost
                                                                    : static_cast<double>(hops[j]);
    }
    return path_costs_from(g, points, i, alpha)[j];
}

} // namespace detail

inline double path_cost(const PointSet& points, const Adjacency& adj, const NodeId& i,
                        const NodeId& j, double alpha) {
    return detail::path_cost_ranked(CompactGraph::from(adj), points, adj.ids().require_rank(i),
                                    adj.ids().require_rank(j), alpha);
}

inline double path_cost(const PointSet& points, const Topology& topo, const NodeId& i,
                        const NodeId& j, double alpha) {
    return detail::path_cost_ranked(CompactGraph::from(topo), points, topo.ids().require_rank(i),
                                    topo.ids().require_rank(j), alpha);
}

/// Gilbert graph: every pair within the communication range is linked.
inline Adjacency build_gilbert(const PointSet& points, const DiskModel& model) {
    return Adjacency::from_points(points, model);
}

} // namespace topoctl
