#pragma once

// Independent reference implementations used to cross-check the library.
// These deliberately avoid the library's data structures and algorithms:
// adjacency via a dense distance matrix, connectivity via boolean matrix
// closure, components via union-find, path costs via exhaustive enumeration.

#include <topoctl/geometry.hpp>
#include <topoctl/graph.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracles {

using topoctl::NodeId;
using topoctl::PointSet;

// Neighbor sets by brute-force pairwise distance comparison.
inline std::map<std::uint32_t, std::set<std::uint32_t>> brute_adjacency(const PointSet& points,
                                                                        double range) {
    std::map<std::uint32_t, std::set<std::uint32_t>> nbrs;
    const std::size_t n = points.size();
    for (std::uint32_t i = 0; i < n; ++i) {
        nbrs[i];
        for (std::uint32_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dx = points.x(i) - points.x(j);
            const double dy = points.y(i) - points.y(j);
            if (dx * dx + dy * dy <= range * range) nbrs[i].insert(j);
        }
    }
    return nbrs;
}

// Reachability by boolean matrix closure (repeated squaring of I | A).
inline bool closure_connected(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    if (n <= 1) return true;
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (const auto& [a, b] : edges) {
        reach[a][b] = true;
        reach[b][a] = true;
    }
    for (std::size_t round = 1; round < n; round *= 2) {
        std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (reach[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (reach[k][j]) next[i][j] = true;
        reach = std::move(next);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!reach[i][j]) return false;
    return true;
}

// Components of the subgraph induced by `subset`, via union-find.
inline std::vector<std::vector<std::uint32_t>> union_find_components(
    const std::vector<std::uint32_t>& subset,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    std::map<std::uint32_t, std::uint32_t> parent;
    for (std::uint32_t v : subset) parent[v] = v;
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (const auto& [a, b] : edges)
        if (parent.count(a) && parent.count(b)) parent[find(a)] = find(b);
    std::map<std::uint32_t, std::vector<std::uint32_t>> groups;
    for (std::uint32_t v : subset) groups[find(v)].push_back(v);
    std::vector<std::vector<std::uint32_t>> blocks;
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end());
        blocks.push_back(members);
    }
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

// Minimum path cost by exhaustive enumeration of simple paths.
inline double enumerate_path_cost(const PointSet& points,
                                  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                  std::uint32_t from, std::uint32_t to, double alpha) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::uint32_t>> nbrs(n);
    for (const auto& [a, b] : edges) {
        nbrs[a].push_back(b);
        nbrs[b].push_back(a);
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> used(n, false);
    std::function<void(std::uint32_t, double)> dfs = [&](std::uint32_t v, double cost) {
        if (v == to) {
            best = std::min(best, cost);
            return;
        }
        used[v] = true;
        for (std::uint32_t w : nbrs[v])
            if (!used[w]) dfs(w, cost + std::pow(points.distance(v, w), alpha));
        used[v] = false;
    };
    dfs(from, 0.0);
    return best;
}

} // namespace oracles
