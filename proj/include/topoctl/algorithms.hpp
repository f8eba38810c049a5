#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace topoctl {

/// What a node is allowed to know: its own identifier, its neighbors'
/// identifiers, and which of those neighbors are themselves neighbors.
/// Deliberately carries no coordinates, distances or directions; algorithms
/// taking only a LocalView are position-unaware by construction.
struct LocalView {
    std::uint32_t self = 0;
    std::vector<std::uint32_t> one_hop;  // sorted
    std::vector<Edge> two_hop_edges;     // sorted, endpoints within one_hop
};

struct ConnectionChoice {
    std::uint32_t initiator = 0;
    std::vector<std::uint32_t> targets;  // sorted

    friend bool operator==(const ConnectionChoice&, const ConnectionChoice&) = default;
};

inline void validate_view(const LocalView& view) {
    if (!std::is_sorted(view.one_hop.begin(), view.one_hop.end()) ||
        std::adjacent_find(view.one_hop.begin(), view.one_hop.end()) != view.one_hop.end())
        throw std::invalid_argument("LocalView: one_hop must be sorted and duplicate-free");
    if (std::binary_search(view.one_hop.begin(), view.one_hop.end(), view.self))
        throw std::invalid_argument("LocalView: node cannot be its own neighbor");
    for (const Edge& e : view.two_hop_edges) {
        if (e.a >= e.b) throw std::invalid_argument("LocalView: two-hop edge not normalized");
        if (!std::binary_search(view.one_hop.begin(), view.one_hop.end(), e.a) ||
            !std::binary_search(view.one_hop.begin(), view.one_hop.end(), e.b))
            throw std::invalid_argument("LocalView: two-hop edge endpoint outside one_hop");
    }
}

inline LocalView build_local_view(const Adjacency& adj, std::uint32_t node) {
    LocalView view;
    view.self = node;
    const auto nb = adj.neighbors(node);
    view.one_hop.assign(nb.begin(), nb.end());
    // Intersect each neighbor's list with one_hop; both are sorted.
    for (std::uint32_t a : view.one_hop) {
        const auto an = adj.neighbors(a);
        auto it = std::lower_bound(an.begin(), an.end(), a + 1);
        auto jt = std::upper_bound(view.one_hop.begin(), view.one_hop.end(), a);
        while (it != an.end() && jt != view.one_hop.end()) {
            if (*it < *jt) ++it;
            else if (*jt < *it) ++jt;
            else {
                view.two_hop_edges.push_back(Edge{a, *it});
                ++it;
                ++jt;
            }
        }
    }
    std::sort(view.two_hop_edges.begin(), view.two_hop_edges.end());
    return view;
}

namespace detail {

// Blocks of the lesser neighborhood under the view's two-hop edges, each
// block sorted; block list ordered by smallest member.
inline std::vector<std::vector<std::uint32_t>> lesser_blocks(const LocalView& view) {
    const auto split = std::lower_bound(view.one_hop.begin(), view.one_hop.end(), view.self);
    const std::span<const std::uint32_t> lesser(view.one_hop.data(),
                                                static_cast<std::size_t>(split - view.one_hop.begin()));
    const std::size_t m = lesser.size();
    std::vector<std::uint32_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::uint32_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    auto local = [&](std::uint32_t rank) {
        const auto it = std::lower_bound(lesser.begin(), lesser.end(), rank);
        return it != lesser.end() && *it == rank ? static_cast<std::uint32_t>(it - lesser.begin())
                                                 : std::uint32_t(m);
    };
    for (const Edge& e : view.two_hop_edges) {
        const std::uint32_t la = local(e.a);
        const std::uint32_t lb = local(e.b);
        if (la == m || lb == m) continue; // edge touches a greater neighbor
        parent[find(la)] = find(lb);
    }
    std::vector<std::vector<std::uint32_t>> blocks;
    std::vector<std::uint32_t> block_of(m, std::uint32_t(-1));
    for (std::uint32_t v = 0; v < m; ++v) {
        const std::uint32_t root = find(v);
        if (block_of[root] == std::uint32_t(-1)) {
            block_of[root] = static_cast<std::uint32_t>(blocks.size());
            blocks.emplace_back();
        }
        blocks[block_of[root]].push_back(lesser[v]);
    }
    return blocks; // members ascend within blocks; blocks ascend by first member
}

} // namespace detail

/// Connect to the largest id in each connected block of the lesser
/// neighborhood. Position-unaware; at most 5 targets under a plane disk model.
inline ConnectionChoice alg1_choice(const LocalView& view) {
    validate_view(view);
    ConnectionChoice choice;
    choice.initiator = view.self;
    for (const auto& block : detail::lesser_blocks(view)) choice.targets.push_back(block.back());
    std::sort(choice.targets.begin(), choice.targets.end());
    return choice;
}

/// Same as alg1_choice, then keeps adding neighbors until `min_degree`
/// connections are initiated or the neighborhood is exhausted: first the
/// remaining lesser neighbors, largest id first, then greater neighbors,
/// smallest id first.
inline ConnectionChoice alg2_choice(const LocalView& view, int min_degree) {
    if (min_degree < 1) throw std::invalid_argument("alg2_choice: min_degree must be >= 1");
    ConnectionChoice choice = alg1_choice(view);
    const auto split = std::lower_bound(view.one_hop.begin(), view.one_hop.end(), view.self);
    std::vector<std::uint32_t> lesser(view.one_hop.begin(), split);
    std::vector<std::uint32_t> greater(split, view.one_hop.end());
    auto chosen = [&](std::uint32_t v) {
        return std::find(choice.targets.begin(), choice.targets.end(), v) != choice.targets.end();
    };
    const std::size_t want = static_cast<std::size_t>(min_degree);
    while (choice.targets.size() < want && choice.targets.size() < lesser.size()) {
        for (auto it = lesser.rbegin(); it != lesser.rend(); ++it)
            if (!chosen(*it)) {
                choice.targets.push_back(*it);
                break;
            }
    }
    std::size_t next_greater = 0;
    while (choice.targets.size() < want && next_greater < greater.size())
        choice.targets.push_back(greater[next_greater++]); // ascending == min-first
    std::sort(choice.targets.begin(), choice.targets.end());
    return choice;
}

enum class VariantPick { MinId, MaxId };

/// Variant that connects to one member of each lesser block, chosen by the
/// injected selector. MaxId reproduces alg1_choice; MinId demonstrates the
/// unbounded-degree failure mode.
template <class Picker>
ConnectionChoice variant_choice(const LocalView& view, Picker&& pick) {
    validate_view(view);
    ConnectionChoice choice;
    choice.initiator = view.self;
    for (const auto& block : detail::lesser_blocks(view)) {
        const std::uint32_t chosen = pick(std::span<const std::uint32_t>(block));
        if (!std::binary_search(block.begin(), block.end(), chosen))
            throw std::invalid_argument("variant_choice: selector returned a non-member");
        choice.targets.push_back(chosen);
    }
    std::sort(choice.targets.begin(), choice.targets.end());
    return choice;
}

inline ConnectionChoice variant_choice(const LocalView& view, VariantPick pick) {
    if (pick == VariantPick::MinId)
        return variant_choice(view, [](std::span<const std::uint32_t> block) { return block.front(); });
    return variant_choice(view, [](std::span<const std::uint32_t> block) { return block.back(); });
}

// ---- Whole-network runs -----------------------------------------------------

namespace detail {

template <class ChoiceFn>
Topology run_choices(const Adjacency& adj, ChoiceFn&& choose) {
    std::vector<Edge> edges;
    for (std::uint32_t v = 0; v < adj.node_count(); ++v) {
        const ConnectionChoice c = choose(build_local_view(adj, v));
        for (std::uint32_t t : c.targets) edges.push_back(make_edge(v, t));
    }
    return Topology(adj.ids_ptr(), std::move(edges));
}

} // namespace detail

inline Topology run_alg1(const Adjacency& adj) {
    return detail::run_choices(adj, [](const LocalView& v) { return alg1_choice(v); });
}

inline Topology run_alg2(const Adjacency& adj, int min_degree) {
    return detail::run_choices(
        adj, [min_degree](const LocalView& v) { return alg2_choice(v, min_degree); });
}

inline Topology run_variant(const Adjacency& adj, VariantPick pick) {
    return detail::run_choices(adj, [pick](const LocalView& v) { return variant_choice(v, pick); });
}

inline Topology gilbert_topology(const Adjacency& adj) {
    return Topology(adj.ids_ptr(), adj.edge_list());
}

// ---- Position-aware baselines -----------------------------------------------

/// Distance-based elimination: an edge (u, v) is dropped iff some common
/// neighbor w is closer to both endpoints than they are to each other.
/// Distance ties are broken toward the smaller id, so the filter is a total
/// order and the result deterministic.
inline Topology xtc(const PointSet& points, const Adjacency& adj) {
    auto beats = [&](std::uint32_t w, std::uint32_t loser, std::uint32_t anchor) {
        const double dw = points.squared_distance(anchor, w);
        const double dl = points.squared_distance(anchor, loser);
        return dw < dl || (dw == dl && w < loser);
    };
    std::vector<Edge> kept;
    for (std::uint32_t u = 0; u < adj.node_count(); ++u) {
        const auto un = adj.neighbors(u);
        for (std::uint32_t v : un) {
            if (v < u) continue;
            const auto vn = adj.neighbors(v);
            bool dropped = false;
            auto it = un.begin();
            auto jt = vn.begin();
            while (it != un.end() && jt != vn.end() && !dropped) {
                if (*it < *jt) ++it;
                else if (*jt < *it) ++jt;
                else {
                    const std::uint32_t w = *it;
                    dropped = beats(w, v, u) && beats(w, u, v);
                    ++it;
                    ++jt;
                }
            }
            if (!dropped) kept.push_back(Edge{u, v});
        }
    }
    return Topology(adj.ids_ptr(), std::move(kept));
}

enum class KneighMode { Union, Intersection };

/// Each node nominates its k nearest neighbors (ties toward the smaller id);
/// union keeps an edge either endpoint nominated, intersection requires both.
inline Topology kneigh(const PointSet& points, const Adjacency& adj, int k,
                       KneighMode mode = KneighMode::Union) {
    if (k < 1) throw std::invalid_argument("kneigh: k must be >= 1");
    std::vector<Edge> nominations;
    std::vector<std::uint32_t> order;
    for (std::uint32_t u = 0; u < adj.node_count(); ++u) {
        const auto nb = adj.neighbors(u);
        order.assign(nb.begin(), nb.end());
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
        std::partial_sort(order.begin(), order.begin() + take, order.end(),
                          [&](std::uint32_t a, std::uint32_t b) {
                              const double da = points.squared_distance(u, a);
                              const double db = points.squared_distance(u, b);
                              return da < db || (da == db && a < b);
                          });
        for (std::size_t i = 0; i < take; ++i) nominations.push_back(make_edge(u, order[i]));
    }
    std::sort(nominations.begin(), nominations.end());
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < nominations.size();) {
        std::size_t j = i;
        while (j < nominations.size() && nominations[j] == nominations[i]) ++j;
        if (mode == KneighMode::Union || j - i == 2) edges.push_back(nominations[i]);
        i = j;
    }
    return Topology(adj.ids_ptr(), std::move(edges));
}

// ---- Algorithm selection by name ---------------------------------------------

/// Parsed form of the CLI algorithm strings:
///   alg1 | alg2:<delta> | variant:<min|max> | xtc | kneigh:<k>[:<union|intersection>] | gilbert
struct AlgorithmSpec {
    enum class Kind { Alg1, Alg2, Variant, Xtc, Kneigh, Gilbert };

    Kind kind = Kind::Alg1;
    int delta = 1;                          // alg2
    VariantPick pick = VariantPick::MinId;  // variant
    int k = 1;                              // kneigh
    KneighMode mode = KneighMode::Union;    // kneigh

    static AlgorithmSpec parse(const std::string& name) {
        auto fields = [&] {
            std::vector<std::string> out;
            std::size_t start = 0;
            for (;;) {
                const std::size_t colon = name.find(':', start);
                out.push_back(name.substr(start, colon - start));
                if (colon == std::string::npos) return out;
                start = colon + 1;
            }
        }();
        auto parse_int = [&](const std::string& s) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(s, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("unknown algorithm '" + name + "'");
            }
            if (used != s.size()) throw std::invalid_argument("unknown algorithm '" + name + "'");
            return v;
        };
        AlgorithmSpec spec;
        if (fields[0] == "alg1" && fields.size() == 1) {
            spec.kind = Kind::Alg1;
        } else if (fields[0] == "alg2" && fields.size() == 2) {
            spec.kind = Kind::Alg2;
            spec.delta = parse_int(fields[1]);
            if (spec.delta < 1) throw std::invalid_argument("alg2 delta must be >= 1");
        } else if (fields[0] == "variant" && fields.size() == 2 &&
                   (fields[1] == "min" || fields[1] == "max")) {
            spec.kind = Kind::Variant;
            spec.pick = fields[1] == "min" ? VariantPick::MinId : VariantPick::MaxId;
        } else if (fields[0] == "xtc" && fields.size() == 1) {
            spec.kind = Kind::Xtc;
        } else if (fields[0] == "kneigh" && (fields.size() == 2 || fields.size() == 3)) {
            spec.kind = Kind::Kneigh;
            spec.k = parse_int(fields[1]);
            if (spec.k < 1) throw std::invalid_argument("kneigh k must be >= 1");
            if (fields.size() == 3) {
                if (fields[2] == "union") spec.mode = KneighMode::Union;
                else if (fields[2] == "intersection") spec.mode = KneighMode::Intersection;
                else throw std::invalid_argument("unknown algorithm '" + name + "'");
            }
        } else if (fields[0] == "gilbert" && fields.size() == 1) {
            spec.kind = Kind::Gilbert;
        } else {
            throw std::invalid_argument("unknown algorithm '" + name + "'");
        }
        return spec;
    }

    std::string name() const {
        switch (kind) {
            case Kind::Alg1: return "alg1";
            case Kind::Alg2: return "alg2:" + std::to_string(delta);
            case Kind::Variant: return pick == VariantPick::MinId ? "variant:min" : "variant:max";
            case Kind::Xtc: return "xtc";
            case Kind::Kneigh:
                return "kneigh:" + std::to_string(k) +
                       (mode == KneighMode::Union ? ":union" : ":intersection");
            case Kind::Gilbert: return "gilbert";
        }
        return "?";
    }

    bool position_aware() const { return kind == Kind::Xtc || kind == Kind::Kneigh; }

    Topology run(const PointSet& points, const Adjacency& adj) const {
        switch (kind) {
            case Kind::Alg1: return run_alg1(adj);
            case Kind::Alg2: return run_alg2(adj, delta);
            case Kind::Variant: return run_variant(adj, pick);
            case Kind::Xtc: return xtc(points, adj);
            case Kind::Kneigh: return kneigh(points, adj, k, mode);
            case Kind::Gilbert: return gilbert_topology(adj);
        }
        throw std::logic_error("unreachable");
    }
};

} // namespace topoctl
