#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "algorithms.hpp"
#include "graph.hpp"
#include "random.hpp"

namespace topoctl {

/// One broadcast. Round 1 announces the sender, round 2 its neighbor list,
/// round 3 the connection targets it picked.
struct RoundMessage {
    int round = 1;
    std::uint32_t sender = 0;
    std::vector<std::uint32_t> payload;
};

/// Fixed per-network id width in bits: ceil(log2 n) when every id is numeric,
/// otherwise 8 bits per byte of the longest byte id (mixed universes take the
/// larger of the two). Message cost = width x payload length, counted once
/// per broadcast on the sender side.
inline unsigned id_width_for(const IdTable& ids) {
    const unsigned numeric_width =
        ids.size() <= 1 ? 0u : static_cast<unsigned>(std::bit_width(ids.size() - 1));
    const unsigned byte_width = static_cast<unsigned>(8 * ids.max_byte_length());
    return ids.all_numeric() ? numeric_width : std::max(numeric_width, byte_width);
}

struct BitLedger {
    struct PerNode {
        std::uint64_t round1 = 0;
        std::uint64_t round2 = 0;
        std::uint64_t round3 = 0;

        std::uint64_t total() const { return round1 + round2 + round3; }
    };

    unsigned id_width = 0;
    std::vector<PerNode> per_node;

    PerNode totals() const {
        PerNode t;
        for (const auto& p : per_node) {
            t.round1 += p.round1;
            t.round2 += p.round2;
            t.round3 += p.round3;
        }
        return t;
    }
};

struct ProtocolResult {
    Topology topology;
    BitLedger ledger;
    std::vector<RoundMessage> transcript; // round-major, senders ascending
};

/// Runs the three-round protocol: hello, neighbor lists, chosen targets.
/// Each node's view is assembled strictly from the messages it received, so
/// equality with run_alg1 is a meaningful end-to-end check rather than a
/// tautology.
inline ProtocolResult simulate_protocol(const Adjacency& adj) {
    const std::size_t n = adj.node_count();
    const unsigned width = id_width_for(adj.ids());
    BitLedger ledger{width, std::vector<BitLedger::PerNode>(n)};
    std::vector<RoundMessage> transcript;
    transcript.reserve(3 * n);

    // Round 1: every node announces itself; receivers learn their neighbors.
    std::vector<std::vector<std::uint32_t>> heard(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        transcript.push_back({1, v, {v}});
        ledger.per_node[v].round1 = width;
        for (std::uint32_t w : adj.neighbors(v)) heard[w].push_back(v);
    }

    // Round 2: every node broadcasts the neighbor list it heard.
    std::vector<std::vector<std::uint32_t>> inbox2(n); // flattened (sender, |list|, list...)
    for (std::uint32_t v = 0; v < n; ++v) {
        transcript.push_back({2, v, heard[v]});
        ledger.per_node[v].round2 = width * static_cast<std::uint64_t>(heard[v].size());
        for (std::uint32_t w : adj.neighbors(v)) {
            inbox2[w].push_back(v);
            inbox2[w].push_back(static_cast<std::uint32_t>(heard[v].size()));
            inbox2[w].insert(inbox2[w].end(), heard[v].begin(), heard[v].end());
        }
    }

    // Offline step + round 3: every node runs the choice rule on the view it
    // assembled and broadcasts the outcome.
    std::vector<Edge> edges;
    for (std::uint32_t v = 0; v < n; ++v) {
        LocalView view;
        view.self = v;
        view.one_hop = heard[v];
        const auto& box = inbox2[v];
        for (std::size_t i = 0; i < box.size();) {
            const std::uint32_t sender = box[i++];
            const std::uint32_t len = box[i++];
            for (std::uint32_t k = 0; k < len; ++k) {
                const std::uint32_t other = box[i + k];
                if (other != v && sender < other &&
                    std::binary_search(view.one_hop.begin(), view.one_hop.end(), other))
                    view.two_hop_edges.push_back(Edge{sender, other});
            }
            i += len;
        }
        std::sort(view.two_hop_edges.begin(), view.two_hop_edges.end());
        view.two_hop_edges.erase(std::unique(view.two_hop_edges.begin(), view.two_hop_edges.end()),
                                 view.two_hop_edges.end());
        const ConnectionChoice choice = alg1_choice(view);
        transcript.push_back({3, v, choice.targets});
        ledger.per_node[v].round3 = width * static_cast<std::uint64_t>(choice.targets.size());
        for (std::uint32_t t : choice.targets) edges.push_back(make_edge(v, t));
    }
    std::sort(transcript.begin(), transcript.end(), [](const RoundMessage& a, const RoundMessage& b) {
        return a.round != b.round ? a.round < b.round : a.sender < b.sender;
    });
    return {Topology(adj.ids_ptr(), std::move(edges)), std::move(ledger), std::move(transcript)};
}

/// Ledger-only variant for bulk experiments; skips transcript materialization.
inline BitLedger protocol_bits(const Adjacency& adj) {
    const std::size_t n = adj.node_count();
    const unsigned width = id_width_for(adj.ids());
    BitLedger ledger{width, std::vector<BitLedger::PerNode>(n)};
    for (std::uint32_t v = 0; v < n; ++v) {
        const auto choice = alg1_choice(build_local_view(adj, v));
        ledger.per_node[v].round1 = width;
        ledger.per_node[v].round2 = width * static_cast<std::uint64_t>(adj.degree(v));
        ledger.per_node[v].round3 = width * static_cast<std::uint64_t>(choice.targets.size());
    }
    return ledger;
}

/// True iff every schedule (node ranks in execution order, repeats allowed,
/// every node at least once) reproduces the canonical run_alg1 edge set.
inline bool delivery_order_stress(const Adjacency& adj,
                                  std::span<const std::vector<std::uint32_t>> schedules) {
    const Topology reference = run_alg1(adj);
    for (const auto& schedule : schedules) {
        std::vector<Edge> edges;
        for (std::uint32_t v : schedule) {
            const auto choice = alg1_choice(build_local_view(adj, v));
            for (std::uint32_t t : choice.targets) edges.push_back(make_edge(v, t));
        }
        if (!(Topology(adj.ids_ptr(), std::move(edges)) == reference)) return false;
    }
    return true;
}

struct ComplexityRow {
    std::size_t n = 0;
    double radius = 0.0;
    unsigned id_width = 0;
    double mean_round1_bits = 0.0;
    double mean_round2_bits = 0.0;
    double mean_round3_bits = 0.0;
    double mean_total_bits = 0.0;
};

/// Mean per-node protocol cost across random placements. By default the
/// radius follows the connectivity-threshold scaling
/// pi R^2 = (log n + log log n) / n; passing `density` N instead fixes
/// pi R^2 = N / n.
inline std::vector<ComplexityRow> complexity_profile(std::span<const std::size_t> n_values,
                                                     std::size_t trials, std::uint64_t seed,
                                                     std::optional<double> density = std::nullopt) {
    if (trials == 0) throw std::invalid_argument("complexity_profile: trials must be >= 1");
    std::vector<ComplexityRow> rows;
    for (std::size_t rowi = 0; rowi < n_values.size(); ++rowi) {
        const std::size_t n = n_values[rowi];
        const double pi = 3.14159265358979323846;
        const double area = density ? *density / static_cast<double>(n)
                                    : (std::log(static_cast<double>(n)) +
                                       std::log(std::log(static_cast<double>(n)))) /
                                          static_cast<double>(n);
        ComplexityRow row;
        row.n = n;
        row.radius = std::sqrt(area / pi);
        const DiskModel model(row.radius);
        double r1 = 0, r2 = 0, r3 = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto points = generate_uniform_points(n, derive_seed(seed, rowi * 1000003 + t));
            const auto adj = build_gilbert(points, model);
            const BitLedger ledger = protocol_bits(adj);
            row.id_width = ledger.id_width;
            const auto totals = ledger.totals();
            r1 += static_cast<double>(totals.round1);
            r2 += static_cast<double>(totals.round2);
            r3 += static_cast<double>(totals.round3);
        }
        const double scale = static_cast<double>(trials) * static_cast<double>(n);
        row.mean_round1_bits = r1 / scale;
        row.mean_round2_bits = r2 / scale;
        row.mean_round3_bits = r3 / scale;
        row.mean_total_bits = (r1 + r2 + r3) / scale;
        rows.push_back(row);
    }
    return rows;
}

/// One JSON object per line: {"round":r,"sender":id,"payload":[ids]}.
inline void write_transcript_jsonl(std::ostream& out, const ProtocolResult& result,
                                   const IdTable& ids) {
    auto id_json = [&](std::uint32_t rank) -> nlohmann::json {
        const NodeId& id = ids[rank];
        if (id.is_number()) return id.num();
        return id.str();
    };
    for (const RoundMessage& msg : result.transcript) {
        nlohmann::ordered_json line;
        line["round"] = msg.round;
        line["sender"] = id_json(msg.sender);
        auto payload = nlohmann::json::array();
        for (std::uint32_t p : msg.payload) payload.push_back(id_json(p));
        line["payload"] = std::move(payload);
        out << line.dump() << '\n';
    }
}

} // namespace topoctl
