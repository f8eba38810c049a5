#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace topoctl {

/// Node identifier: a natural number, or a byte string compared
/// lexicographically. Totally ordered; numeric ids sort before byte ids so
/// the order stays total even in mixed networks.
class NodeId {
public:
    static NodeId number(std::uint64_t value) { return NodeId(Rep(value)); }
    static NodeId bytes(std::string value) { return NodeId(Rep(std::move(value))); }

    bool is_number() const { return rep_.index() == 0; }
    std::uint64_t num() const { return std::get<0>(rep_); }
    const std::string& str() const { return std::get<1>(rep_); }

    friend bool operator==(const NodeId& a, const NodeId& b) { return a.rep_ == b.rep_; }
    friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
        if (a.rep_.index() != b.rep_.index())
            return a.rep_.index() <=> b.rep_.index();
        if (a.is_number())
            return a.num() <=> b.num();
        return a.str().compare(b.str()) <=> 0;
    }

    // Diagnostic rendering; byte ids are shown quoted.
    std::string to_string() const {
        return is_number() ? std::to_string(num()) : '"' + str() + '"';
    }

private:
    using Rep = std::variant<std::uint64_t, std::string>;
    explicit NodeId(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

/// Sorted, duplicate-free id universe. Shared (immutable) between the point
/// set, adjacency and any topologies derived from them; a node's "rank" is
/// its position here, so rank order coincides with id order.
class IdTable {
public:
    explicit IdTable(std::vector<NodeId> sorted_unique) : ids_(std::move(sorted_unique)) {
        for (std::size_t i = 1; i < ids_.size(); ++i)
            if (!(ids_[i - 1] < ids_[i]))
                throw std::invalid_argument("IdTable: ids must be strictly increasing, offender " +
                                            ids_[i].to_string());
    }

    std::size_t size() const { return ids_.size(); }
    const NodeId& operator[](std::size_t rank) const { return ids_[rank]; }
    const std::vector<NodeId>& all() const { return ids_; }

    std::optional<std::uint32_t> rank_of(const NodeId& id) const {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
        if (it == ids_.end() || *it != id) return std::nullopt;
        return static_cast<std::uint32_t>(it - ids_.begin());
    }

    std::uint32_t require_rank(const NodeId& id) const {
        auto r = rank_of(id);
        if (!r) throw std::out_of_range("unknown node id " + id.to_string());
        return *r;
    }

    bool all_numeric() const {
        return std::all_of(ids_.begin(), ids_.end(), [](const NodeId& id) { return id.is_number(); });
    }

    std::size_t max_byte_length() const {
        std::size_t len = 0;
        for (const auto& id : ids_)
            if (!id.is_number()) len = std::max(len, id.str().size());
        return len;
    }

private:
    std::vector<NodeId> ids_;
};

using IdTablePtr = std::shared_ptr<const IdTable>;

} // namespace topoctl
