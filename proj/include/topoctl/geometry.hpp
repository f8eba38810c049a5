#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "node_id.hpp"

namespace topoctl {

/// Disk connectivity model: two nodes are neighbors iff their Euclidean
/// distance is at most `range` (closed disk, boundary included).
struct DiskModel {
    double range;

    explicit DiskModel(double r) : range(r) {
        if (!(std::isfinite(r) && r > 0.0))
            throw std::invalid_argument("DiskModel: range must be finite and > 0");
    }
};

/// Labelled plane points, sorted by id. Coincident points are allowed,
/// duplicate ids are not.
class PointSet {
public:
    struct Entry {
        NodeId id;
        double x;
        double y;
    };

    explicit PointSet(std::vector<Entry> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.id < b.id; });
        std::vector<NodeId> ids;
        ids.reserve(entries.size());
        xs_.reserve(entries.size());
        ys_.reserve(entries.size());
        for (auto& e : entries) {
            if (!ids.empty() && ids.back() == e.id)
                throw std::invalid_argument("PointSet: duplicate node id " + e.id.to_string());
            if (!std::isfinite(e.x) || !std::isfinite(e.y))
                throw std::invalid_argument("PointSet: non-finite coordinate at node " +
                                            e.id.to_string());
            ids.push_back(std::move(e.id));
            xs_.push_back(e.x);
            ys_.push_back(e.y);
        }
        ids_ = std::make_shared<const IdTable>(std::move(ids));
    }

    std::size_t size() const { return xs_.size(); }
    double x(std::uint32_t rank) const { return xs_[rank]; }
    double y(std::uint32_t rank) const { return ys_[rank]; }
    const NodeId& id(std::uint32_t rank) const { return (*ids_)[rank]; }
    const IdTable& ids() const { return *ids_; }
    const IdTablePtr& ids_ptr() const { return ids_; }

    // Adjacency decisions compare squared distances; no square roots, so the
    // closed-disk boundary test is exact for representable inputs.
    double squared_distance(std::uint32_t a, std::uint32_t b) const {
        const double dx = xs_[a] - xs_[b];
        const double dy = ys_[a] - ys_[b];
        return dx * dx + dy * dy;
    }

    double distance(std::uint32_t a, std::uint32_t b) const {
        return std::sqrt(squared_distance(a, b));
    }

private:
    IdTablePtr ids_;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

} // namespace topoctl
