#pragma once

#include <topoctl/geometry.hpp>
#include <topoctl/graph.hpp>

#include <vector>

namespace fixtures {

// Ten nodes whose disk graph at range 1 has the structure used throughout
// the unit tests: node 6 sees lesser neighbors {1,2,3,4,5} splitting into
// the blocks {1,2,5} and {3,4}, node 7 sees exactly {1,3,5,6}, node 1 has no
// lesser neighbors, and nodes 8..10 hang off node 2 to keep the graph
// connected.
inline topoctl::PointSet ten_node_points() {
    using topoctl::NodeId;
    std::vector<topoctl::PointSet::Entry> entries{
        {NodeId::number(1), -0.65, 0.30},  {NodeId::number(2), -0.90, 0.10},
        {NodeId::number(3), 0.55, 0.45},   {NodeId::number(4), 0.95, 0.28},
        {NodeId::number(5), -0.60, -0.35}, {NodeId::number(6), 0.00, 0.00},
        {NodeId::number(7), 0.05, -0.32},  {NodeId::number(8), -1.85, 0.10},
        {NodeId::number(9), -2.50, -0.40}, {NodeId::number(10), -2.55, 0.65},
    };
    return topoctl::PointSet(std::move(entries));
}

inline topoctl::Adjacency ten_node_adjacency() {
    return topoctl::build_gilbert(ten_node_points(), topoctl::DiskModel(1.0));
}

} // namespace fixtures
