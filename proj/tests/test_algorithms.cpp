#include <catch2/catch_amalgamated.hpp>

#include <topoctl/algorithms.hpp>
#include <topoctl/experiments.hpp>
#include <topoctl/random.hpp>

#include "fixtures.hpp"

using namespace topoctl;

namespace {

std::vector<NodeId> ids_of(const Adjacency& adj, const std::vector<std::uint32_t>& ranks) {
    std::vector<NodeId> out;
    for (std::uint32_t r : ranks) out.push_back(adj.ids()[r]);
    return out;
}

std::vector<NodeId> num_ids(std::initializer_list<std::uint64_t> values) {
    std::vector<NodeId> out;
    for (auto v : values) out.push_back(NodeId::number(v));
    return out;
}

} // namespace

TEST_CASE("alg1_choice reproduces the worked ten-node example") {
    const auto adj = fixtures::ten_node_adjacency();

    // node 6: lesser blocks {1,2,5} and {3,4} -> connect to 5 and 4
    const auto c6 = alg1_choice(build_local_view(adj, *adj.ids().rank_of(NodeId::number(6))));
    CHECK(ids_of(adj, c6.targets) == num_ids({4, 5}));

    // node 1 has no lesser neighbors
    const auto c1 = alg1_choice(build_local_view(adj, 0));
    CHECK(c1.targets.empty());

    // node 2 connects to node 1
    const auto c2 = alg1_choice(build_local_view(adj, 1));
    CHECK(ids_of(adj, c2.targets) == num_ids({1}));
}

TEST_CASE("alg1_choice rejects inconsistent views") {
    LocalView bad;
    bad.self = 3;
    bad.one_hop = {1, 3, 5}; // contains self
    CHECK_THROWS_AS(alg1_choice(bad), std::invalid_argument);

    LocalView bad2;
    bad2.self = 3;
    bad2.one_hop = {1, 2};
    bad2.two_hop_edges = {Edge{1, 4}}; // endpoint outside one_hop
    CHECK_THROWS_AS(alg1_choice(bad2), std::invalid_argument);

    LocalView bad3;
    bad3.self = 3;
    bad3.one_hop = {2, 1}; // unsorted
    CHECK_THROWS_AS(alg1_choice(bad3), std::invalid_argument);
}

TEST_CASE("run_alg1 on a complete instance gives the line topology") {
    const auto points = construct_complete_instance(40, 0.5);
    const auto adj = build_gilbert(points, DiskModel(1.0));
    REQUIRE(adj.edge_count() == 40 * 39 / 2);
    const auto topo = run_alg1(adj);
    REQUIRE(topo.edge_count() == 39);
    for (std::uint32_t i = 0; i + 1 < 40; ++i) CHECK(topo.edges()[i] == Edge{i, i + 1});
}

TEST_CASE("run_alg1 degree-10 witness instance") {
    const auto points = construct_degree10_instance(2.5);
    const auto adj = build_gilbert(points, DiskModel(2.5));
    // the center (id 6) is in range of all ten ring nodes
    CHECK(adj.degree(*adj.ids().rank_of(NodeId::number(6))) == 10);
    const auto topo = run_alg1(adj);
    CHECK(degree_sequence(topo).at(NodeId::number(6)) == 10);
    CHECK(topo.edge_count() <= 5 * 11);
    CHECK(is_connected(topo));
}

TEST_CASE("run_alg1 trivial sizes") {
    const auto one = Adjacency::from_id_edges({NodeId::number(1)}, {});
    CHECK(run_alg1(one).edge_count() == 0);
}

TEST_CASE("alg2_choice: delta=1 behavior and exhaustion cases") {
    const auto adj = fixtures::ten_node_adjacency();
    for (std::uint32_t v = 0; v < adj.node_count(); ++v) {
        const auto view = build_local_view(adj, v);
        const auto base = alg1_choice(view);
        const auto c = alg2_choice(view, 1);
        if (!base.targets.empty() || greater_ranks(adj, v).empty()) {
            CHECK(c == base);
        } else {
            // a node with no lesser neighbors tops up from its smallest
            // greater neighbor; the union of choices is still the same edge
            // set (checked below and at run level)
            CHECK(c.targets == std::vector<std::uint32_t>{greater_ranks(adj, v).front()});
            const auto other = alg1_choice(build_local_view(adj, c.targets.front()));
            CHECK(std::binary_search(other.targets.begin(), other.targets.end(), v));
        }
    }

    LocalView isolated;
    isolated.self = 7;
    CHECK(alg2_choice(isolated, 3).targets.empty());

    CHECK_THROWS_AS(alg2_choice(isolated, 0), std::invalid_argument);
}

TEST_CASE("alg2_choice walks lesser then greater neighbors") {
    // one lesser block {1,2,3}, one greater neighbor 9
    const auto adj = Adjacency::from_id_edges(
        num_ids({1, 2, 3, 5, 9}),
        {{NodeId::number(1), NodeId::number(5)},
         {NodeId::number(2), NodeId::number(5)},
         {NodeId::number(3), NodeId::number(5)},
         {NodeId::number(5), NodeId::number(9)},
         {NodeId::number(1), NodeId::number(2)},
         {NodeId::number(2), NodeId::number(3)}});
    const std::uint32_t self = *adj.ids().rank_of(NodeId::number(5));
    const auto view = build_local_view(adj, self);

    CHECK(ids_of(adj, alg1_choice(view).targets) == num_ids({3}));
    // delta 2: add max of remaining lesser = 2
    CHECK(ids_of(adj, alg2_choice(view, 2).targets) == num_ids({2, 3}));
    // delta 3: lesser suffices, greater untouched
    CHECK(ids_of(adj, alg2_choice(view, 3).targets) == num_ids({1, 2, 3}));
    // delta 4: lesser exhausted, min greater joins
    CHECK(ids_of(adj, alg2_choice(view, 4).targets) == num_ids({1, 2, 3, 9}));
    // delta beyond the whole neighborhood: both loops exhaust
    CHECK(ids_of(adj, alg2_choice(view, 10).targets) == num_ids({1, 2, 3, 9}));
}

TEST_CASE("run_alg2 bounds on random connected instances") {
    std::size_t tested = 0;
    for (std::uint64_t seed = 0; tested < 12; ++seed) {
        const auto points = generate_uniform_points(120, 6000 + seed);
        const auto adj = build_gilbert(points, DiskModel(radius_for_density(16, 120)));
        if (!is_connected(adj)) continue;
        ++tested;
        const auto alg1_topo = run_alg1(adj);
        for (int delta : {1, 2, 3}) {
            const auto topo = run_alg2(adj, delta);
            CHECK(is_connected(topo));
            CHECK(is_spanning_subgraph(topo, adj));
            const std::size_t cap = static_cast<std::size_t>(std::max(delta, 5));
            CHECK(topo.edge_count() <= cap * adj.node_count());
            const auto deg = degrees_by_rank(topo);
            for (std::uint32_t v = 0; v < adj.node_count(); ++v) {
                const auto d_i = static_cast<std::uint32_t>(adj.degree(v));
                CHECK(deg[v] >= std::min<std::uint32_t>(d_i, static_cast<std::uint32_t>(delta)));
                CHECK(deg[v] <= cap + 10 * static_cast<std::size_t>(delta));
            }
            if (delta == 1) CHECK(topo == alg1_topo);
        }
    }
}

TEST_CASE("run_alg2 meets the minimum-degree target when feasible") {
    std::size_t found = 0;
    for (std::uint64_t seed = 100; found < 5; ++seed) {
        const auto points = generate_uniform_points(200, seed);
        const auto adj = build_gilbert(points, DiskModel(radius_for_density(25, 200)));
        bool min2 = true;
        for (std::uint32_t v = 0; v < adj.node_count(); ++v) min2 &= adj.degree(v) >= 2;
        if (!min2 || !is_connected(adj)) continue;
        ++found;
        const auto deg = degrees_by_rank(run_alg2(adj, 2));
        for (std::uint32_t v = 0; v < adj.node_count(); ++v) CHECK(deg[v] >= 2);
    }
}

TEST_CASE("variant choices: selector injection and degree blow-up") {
    const auto adj = fixtures::ten_node_adjacency();
    const std::uint32_t r6 = *adj.ids().rank_of(NodeId::number(6));
    const auto view = build_local_view(adj, r6);

    CHECK(ids_of(adj, variant_choice(view, VariantPick::MinId).targets) == num_ids({1, 3}));
    CHECK(variant_choice(view, VariantPick::MaxId) == alg1_choice(view));

    // custom selector must return a member of the block
    CHECK_THROWS_AS(variant_choice(view, [](std::span<const std::uint32_t>) { return 42u; }),
                    std::invalid_argument);

    const auto complete = build_gilbert(construct_complete_instance(30, 0.4), DiskModel(1.0));
    const auto star = run_variant(complete, VariantPick::MinId);
    CHECK(degree_sequence(star).at(NodeId::number(1)) == 29);
    CHECK(is_connected(star));
    CHECK(star.edge_count() <= 5 * 30);
    CHECK(run_variant(complete, VariantPick::MaxId) == run_alg1(complete));
}

TEST_CASE("xtc: tiny cases fix the rule") {
    // two nodes in range: no witness exists, edge kept
    const PointSet two({{NodeId::number(1), 0, 0}, {NodeId::number(2), 0.4, 0}});
    const auto adj2 = build_gilbert(two, DiskModel(1.0));
    CHECK(xtc(two, adj2).edge_count() == 1);

    // equilateral triangle: this height makes all three squared distances
    // come out as exactly 0.25, so only the id tie-break decides. Hand
    // evaluation: (2,3) falls to witness 1; (1,3) survives because 2 < 3 but
    // not 2 < 1; (1,2) survives because 3 beats nobody.
    const double h = 0.43301270189221935;
    const PointSet tri({{NodeId::number(1), 0, 0},
                        {NodeId::number(2), 0.5, 0},
                        {NodeId::number(3), 0.25, h}});
    REQUIRE(tri.squared_distance(0, 1) == tri.squared_distance(0, 2));
    REQUIRE(tri.squared_distance(0, 1) == tri.squared_distance(1, 2));
    const auto adj3 = build_gilbert(tri, DiskModel(1.0));
    REQUIRE(adj3.edge_count() == 3);
    const auto kept = xtc(tri, adj3);
    REQUIRE(kept.edge_count() == 2);
    CHECK(kept.edges()[0] == Edge{0, 1});
    CHECK(kept.edges()[1] == Edge{0, 2});

    // a slightly perturbed triangle still loses exactly one edge
    const PointSet tri2({{NodeId::number(1), 0, 0},
                         {NodeId::number(2), 0.5, 0},
                         {NodeId::number(3), 0.25, std::sqrt(3.0) / 2.0 * 0.5}});
    CHECK(xtc(tri2, build_gilbert(tri2, DiskModel(1.0))).edge_count() == 2);
}

TEST_CASE("xtc preserves the component partition on random instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto points = generate_uniform_points(150, 7700 + seed);
        const auto adj = build_gilbert(points, DiskModel(radius_for_density(14, 150)));
        const auto topo = xtc(points, adj);
        CHECK(is_spanning_subgraph(topo, adj));
        CHECK(connected_components(topo) == connected_components(adj));
        CHECK(topo.edge_count() <= adj.edge_count());
    }
}

TEST_CASE("kneigh: nomination counts, modes, and errors") {
    const auto points = generate_uniform_points(100, 55);
    const auto adj = build_gilbert(points, DiskModel(radius_for_density(12, 100)));
    CHECK_THROWS_AS(kneigh(points, adj, 0), std::invalid_argument);

    // k larger than any degree keeps the whole Gilbert graph in both modes
    const auto all_union = kneigh(points, adj, 1000, KneighMode::Union);
    const auto all_inter = kneigh(points, adj, 1000, KneighMode::Intersection);
    CHECK(all_union == gilbert_topology(adj));
    CHECK(all_inter == gilbert_topology(adj));

    const auto u6 = kneigh(points, adj, 6, KneighMode::Union);
    const auto i6 = kneigh(points, adj, 6, KneighMode::Intersection);
    CHECK(is_spanning_subgraph(u6, adj));
    CHECK(is_spanning_subgraph(i6, adj));
    // intersection edges are a subset of union edges
    for (const Edge& e : i6.edges())
        CHECK(std::binary_search(u6.edges().begin(), u6.edges().end(), e));
    // every node nominates at most k edges, so unions stay sparse
    CHECK(u6.edge_count() <= 6 * adj.node_count());
}

TEST_CASE("kneigh nominates everything when degree <= k") {
    const auto adj = fixtures::ten_node_adjacency();
    const auto points = fixtures::ten_node_points();
    const auto topo = kneigh(points, adj, 6, KneighMode::Union);
    CHECK(topo == gilbert_topology(adj)); // max degree in the fixture is 6
}

TEST_CASE("worst-case guarantees on random geometric instances") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 30 + (seed % 4) * 57;
        const double density = 4 + static_cast<double>(seed % 5) * 7;
        const auto points = generate_uniform_points(n, 31000 + seed);
        const auto adj = build_gilbert(points, DiskModel(radius_for_density(density, n)));

        std::vector<Edge> union_edges;
        for (std::uint32_t v = 0; v < n; ++v) {
            const auto view = build_local_view(adj, v);
            const auto choice = alg1_choice(view);
            CHECK(choice.targets.size() <= 5); // at most 5 initiated connections
            // chosen targets are pairwise non-adjacent
            for (std::size_t i = 0; i < choice.targets.size(); ++i)
                for (std::size_t j = i + 1; j < choice.targets.size(); ++j)
                    CHECK_FALSE(adj.adjacent(choice.targets[i], choice.targets[j]));
            for (std::uint32_t t : choice.targets) union_edges.push_back(make_edge(v, t));
        }
        const Topology topo(adj.ids_ptr(), std::move(union_edges));
        CHECK(topo == run_alg1(adj));
        CHECK(is_spanning_subgraph(topo, adj));
        CHECK(topo.edge_count() <= 5 * n);
        CHECK(max_degree(topo) <= 10);
        // component partition is preserved exactly, connected or not
        CHECK(connected_components(topo) == connected_components(adj));
        // a connected spanning output cannot drop below the tree bound
        if (is_connected(adj)) CHECK(topo.edge_count() >= n - 1);
    }
}

TEST_CASE("choices are invariant under order-preserving id relabeling") {
    const auto points = generate_uniform_points(40, 321);
    const auto adj = build_gilbert(points, DiskModel(0.25));

    // relabel ids 1..40 to zero-padded byte strings (same total order)
    std::vector<PointSet::Entry> relabeled;
    for (std::uint32_t v = 0; v < points.size(); ++v) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "n%03u", v + 1);
        relabeled.push_back({NodeId::bytes(buf), points.x(v), points.y(v)});
    }
    const PointSet bytes_points{std::move(relabeled)};
    const auto bytes_adj = build_gilbert(bytes_points, DiskModel(0.25));

    const auto t1 = run_alg1(adj);
    const auto t2 = run_alg1(bytes_adj);
    REQUIRE(t1.edge_count() == t2.edge_count());
    for (std::size_t i = 0; i < t1.edge_count(); ++i) {
        CHECK(t1.edges()[i].a == t2.edges()[i].a); // ranks coincide under the order isomorphism
        CHECK(t1.edges()[i].b == t2.edges()[i].b);
    }
}

TEST_CASE("AlgorithmSpec parses and round-trips names") {
    CHECK(AlgorithmSpec::parse("alg1").kind == AlgorithmSpec::Kind::Alg1);
    CHECK(AlgorithmSpec::parse("alg2:3").delta == 3);
    CHECK(AlgorithmSpec::parse("variant:min").pick == VariantPick::MinId);
    CHECK(AlgorithmSpec::parse("variant:max").pick == VariantPick::MaxId);
    CHECK(AlgorithmSpec::parse("kneigh:6").mode == KneighMode::Union);
    CHECK(AlgorithmSpec::parse("kneigh:5:intersection").mode == KneighMode::Intersection);
    CHECK(AlgorithmSpec::parse("gilbert").kind == AlgorithmSpec::Kind::Gilbert);
    for (const char* name : {"alg1", "alg2:2", "variant:min", "variant:max", "xtc",
                             "kneigh:6:union", "kneigh:5:intersection", "gilbert"})
        CHECK(AlgorithmSpec::parse(name).name() == name);
    for (const char* bad : {"", "alg3", "alg2", "alg2:0", "alg2:x", "variant", "variant:med",
                            "kneigh", "kneigh:0", "kneigh:6:both", "gilbert:1"})
        CHECK_THROWS_AS(AlgorithmSpec::parse(bad), std::invalid_argument);
}
