#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "graph.hpp"
#include "random.hpp"

namespace topoctl {

/// Empirical probability mass function over degrees; masses sum to 1.
struct DegreePmf {
    std::map<std::uint32_t, double> mass;

    double at(std::uint32_t degree) const {
        const auto it = mass.find(degree);
        return it == mass.end() ? 0.0 : it->second;
    }

    double mean() const {
        double m = 0.0;
        for (const auto& [d, p] : mass) m += d * p;
        return m;
    }

    std::uint32_t max_support() const { return mass.empty() ? 0 : mass.rbegin()->first; }

    static DegreePmf from_counts(const std::map<std::uint32_t, std::uint64_t>& counts) {
        std::uint64_t total = 0;
        for (const auto& [d, c] : counts) total += c;
        if (total == 0) throw std::invalid_argument("DegreePmf: no observations");
        DegreePmf pmf;
        for (const auto& [d, c] : counts)
            if (c > 0) pmf.mass[d] = static_cast<double>(c) / static_cast<double>(total);
        return pmf;
    }
};

/// Empirical CDF over finite samples, with the infinite samples kept out of
/// the curve as a terminal deficiency: cum tops out at 1 - inf_mass.
struct EmpiricalCdf {
    std::vector<double> values; // ascending, distinct
    std::vector<double> cum;    // parallel to values
    double inf_mass = 0.0;
    std::uint64_t sample_count = 0;

    static EmpiricalCdf from_samples(std::vector<double> finite, std::uint64_t inf_count = 0) {
        EmpiricalCdf cdf;
        cdf.sample_count = finite.size() + inf_count;
        if (cdf.sample_count == 0) throw std::invalid_argument("EmpiricalCdf: no samples");
        std::sort(finite.begin(), finite.end());
        const double total = static_cast<double>(cdf.sample_count);
        std::uint64_t seen = 0;
        for (std::size_t i = 0; i < finite.size();) {
            std::size_t j = i;
            while (j < finite.size() && finite[j] == finite[i]) ++j;
            seen += j - i;
            cdf.values.push_back(finite[i]);
            cdf.cum.push_back(static_cast<double>(seen) / total);
            i = j;
        }
        cdf.inf_mass = static_cast<double>(inf_count) / total;
        return cdf;
    }

    /// P(X <= t), infinite samples never counted.
    double eval(double t) const {
        const auto it = std::upper_bound(values.begin(), values.end(), t);
        return it == values.begin() ? 0.0 : cum[static_cast<std::size_t>(it - values.begin()) - 1];
    }

    /// Smallest observed value v with P(X <= v) >= q.
    double quantile(double q) const {
        if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0,1]");
        const auto it = std::lower_bound(cum.begin(), cum.end(), q);
        if (it == cum.end()) return kInfiniteCost;
        return values[static_cast<std::size_t>(it - cum.begin())];
    }
};

// ---- Stretch factors ---------------------------------------------------------

namespace detail {

// Ratio of subgraph cost to Gilbert cost for one pair, given per-source
// distance arrays. Returns +inf when only the subgraph disconnects the pair.
inline double stretch_ratio(double cost_topo, double cost_gilbert) {
    if (cost_gilbert == 0.0) return cost_topo == 0.0 ? 1.0 : kInfiniteCost;
    return cost_topo / cost_gilbert;
}

} // namespace detail

/// Stretch of one pair: path cost in the topology over path cost in the
/// Gilbert graph. Pairs the Gilbert graph itself cannot connect have no
/// defined stretch and are rejected.
inline double stretch_factor(const PointSet& points, const Adjacency& gilbert, const Topology& topo,
                             const NodeId& i, const NodeId& j, double alpha) {
    const double cg = path_cost(points, gilbert, i, j, alpha);
    if (cg == kInfiniteCost)
        throw std::invalid_argument("undefined stretch: nodes " + i.to_string() + " and " +
                                    j.to_string() + " are not path-connected in the Gilbert graph");
    return detail::stretch_ratio(path_cost(points, topo, i, j, alpha), cg);
}

/// Pair selection for stretch sampling: every pair, or m independent uniform
/// draws from {(i,j) : i < j} (with replacement).
struct PairSample {
    enum class Kind { All, Random };
    Kind kind = Kind::All;
    std::size_t count = 0;
    std::uint64_t seed = 0;

    static PairSample all() { return {Kind::All, 0, 0}; }
    static PairSample random(std::size_t m, std::uint64_t seed) {
        return {Kind::Random, m, seed};
    }
};

/// Stretch samples for one instance; one entry per sampled pair that the
/// Gilbert graph connects (others have no defined ratio and are skipped).
struct StretchSamples {
    std::vector<double> finite;
    std::uint64_t infinite = 0;
    std::uint64_t undefined = 0; // sampled pairs skipped as Gilbert-disconnected
};

inline StretchSamples collect_stretch_samples(const PointSet& points, const Adjacency& gilbert,
                                              const Topology& topo, double alpha,
                                              const PairSample& sample) {
    const std::size_t n = gilbert.node_count();
    if (n < 2) throw std::invalid_argument("stretch: need at least two nodes");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    if (sample.kind == PairSample::Kind::All) {
        pairs.reserve(n * (n - 1) / 2);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    } else {
        Rng rng(sample.seed);
        pairs.reserve(sample.count);
        for (std::size_t k = 0; k < sample.count; ++k)
            pairs.push_back(rng.pair_below(static_cast<std::uint32_t>(n)));
    }
    std::sort(pairs.begin(), pairs.end());

    const CompactGraph gg = CompactGraph::from(gilbert);
    const CompactGraph gt = CompactGraph::from(topo);
    StretchSamples out;
    out.finite.reserve(pairs.size());
    constexpr std::uint32_t unreachable = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> hops_g, hops_t;
    std::vector<double> cost_g, cost_t;
    for (std::size_t k = 0; k < pairs.size();) {
        const std::uint32_t src = pairs[k].first;
        if (alpha == 0.0) {
            hops_g = hop_distances_from(gg, src);
            hops_t = hop_distances_from(gt, src);
        } else {
            cost_g = path_costs_from(gg, points, src, alpha);
            cost_t = path_costs_from(gt, points, src, alpha);
        }
        for (; k < pairs.size() && pairs[k].first == src; ++k) {
            const std::uint32_t dst = pairs[k].second;
            double cg, ct;
            if (alpha == 0.0) {
                cg = hops_g[dst] == unreachable ? kInfiniteCost : static_cast<double>(hops_g[dst]);
                ct = hops_t[dst] == unreachable ? kInfiniteCost : static_cast<double>(hops_t[dst]);
            } else {
                cg = cost_g[dst];
                ct = cost_t[dst];
            }
            if (cg == kInfiniteCost) {
                ++out.undefined;
            } else if (ct == kInfiniteCost) {
                ++out.infinite;
            } else {
                out.finite.push_back(detail::stretch_ratio(ct, cg));
            }
        }
    }
    return out;
}

inline EmpiricalCdf stretch_cdf(const PointSet& points, const Adjacency& gilbert,
                                const Topology& topo, double alpha, const PairSample& sample) {
    auto samples = collect_stretch_samples(points, gilbert, topo, alpha, sample);
    return EmpiricalCdf::from_samples(std::move(samples.finite), samples.infinite);
}

// ---- Degree statistics over trial collections ---------------------------------

/// PMF of the degree of a uniformly chosen node across all trials.
inline DegreePmf degree_pmf(std::span<const Topology> topologies) {
    if (topologies.empty()) throw std::invalid_argument("degree_pmf: empty trial list");
    std::map<std::uint32_t, std::uint64_t> counts;
    for (const Topology& t : topologies)
        for (std::uint32_t d : degrees_by_rank(t)) ++counts[d];
    return DegreePmf::from_counts(counts);
}

/// PMF of the maximum degree of a trial.
inline DegreePmf max_degree_pmf(std::span<const Topology> topologies) {
    if (topologies.empty()) throw std::invalid_argument("max_degree_pmf: empty trial list");
    std::map<std::uint32_t, std::uint64_t> counts;
    for (const Topology& t : topologies) ++counts[max_degree(t)];
    return DegreePmf::from_counts(counts);
}

/// Per-rank degree statistics across trials (all trials must share n).
struct PerIndexDegree {
    std::vector<double> mean;       // by rank
    std::vector<DegreePmf> pmf;     // by rank
};

inline PerIndexDegree per_index_degree(std::span<const Topology> topologies) {
    if (topologies.empty()) throw std::invalid_argument("per_index_degree: empty trial list");
    const std::size_t n = topologies.front().node_count();
    std::vector<std::map<std::uint32_t, std::uint64_t>> counts(n);
    for (const Topology& t : topologies) {
        if (t.node_count() != n)
            throw std::invalid_argument("per_index_degree: trials disagree on node count");
        const auto deg = degrees_by_rank(t);
        for (std::size_t v = 0; v < n; ++v) ++counts[v][deg[v]];
    }
    PerIndexDegree out;
    out.mean.resize(n);
    out.pmf.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        out.pmf.push_back(DegreePmf::from_counts(counts[v]));
        out.mean[v] = out.pmf.back().mean();
    }
    return out;
}

// ---- Connectivity threshold reference -----------------------------------------

/// Asymptotic probability that a uniform random disk graph is connected:
/// with alpha = pi n R^2 - log n, the limit is exp(-exp(-alpha)).
inline double penrose_prediction(std::size_t n, double R) {
    const double pi = 3.14159265358979323846;
    const double a = pi * static_cast<double>(n) * R * R - std::log(static_cast<double>(n));
    return std::exp(-std::exp(-a));
}

} // namespace topoctl
