#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "algorithms.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "protocol.hpp"
#include "random.hpp"

namespace topoctl {

inline constexpr double kPi = 3.14159265358979323846;

/// Communication radius for node density N on the unit square: pi R^2 = N/n.
inline double radius_for_density(double density, std::size_t n) {
    if (!(density > 0.0)) throw std::invalid_argument("density must be > 0");
    return std::sqrt(density / (kPi * static_cast<double>(n)));
}

// ---- Adversarial instances -----------------------------------------------------

/// Eleven nodes: node 6 at the origin, ten ring nodes at angle 2*pi*i/5.
/// Lesser ring ids {1..5} and greater ring ids {7..11} are each pairwise out
/// of range, while every ring node sits in range of the center, so the run
/// produces a star with degree 10 at node 6. The ring radius is backed off by
/// 1e-9 relative: cos/sin rounding must not push a ring node outside the
/// closed disk around the center.
inline PointSet construct_degree10_instance(double R) {
    const DiskModel model(R); // validates R
    const double ring = R * (1.0 - 1e-9);
    std::vector<PointSet::Entry> entries;
    for (std::size_t i = 1; i <= 11; ++i) {
        if (i == 6) {
            entries.push_back({NodeId::number(6), 0.0, 0.0});
        } else {
            const double angle = 2.0 * kPi * static_cast<double>(i) / 5.0;
            entries.push_back({NodeId::number(i), ring * std::cos(angle), ring * std::sin(angle)});
        }
    }
    return PointSet(std::move(entries));
}

/// n distinct points packed inside a disk of radius epsilon*R/2, so the
/// Gilbert graph at range R is complete. Laid out on a golden-angle spiral;
/// no randomness involved.
inline PointSet construct_complete_instance(std::size_t n, double epsilon, double R = 1.0) {
    if (n == 0) throw std::invalid_argument("construct_complete_instance: n must be >= 1");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("construct_complete_instance: epsilon must be in (0, 1]");
    const DiskModel model(R);
    const double golden_angle = 2.39996322972865332;
    std::vector<PointSet::Entry> entries;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = 0.5 * epsilon * R *
                         std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(n));
        const double a = golden_angle * static_cast<double>(k);
        entries.push_back({NodeId::number(k + 1), r * std::cos(a), r * std::sin(a)});
    }
    return PointSet(std::move(entries));
}

// ---- Configuration ----------------------------------------------------------

struct ExperimentConfig {
    std::size_t n = 1000;
    std::vector<double> densities{10.0, 20.0, 30.0};
    std::vector<std::string> algorithms{"alg1"};
    std::size_t trials = 5000;         // connectivity/degree statistics
    std::size_t stretch_trials = 1000; // stretch CDFs (first trials of the run)
    std::vector<double> alphas;        // stretch exponents; empty disables stretch
    std::size_t pair_samples = 10000;  // sampled pairs per stretch trial
    std::uint64_t seed = 0;
    bool has_seed = false;

    void validate() const {
        if (n < 1) throw std::invalid_argument("config: n must be >= 1");
        if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
        if (densities.empty()) throw std::invalid_argument("config: densities must be non-empty");
        for (double d : densities)
            if (!(d > 0.0)) throw std::invalid_argument("config: densities must be positive");
        if (algorithms.empty()) throw std::invalid_argument("config: algorithms must be non-empty");
        for (const auto& a : algorithms) AlgorithmSpec::parse(a);
        for (double a : alphas)
            if (!(a >= 0.0)) throw std::invalid_argument("config: alphas must be >= 0");
        if (!alphas.empty() && pair_samples < 1)
            throw std::invalid_argument("config: pair_samples must be >= 1");
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        static const std::vector<std::string> known{"n",       "densities",    "algorithms",
                                                    "trials",  "stretch_trials", "alphas",
                                                    "pair_samples", "seed"};
        for (auto it = j.begin(); it != j.end(); ++it)
            if (std::find(known.begin(), known.end(), it.key()) == known.end())
                throw std::invalid_argument("config: unknown key '" + it.key() + "'");
        ExperimentConfig c;
        if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
        if (j.contains("densities")) c.densities = j.at("densities").get<std::vector<double>>();
        if (j.contains("algorithms"))
            c.algorithms = j.at("algorithms").get<std::vector<std::string>>();
        if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
        if (j.contains("stretch_trials")) c.stretch_trials = j.at("stretch_trials").get<std::size_t>();
        if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
        if (j.contains("pair_samples")) c.pair_samples = j.at("pair_samples").get<std::size_t>();
        if (j.contains("seed")) {
            c.seed = j.at("seed").get<std::uint64_t>();
            c.has_seed = true;
        }
        c.validate();
        return c;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["n"] = n;
        j["densities"] = densities;
        j["algorithms"] = algorithms;
        j["trials"] = trials;
        j["stretch_trials"] = stretch_trials;
        j["alphas"] = alphas;
        j["pair_samples"] = pair_samples;
        j["seed"] = seed;
        return j;
    }
};

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return derive_seed(master_seed, trial_index);
}

// ---- Per-trial results --------------------------------------------------------

/// Stretch ratios accumulated on a dyadic grid (step 2^-12, floored), exact
/// at integer thresholds for hop ratios since no hop ratio can land strictly
/// between k and k + 2^-12 at the network sizes in use.
struct StretchCounts {
    std::map<std::int64_t, std::uint64_t> grid;
    std::uint64_t infinite = 0;
    std::uint64_t undefined = 0;
    std::uint64_t finite = 0;

    static constexpr double kStep = 0x1.0p-12;

    static std::int64_t key_for(double ratio) {
        return static_cast<std::int64_t>(std::floor(ratio / kStep));
    }

    void add_ratio(double ratio) {
        ++grid[key_for(ratio)];
        ++finite;
    }

    void merge(const StretchCounts& other) {
        for (const auto& [k, c] : other.grid) grid[k] += c;
        infinite += other.infinite;
        undefined += other.undefined;
        finite += other.finite;
    }

    std::uint64_t total_defined() const { return finite + infinite; }

    /// P(ratio <= t) over defined pairs; infinite ratios weigh the tail.
    double cdf_at(double t) const {
        if (total_defined() == 0) return 0.0;
        const std::int64_t key = key_for(t);
        std::uint64_t acc = 0;
        for (const auto& [k, c] : grid) {
            if (k > key) break;
            acc += c;
        }
        return static_cast<double>(acc) / static_cast<double>(total_defined());
    }

    double inf_mass() const {
        return total_defined() == 0
                   ? 0.0
                   : static_cast<double>(infinite) / static_cast<double>(total_defined());
    }
};

struct TrialReport {
    std::uint64_t trial_seed = 0;
    double density = 0.0;
    std::string algorithm;
    std::size_t n = 0;
    bool gilbert_connected = false;
    bool connected = false;
    bool partition_preserved = false;
    std::size_t gilbert_edges = 0;
    std::size_t edges = 0;
    std::uint32_t max_deg = 0;
    std::vector<std::uint64_t> degree_hist;          // index = degree
    std::vector<std::uint32_t> degrees;              // by rank
    std::uint64_t bits_round1 = 0, bits_round2 = 0, bits_round3 = 0; // alg1 only
    std::vector<StretchCounts> stretch;              // parallel to requested alphas
};

namespace detail {

// Stretch evaluation shared across the algorithms of one trial: the Gilbert
// distance arrays are computed once per (source, alpha) and reused.
inline void stretch_for_trial(const PointSet& points, const CompactGraph& gilbert,
                              const std::vector<const CompactGraph*>& topos,
                              std::span<const double> alphas,
                              std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs,
                              std::vector<std::vector<StretchCounts>>& out) {
    constexpr std::uint32_t unreachable = std::numeric_limits<std::uint32_t>::max();
    std::sort(pairs.begin(), pairs.end());
    out.assign(topos.size(), std::vector<StretchCounts>(alphas.size()));
    std::vector<std::uint32_t> hops_g;
    std::vector<double> cost_g;
    std::vector<std::uint32_t> hops_t;
    std::vector<double> cost_t;
    for (std::size_t start = 0; start < pairs.size();) {
        std::size_t stop = start;
        const std::uint32_t src = pairs[start].first;
        while (stop < pairs.size() && pairs[stop].first == src) ++stop;
        for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
            const double alpha = alphas[ai];
            const bool hop = alpha == 0.0;
            if (hop) hops_g = hop_distances_from(gilbert, src);
            else cost_g = path_costs_from(gilbert, points, src, alpha);
            for (std::size_t ti = 0; ti < topos.size(); ++ti) {
                if (hop) hops_t = hop_distances_from(*topos[ti], src);
                else cost_t = path_costs_from(*topos[ti], points, src, alpha);
                StretchCounts& acc = out[ti][ai];
                for (std::size_t k = start; k < stop; ++k) {
                    const std::uint32_t dst = pairs[k].second;
                    double cg, ct;
                    if (hop) {
                        cg = hops_g[dst] == unreachable ? kInfiniteCost
                                                        : static_cast<double>(hops_g[dst]);
                        ct = hops_t[dst] == unreachable ? kInfiniteCost
                                                        : static_cast<double>(hops_t[dst]);
                    } else {
                        cg = cost_g[dst];
                        ct = cost_t[dst];
                    }
                    if (cg == kInfiniteCost) ++acc.undefined;
                    else if (ct == kInfiniteCost) ++acc.infinite;
                    else acc.add_ratio(stretch_ratio(ct, cg));
                }
            }
        }
        start = stop;
    }
}

template <class PerAlgorithm>
void run_trial_all(std::size_t n, double density, std::span<const AlgorithmSpec> algos,
                   std::uint64_t seed, std::span<const double> alphas, std::size_t pair_samples,
                   bool with_stretch, PerAlgorithm&& sink) {
    const PointSet points = generate_uniform_points(n, seed);
    const DiskModel model(radius_for_density(density, n));
    const Adjacency gilbert = build_gilbert(points, model);
    const Partition gilbert_parts = connected_components(gilbert);
    const bool gconn = gilbert_parts.blocks.size() <= 1;

    std::vector<Topology> topologies;
    std::vector<TrialReport> reports;
    topologies.reserve(algos.size());
    for (const AlgorithmSpec& spec : algos) {
        TrialReport rep;
        rep.trial_seed = seed;
        rep.density = density;
        rep.algorithm = spec.name();
        rep.n = n;
        rep.gilbert_connected = gconn;
        rep.gilbert_edges = gilbert.edge_count();
        if (spec.kind == AlgorithmSpec::Kind::Alg1) {
            // Fold the protocol cost into the same pass that computes the
            // choices, instead of running the algorithm twice.
            const unsigned width = id_width_for(gilbert.ids());
            std::vector<Edge> edges;
            std::uint64_t initiated = 0;
            for (std::uint32_t v = 0; v < n; ++v) {
                const auto choice = alg1_choice(build_local_view(gilbert, v));
                initiated += choice.targets.size();
                for (std::uint32_t t : choice.targets) edges.push_back(make_edge(v, t));
            }
            topologies.emplace_back(gilbert.ids_ptr(), std::move(edges));
            rep.bits_round1 = static_cast<std::uint64_t>(width) * n;
            rep.bits_round2 = static_cast<std::uint64_t>(width) * 2 * gilbert.edge_count();
            rep.bits_round3 = static_cast<std::uint64_t>(width) * initiated;
        } else {
            topologies.push_back(spec.run(points, gilbert));
        }
        const Topology& topo = topologies.back();
        const Partition parts = connected_components(topo);
        rep.connected = parts.blocks.size() <= 1;
        rep.partition_preserved = parts == gilbert_parts;
        rep.edges = topo.edge_count();
        rep.degrees = degrees_by_rank(topo);
        rep.max_deg = rep.degrees.empty()
                          ? 0
                          : *std::max_element(rep.degrees.begin(), rep.degrees.end());
        rep.degree_hist.assign(rep.max_deg + 1, 0);
        for (std::uint32_t d : rep.degrees) ++rep.degree_hist[d];
        rep.stretch.assign(alphas.size(), StretchCounts{});
        reports.push_back(std::move(rep));
    }

    if (with_stretch && !alphas.empty() && n >= 2) {
        Rng pair_rng(derive_seed(seed, 0x70617273ULL)); // dedicated pair stream
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        pairs.reserve(pair_samples);
        for (std::size_t k = 0; k < pair_samples; ++k)
            pairs.push_back(pair_rng.pair_below(static_cast<std::uint32_t>(n)));
        const CompactGraph gg = CompactGraph::from(gilbert);
        std::vector<CompactGraph> topo_csr;
        std::vector<const CompactGraph*> topo_ptrs;
        topo_csr.reserve(topologies.size());
        for (const Topology& t : topologies) topo_csr.push_back(CompactGraph::from(t));
        for (const CompactGraph& g : topo_csr) topo_ptrs.push_back(&g);
        std::vector<std::vector<StretchCounts>> counts;
        stretch_for_trial(points, gg, topo_ptrs, alphas, std::move(pairs), counts);
        for (std::size_t ti = 0; ti < reports.size(); ++ti) reports[ti].stretch = counts[ti];
    }

    for (std::size_t ti = 0; ti < reports.size(); ++ti) sink(ti, std::move(reports[ti]));
}

} // namespace detail

/// One Monte-Carlo trial: uniform points from the trial seed, Gilbert graph
/// at pi R^2 = density / n, one algorithm, full metrics. Pure in its inputs.
inline TrialReport run_trial(const ExperimentConfig& config, double density,
                             const AlgorithmSpec& algo, std::uint64_t seed) {
    TrialReport out;
    const AlgorithmSpec specs[1]{algo};
    detail::run_trial_all(config.n, density, specs, seed, config.alphas, config.pair_samples,
                          !config.alphas.empty(),
                          [&](std::size_t, TrialReport&& rep) { out = std::move(rep); });
    return out;
}

// ---- Aggregation ----------------------------------------------------------------

struct ComboStats {
    std::string algorithm;
    double density = 0.0;
    std::size_t trials = 0;
    std::size_t stretch_trials = 0;
    std::uint64_t connected = 0;
    std::uint64_t gilbert_connected = 0;
    std::uint64_t partition_preserved = 0;
    std::vector<double> normalized_edges;              // by trial index
    std::vector<std::uint64_t> degree_counts;          // pooled, index = degree
    std::map<std::uint32_t, std::uint64_t> max_degree_counts;
    std::vector<std::vector<std::uint64_t>> per_index_counts; // [rank][degree]
    std::uint64_t degree6_ok_trials = 0;               // >= 99% of nodes with degree <= 6
    double sum_bits_round1 = 0, sum_bits_round2 = 0, sum_bits_round3 = 0;
    std::vector<StretchCounts> stretch;                // per alpha

    double connectivity_rate() const {
        return trials ? static_cast<double>(connected) / static_cast<double>(trials) : 0.0;
    }
    double gilbert_connectivity_rate() const {
        return trials ? static_cast<double>(gilbert_connected) / static_cast<double>(trials) : 0.0;
    }
    double mean_degree() const {
        std::uint64_t nodes = 0, sum = 0;
        for (std::size_t d = 0; d < degree_counts.size(); ++d) {
            nodes += degree_counts[d];
            sum += degree_counts[d] * d;
        }
        return nodes ? static_cast<double>(sum) / static_cast<double>(nodes) : 0.0;
    }
    std::uint32_t max_degree_observed() const {
        return max_degree_counts.empty() ? 0 : max_degree_counts.rbegin()->first;
    }
    EmpiricalCdf edges_cdf() const { return EmpiricalCdf::from_samples(normalized_edges); }
};

struct AggregateReport {
    ExperimentConfig config;
    std::vector<ComboStats> combos; // density-major, then algorithm, matching config order
};

namespace detail {

inline void merge_counts(std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
    if (from.size() > into.size()) into.resize(from.size(), 0);
    for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
}

// Everything except normalized_edges, which the caller slot-addresses by
// trial index. All folds here are exact commutative sums.
inline void fold_trial(ComboStats& stats, const TrialReport& rep) {
    stats.connected += rep.connected;
    stats.gilbert_connected += rep.gilbert_connected;
    stats.partition_preserved += rep.partition_preserved;
    merge_counts(stats.degree_counts, rep.degree_hist);
    ++stats.max_degree_counts[rep.max_deg];
    if (stats.per_index_counts.size() < rep.degrees.size())
        stats.per_index_counts.resize(rep.degrees.size());
    for (std::size_t v = 0; v < rep.degrees.size(); ++v) {
        auto& row = stats.per_index_counts[v];
        if (row.size() <= rep.degrees[v]) row.resize(rep.degrees[v] + 1, 0);
        ++row[rep.degrees[v]];
    }
    std::uint64_t le6 = 0;
    for (std::size_t d = 0; d < rep.degree_hist.size() && d <= 6; ++d) le6 += rep.degree_hist[d];
    if (static_cast<double>(le6) > 0.99 * static_cast<double>(rep.n)) ++stats.degree6_ok_trials;
    stats.sum_bits_round1 += static_cast<double>(rep.bits_round1);
    stats.sum_bits_round2 += static_cast<double>(rep.bits_round2);
    stats.sum_bits_round3 += static_cast<double>(rep.bits_round3);
    if (stats.stretch.size() < rep.stretch.size()) stats.stretch.resize(rep.stretch.size());
    for (std::size_t ai = 0; ai < rep.stretch.size(); ++ai) stats.stretch[ai].merge(rep.stretch[ai]);
}

inline void merge_combo(ComboStats& into, const ComboStats& from) {
    into.connected += from.connected;
    into.gilbert_connected += from.gilbert_connected;
    into.partition_preserved += from.partition_preserved;
    merge_counts(into.degree_counts, from.degree_counts);
    for (const auto& [d, c] : from.max_degree_counts) into.max_degree_counts[d] += c;
    if (into.per_index_counts.size() < from.per_index_counts.size())
        into.per_index_counts.resize(from.per_index_counts.size());
    for (std::size_t v = 0; v < from.per_index_counts.size(); ++v)
        merge_counts(into.per_index_counts[v], from.per_index_counts[v]);
    into.degree6_ok_trials += from.degree6_ok_trials;
    into.sum_bits_round1 += from.sum_bits_round1;
    into.sum_bits_round2 += from.sum_bits_round2;
    into.sum_bits_round3 += from.sum_bits_round3;
    if (into.stretch.size() < from.stretch.size()) into.stretch.resize(from.stretch.size());
    for (std::size_t ai = 0; ai < from.stretch.size(); ++ai) into.stretch[ai].merge(from.stretch[ai]);
}

} // namespace detail

/// Runs the whole experiment grid. Trials are distributed over `workers`
/// threads (0 = hardware concurrency); every fold is either slot-addressed by
/// trial index or an exact commutative sum, so the aggregate is bit-identical
/// for any worker count or execution order.
inline AggregateReport run_monte_carlo(const ExperimentConfig& config, unsigned workers = 0) {
    config.validate();
    const std::size_t n_alg = config.algorithms.size();
    const std::size_t n_den = config.densities.size();
    const std::size_t n_combo = n_alg * n_den;
    const std::size_t stretch_trials =
        config.alphas.empty() ? 0 : std::min(config.stretch_trials, config.trials);

    std::vector<AlgorithmSpec> specs;
    specs.reserve(n_alg);
    for (const auto& name : config.algorithms) specs.push_back(AlgorithmSpec::parse(name));

    AggregateReport report;
    report.config = config;
    report.combos.resize(n_combo);
    for (std::size_t di = 0; di < n_den; ++di)
        for (std::size_t ai = 0; ai < n_alg; ++ai) {
            ComboStats& stats = report.combos[di * n_alg + ai];
            stats.algorithm = specs[ai].name();
            stats.density = config.densities[di];
            stats.trials = config.trials;
            stats.stretch_trials = stretch_trials;
            stats.normalized_edges.assign(config.trials, 0.0);
        }

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t total_tasks = n_den * config.trials;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, total_tasks)));

    std::vector<std::vector<ComboStats>> local(workers);
    std::atomic<std::size_t> next{0};
    auto worker_fn = [&](unsigned wi) {
        auto& mine = local[wi];
        mine.resize(n_combo);
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total_tasks) break;
            const std::size_t di = task / config.trials;
            const std::size_t trial = task % config.trials;
            const std::uint64_t seed = trial_seed(config.seed, trial);
            detail::run_trial_all(config.n, config.densities[di], specs, seed, config.alphas,
                                  config.pair_samples, trial < stretch_trials,
                                  [&](std::size_t ai, TrialReport&& rep) {
                                      const std::size_t combo = di * n_alg + ai;
                                      // Distinct trial slots, never contended.
                                      report.combos[combo].normalized_edges[trial] =
                                          static_cast<double>(rep.edges) /
                                          static_cast<double>(rep.n);
                                      detail::fold_trial(mine[combo], rep);
                                  });
        }
    };
    if (workers == 1) {
        worker_fn(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned wi = 0; wi < workers; ++wi) pool.emplace_back(worker_fn, wi);
        for (auto& t : pool) t.join();
    }
    for (unsigned wi = 0; wi < workers; ++wi)
        for (std::size_t c = 0; c < n_combo; ++c)
            if (!local[wi].empty()) detail::merge_combo(report.combos[c], local[wi][c]);
    return report;
}

// ---- Report files ----------------------------------------------------------------

namespace detail {

inline std::string format_prob(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

/// Writes cdf_edges.csv, pmf_degree.csv, pmf_maxdeg.csv, cdf_stretch.csv,
/// per_index_degree.csv and summary.json under out_dir.
inline void write_reports(const AggregateReport& report, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto open = [&](const char* name) {
        std::ofstream out(out_dir / name);
        if (!out) throw std::runtime_error("cannot write " + (out_dir / name).string());
        return out;
    };

    {
        auto out = open("cdf_edges.csv");
        out << "algorithm,N,value,cum_prob\n";
        for (const ComboStats& c : report.combos) {
            const EmpiricalCdf cdf = c.edges_cdf();
            for (std::size_t i = 0; i < cdf.values.size(); ++i)
                out << c.algorithm << ',' << detail::format_prob(c.density) << ','
                    << detail::format_prob(cdf.values[i]) << ',' << detail::format_prob(cdf.cum[i])
                    << '\n';
        }
    }
    {
        auto out = open("pmf_degree.csv");
        out << "algorithm,N,degree,mass\n";
        for (const ComboStats& c : report.combos) {
            std::uint64_t nodes = 0;
            for (auto v : c.degree_counts) nodes += v;
            for (std::size_t d = 0; d < c.degree_counts.size(); ++d)
                if (c.degree_counts[d])
                    out << c.algorithm << ',' << detail::format_prob(c.density) << ',' << d << ','
                        << detail::format_prob(static_cast<double>(c.degree_counts[d]) /
                                               static_cast<double>(nodes))
                        << '\n';
        }
    }
    {
        auto out = open("pmf_maxdeg.csv");
        out << "algorithm,N,degree,mass\n";
        for (const ComboStats& c : report.combos) {
            std::uint64_t total = 0;
            for (const auto& [d, cnt] : c.max_degree_counts) total += cnt;
            for (const auto& [d, cnt] : c.max_degree_counts)
                out << c.algorithm << ',' << detail::format_prob(c.density) << ',' << d << ','
                    << detail::format_prob(static_cast<double>(cnt) / static_cast<double>(total))
                    << '\n';
        }
    }
    {
        // rows are thinned to one per 2^-6 bucket (the accumulation grid is
        // finer); each emitted t is the largest occupied grid value in its
        // bucket, so the curve is exact at every printed point
        auto out = open("cdf_stretch.csv");
        out << "algorithm,N,alpha,t,cum_prob,inf_mass\n";
        for (const ComboStats& c : report.combos) {
            for (std::size_t ai = 0; ai < c.stretch.size(); ++ai) {
                const StretchCounts& s = c.stretch[ai];
                if (s.total_defined() == 0) continue;
                const double inf_mass = s.inf_mass();
                const double total = static_cast<double>(s.total_defined());
                std::uint64_t acc = 0;
                for (auto it = s.grid.begin(); it != s.grid.end();) {
                    const std::int64_t bucket = it->first >> 6;
                    std::int64_t key = it->first;
                    while (it != s.grid.end() && (it->first >> 6) == bucket) {
                        acc += it->second;
                        key = it->first;
                        ++it;
                    }
                    out << c.algorithm << ',' << detail::format_prob(c.density) << ','
                        << detail::format_prob(report.config.alphas[ai]) << ','
                        << detail::format_prob(static_cast<double>(key) * StretchCounts::kStep)
                        << ',' << detail::format_prob(static_cast<double>(acc) / total) << ','
                        << detail::format_prob(inf_mass) << '\n';
                }
            }
        }
    }
    {
        auto out = open("per_index_degree.csv");
        out << "algorithm,N,bin_lo,bin_hi,mean,degree,mass\n";
        for (const ComboStats& c : report.combos) {
            const std::size_t n = c.per_index_counts.size();
            if (n == 0) continue;
            const std::size_t bins = std::min<std::size_t>(50, n);
            for (std::size_t b = 0; b < bins; ++b) {
                const std::size_t lo = b * n / bins;
                const std::size_t hi = (b + 1) * n / bins; // exclusive
                std::vector<std::uint64_t> pooled;
                for (std::size_t v = lo; v < hi; ++v) detail::merge_counts(pooled, c.per_index_counts[v]);
                std::uint64_t total = 0, weighted = 0;
                for (std::size_t d = 0; d < pooled.size(); ++d) {
                    total += pooled[d];
                    weighted += pooled[d] * d;
                }
                if (total == 0) continue;
                const double mean =
                    static_cast<double>(weighted) / static_cast<double>(total);
                for (std::size_t d = 0; d < pooled.size(); ++d)
                    if (pooled[d])
                        out << c.algorithm << ',' << detail::format_prob(c.density) << ','
                            << lo + 1 << ',' << hi << ',' << detail::format_prob(mean) << ','
                            << d << ','
                            << detail::format_prob(static_cast<double>(pooled[d]) /
                                                   static_cast<double>(total))
                            << '\n';
            }
        }
    }
    {
        nlohmann::ordered_json summary;
        summary["config"] = report.config.to_json();
        auto combos = nlohmann::ordered_json::array();
        for (const ComboStats& c : report.combos) {
            nlohmann::ordered_json j;
            j["algorithm"] = c.algorithm;
            j["N"] = c.density;
            j["trials"] = c.trials;
            j["connectivity_rate"] = c.connectivity_rate();
            j["gilbert_connectivity_rate"] = c.gilbert_connectivity_rate();
            j["partition_preserved_rate"] =
                c.trials ? static_cast<double>(c.partition_preserved) / c.trials : 0.0;
            j["penrose_prediction"] =
                penrose_prediction(report.config.n, radius_for_density(c.density, report.config.n));
            j["mean_degree"] = c.mean_degree();
            j["max_degree_observed"] = c.max_degree_observed();
            const EmpiricalCdf cdf = c.edges_cdf();
            j["normalized_edges"] = {{"min", cdf.values.front()},
                                     {"max", cdf.values.back()},
                                     {"q50", cdf.quantile(0.50)},
                                     {"q99", cdf.quantile(0.99)}};
            j["degree_le6_rate"] =
                c.trials ? static_cast<double>(c.degree6_ok_trials) / c.trials : 0.0;
            if (c.sum_bits_round1 > 0) {
                const double scale =
                    static_cast<double>(c.trials) * static_cast<double>(report.config.n);
                j["mean_bits_per_node"] = {{"round1", c.sum_bits_round1 / scale},
                                           {"round2", c.sum_bits_round2 / scale},
                                           {"round3", c.sum_bits_round3 / scale},
                                           {"total", (c.sum_bits_round1 + c.sum_bits_round2 +
                                                      c.sum_bits_round3) /
                                                         scale}};
            }
            if (!c.stretch.empty()) {
                auto stretch = nlohmann::ordered_json::array();
                for (std::size_t ai = 0; ai < c.stretch.size(); ++ai) {
                    const StretchCounts& s = c.stretch[ai];
                    nlohmann::ordered_json js;
                    js["alpha"] = report.config.alphas[ai];
                    js["defined_pairs"] = s.total_defined();
                    js["undefined_pairs"] = s.undefined;
                    js["inf_mass"] = s.inf_mass();
                    js["p_le_2"] = s.cdf_at(2.0);
                    js["p_le_5"] = s.cdf_at(5.0);
                    stretch.push_back(std::move(js));
                }
                j["stretch"] = std::move(stretch);
            }
            combos.push_back(std::move(j));
        }
        summary["combos"] = std::move(combos);
        auto out = open("summary.json");
        out << summary.dump(2) << '\n';
    }
}

} // namespace topoctl
