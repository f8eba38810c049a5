// Command-line front end: point-set generation, topology construction,
// instance analysis, protocol simulation, guarantee verification, and the
// Monte-Carlo harness.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config/data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <topoctl/algorithms.hpp>
#include <topoctl/experiments.hpp>
#include <topoctl/io.hpp>
#include <topoctl/metrics.hpp>
#include <topoctl/protocol.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace topoctl;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

// key/value report that renders as JSON or as key,value CSV rows
struct Report {
    nlohmann::ordered_json body = nlohmann::ordered_json::object();

    void print(const std::string& format, std::ostream& out) const {
        if (format == "json") {
            out << body.dump(2) << '\n';
            return;
        }
        std::function<void(const std::string&, const nlohmann::ordered_json&)> walk =
            [&](const std::string& prefix, const nlohmann::ordered_json& node) {
                if (node.is_object()) {
                    for (auto it = node.begin(); it != node.end(); ++it)
                        walk(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
                } else if (node.is_array()) {
                    std::size_t i = 0;
                    for (const auto& item : node) walk(prefix + "." + std::to_string(i++), item);
                } else {
                    out << prefix << ',' << (node.is_string() ? node.get<std::string>() : node.dump())
                        << '\n';
                }
            };
        walk("", body);
    }
};

struct InstanceArgs {
    std::string points_file;
    double range = 0.0;
    double density = 0.0;
    bool has_range = false;
    bool has_density = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--points", points_file, "point-set CSV file")->required();
        auto* r = cmd->add_option("--range", range, "communication range R");
        auto* d = cmd->add_option("--density", density, "node density N, converted via pi R^2 = N/n");
        r->excludes(d);
        d->excludes(r);
    }

    void finalize(const CLI::App* cmd) {
        has_range = cmd->count("--range") > 0;
        has_density = cmd->count("--density") > 0;
        if (!has_range && !has_density)
            throw CLI::ValidationError("one of --range or --density is required");
    }

    std::pair<PointSet, DiskModel> load() const {
        PointSet points = read_points_csv(points_file);
        const double R = has_range ? range : radius_for_density(density, points.size());
        return {std::move(points), DiskModel(R)};
    }
};

int cmd_gen(const std::string& construct, std::size_t n, std::uint64_t seed, double range,
            double epsilon, const std::string& out) {
    PointSet points = [&] {
        if (construct == "degree10") return construct_degree10_instance(range);
        if (construct == "complete") return construct_complete_instance(n, epsilon, range);
        return generate_uniform_points(n, seed);
    }();
    write_points_csv(std::filesystem::path(out), points);
    std::cerr << "wrote " << points.size() << " points to " << out << "\n";
    return kExitOk;
}

int cmd_build(const InstanceArgs& inst, const std::string& algorithm, const std::string& out,
              const std::string& format) {
    const auto spec = AlgorithmSpec::parse(algorithm);
    const auto [points, model] = inst.load();
    const auto gilbert = build_gilbert(points, model);
    const auto topo = spec.run(points, gilbert);
    if (!out.empty()) write_edges_csv(std::filesystem::path(out), topo);

    Report report;
    report.body["algorithm"] = spec.name();
    report.body["n"] = points.size();
    report.body["range"] = model.range;
    report.body["gilbert_edges"] = gilbert.edge_count();
    report.body["edges"] = topo.edge_count();
    report.body["max_degree"] = max_degree(topo);
    report.body["gilbert_connected"] = is_connected(gilbert);
    report.body["connected"] = is_connected(topo);
    report.print(format, std::cout);
    return kExitOk;
}

int cmd_analyze(const InstanceArgs& inst, const std::string& algorithm,
                const std::vector<double>& alphas, std::size_t pairs, std::uint64_t seed,
                const std::string& format, const std::string& out) {
    const auto spec = AlgorithmSpec::parse(algorithm);
    const auto [points, model] = inst.load();
    const auto gilbert = build_gilbert(points, model);
    const auto topo = spec.run(points, gilbert);

    Report report;
    report.body["algorithm"] = spec.name();
    report.body["n"] = points.size();
    report.body["range"] = model.range;
    report.body["gilbert_edges"] = gilbert.edge_count();
    report.body["edges"] = topo.edge_count();
    report.body["normalized_edges"] =
        static_cast<double>(topo.edge_count()) / static_cast<double>(points.size());
    const auto deg = degrees_by_rank(topo);
    std::uint64_t dsum = 0;
    for (auto d : deg) dsum += d;
    report.body["mean_degree"] = static_cast<double>(dsum) / static_cast<double>(points.size());
    report.body["max_degree"] = max_degree(topo);
    report.body["gilbert_connected"] = is_connected(gilbert);
    report.body["connected"] = is_connected(topo);
    report.body["partition_preserved"] = connected_components(topo) == connected_components(gilbert);
    report.body["penrose_prediction"] = penrose_prediction(points.size(), model.range);

    if (!alphas.empty() && points.size() >= 2) {
        auto stretch = nlohmann::ordered_json::array();
        const std::size_t all_pairs = points.size() * (points.size() - 1) / 2;
        for (double alpha : alphas) {
            const auto sample =
                pairs == 0 || pairs >= all_pairs ? PairSample::all() : PairSample::random(pairs, seed);
            const auto cdf = stretch_cdf(points, gilbert, topo, alpha, sample);
            nlohmann::ordered_json j;
            j["alpha"] = alpha;
            j["pairs"] = cdf.sample_count;
            j["inf_mass"] = cdf.inf_mass;
            j["q50"] = cdf.quantile(0.50);
            j["q90"] = cdf.quantile(0.90);
            j["p_le_5"] = cdf.eval(5.0);
            stretch.push_back(std::move(j));
        }
        report.body["stretch"] = std::move(stretch);
    }

    if (out.empty()) {
        report.print(format, std::cout);
    } else {
        std::ofstream file(out);
        if (!file) throw std::runtime_error("cannot write " + out);
        report.print(format, file);
    }
    return kExitOk;
}

int cmd_protocol(const InstanceArgs& inst, const std::string& transcript_path,
                 const std::string& format) {
    const auto [points, model] = inst.load();
    const auto gilbert = build_gilbert(points, model);
    const auto result = simulate_protocol(gilbert);
    const bool equal = result.topology == run_alg1(gilbert);

    if (!transcript_path.empty()) {
        std::ofstream out(transcript_path);
        if (!out) throw std::runtime_error("cannot write " + transcript_path);
        write_transcript_jsonl(out, result, gilbert.ids());
    }

    const auto totals = result.ledger.totals();
    const double n = static_cast<double>(points.size());
    Report report;
    report.body["n"] = points.size();
    report.body["id_width_bits"] = result.ledger.id_width;
    report.body["messages"] = result.transcript.size();
    report.body["equals_centralized_run"] = equal;
    report.body["total_bits"] = {{"round1", totals.round1},
                                 {"round2", totals.round2},
                                 {"round3", totals.round3}};
    report.body["mean_bits_per_node"] = {{"round1", totals.round1 / n},
                                         {"round2", totals.round2 / n},
                                         {"round3", totals.round3 / n},
                                         {"total", totals.total() / n}};
    report.body["edges"] = result.topology.edge_count();
    report.print(format, std::cout);
    return equal ? kExitOk : kExitVerifyFailed;
}

struct CheckRow {
    std::string name;
    bool applicable = true;
    bool guaranteed = true;
    bool passed = false;
    std::string detail;
};

int cmd_verify(const InstanceArgs& inst, const std::string& algorithm, std::size_t schedules,
               std::uint64_t seed, const std::string& format) {
    const auto spec = AlgorithmSpec::parse(algorithm);
    const auto [points, model] = inst.load();
    const auto gilbert = build_gilbert(points, model);
    const auto topo = spec.run(points, gilbert);
    const std::size_t n = points.size();
    using Kind = AlgorithmSpec::Kind;
    const bool choice_based =
        spec.kind == Kind::Alg1 || spec.kind == Kind::Alg2 || spec.kind == Kind::Variant;

    std::vector<CheckRow> checks;

    {
        CheckRow row{.name = "component-partition-preservation"};
        row.guaranteed = spec.kind != Kind::Kneigh;
        row.passed = connected_components(topo) == connected_components(gilbert);
        checks.push_back(row);
    }
    {
        CheckRow row{.name = "edge-bound"};
        std::size_t bound = 0;
        switch (spec.kind) {
            case Kind::Alg1:
            case Kind::Variant: bound = 5 * n; break;
            case Kind::Alg2: bound = static_cast<std::size_t>(std::max(spec.delta, 5)) * n; break;
            case Kind::Kneigh: bound = static_cast<std::size_t>(spec.k) * n; break;
            case Kind::Xtc: bound = gilbert.edge_count(); break;
            case Kind::Gilbert: row.applicable = false; break;
        }
        if (row.applicable) {
            row.passed = topo.edge_count() <= bound;
            row.detail = std::to_string(topo.edge_count()) + " <= " + std::to_string(bound);
        }
        checks.push_back(row);
    }
    {
        CheckRow row{.name = "degree-bound"};
        std::size_t bound = 0;
        switch (spec.kind) {
            case Kind::Alg1: bound = 10; break;
            case Kind::Variant:
                bound = 10;
                row.guaranteed = false; // the variant can concentrate degree
                break;
            case Kind::Alg2:
                bound = static_cast<std::size_t>(std::max(spec.delta, 5)) + 10 * spec.delta;
                break;
            default: row.applicable = false; break;
        }
        if (row.applicable) {
            row.passed = max_degree(topo) <= bound;
            row.detail = "max " + std::to_string(max_degree(topo)) + " vs " + std::to_string(bound);
        }
        checks.push_back(row);
    }
    {
        CheckRow row{.name = "initiated-connections"};
        row.applicable = choice_based;
        if (row.applicable) {
            const std::size_t cap =
                spec.kind == Kind::Alg2 ? static_cast<std::size_t>(std::max(spec.delta, 5)) : 5;
            std::size_t worst = 0;
            for (std::uint32_t v = 0; v < n; ++v) {
                const auto view = build_local_view(gilbert, v);
                const auto choice = spec.kind == Kind::Alg2 ? alg2_choice(view, spec.delta)
                                    : spec.kind == Kind::Variant ? variant_choice(view, spec.pick)
                                                                 : alg1_choice(view);
                worst = std::max(worst, choice.targets.size());
            }
            row.passed = worst <= cap;
            row.detail = "max " + std::to_string(worst) + " vs " + std::to_string(cap);
        }
        checks.push_back(row);
    }
    {
        CheckRow row{.name = "order-independence"};
        row.applicable = choice_based;
        if (row.applicable) {
            Rng rng(derive_seed(seed, 0x5eedULL));
            std::vector<std::uint32_t> base(n);
            std::iota(base.begin(), base.end(), 0);
            row.passed = true;
            for (std::size_t s = 0; s < schedules && row.passed; ++s) {
                auto order = base;
                rng.shuffle(order);
                std::vector<Edge> edges;
                for (std::uint32_t v : order) {
                    const auto view = build_local_view(gilbert, v);
                    const auto choice = spec.kind == Kind::Alg2 ? alg2_choice(view, spec.delta)
                                        : spec.kind == Kind::Variant
                                            ? variant_choice(view, spec.pick)
                                            : alg1_choice(view);
                    for (std::uint32_t t : choice.targets) edges.push_back(make_edge(v, t));
                }
                row.passed = Topology(gilbert.ids_ptr(), std::move(edges)) == topo;
            }
            row.detail = std::to_string(schedules) + " random schedules";
        }
        checks.push_back(row);
    }
    {
        CheckRow row{.name = "protocol-equivalence"};
        row.applicable = spec.kind == Kind::Alg1;
        if (row.applicable) row.passed = simulate_protocol(gilbert).topology == topo;
        checks.push_back(row);
    }
    if (spec.kind == Kind::Alg2) {
        CheckRow row{.name = "min-degree"};
        const auto deg = degrees_by_rank(topo);
        row.passed = true;
        for (std::uint32_t v = 0; v < n; ++v)
            row.passed &= deg[v] >= std::min<std::uint32_t>(
                                        static_cast<std::uint32_t>(gilbert.degree(v)),
                                        static_cast<std::uint32_t>(spec.delta));
        row.detail = "degree(i) >= min{d_i, " + std::to_string(spec.delta) + "}";
        checks.push_back(row);
    }

    bool all_ok = true;
    Report report;
    report.body["algorithm"] = spec.name();
    report.body["n"] = n;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : checks) {
        std::string outcome;
        if (!row.applicable) {
            outcome = "SKIP";
        } else if (row.passed) {
            outcome = "PASS";
        } else if (!row.guaranteed) {
            outcome = "XFAIL";
        } else {
            outcome = "FAIL";
            all_ok = false;
        }
        nlohmann::ordered_json j;
        j["check"] = row.name;
        j["outcome"] = outcome;
        if (!row.guaranteed) j["guaranteed"] = false;
        if (!row.detail.empty()) j["detail"] = row.detail;
        rows.push_back(std::move(j));
    }
    report.body["checks"] = std::move(rows);
    report.body["pass"] = all_ok;
    report.print(format, std::cout);
    return all_ok ? kExitOk : kExitVerifyFailed;
}

int cmd_mc(const std::string& config_path, const std::string& out_dir,
           std::optional<std::uint64_t> seed, unsigned workers) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read " + config_path);
    nlohmann::json raw;
    try {
        in >> raw;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config parse error: " + std::string(e.what()));
    }
    auto config = ExperimentConfig::from_json(raw);
    if (seed) {
        config.seed = *seed;
        config.has_seed = true;
    }
    if (!config.has_seed)
        throw std::invalid_argument("mc: no seed given; pass --seed or set \"seed\" in the config");
    const auto report = run_monte_carlo(config, workers);
    write_reports(report, out_dir);
    std::cerr << "wrote reports for " << report.combos.size() << " combinations to " << out_dir
              << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"unit-disk topology control toolkit"};
    app.require_subcommand(1);
    std::string format = "json";

    // gen
    auto* gen = app.add_subcommand("gen", "generate a point set CSV");
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_construct, gen_out = "points.csv";
    double gen_range = 1.0, gen_epsilon = 0.5;
    gen->add_option("--n", gen_n, "node count");
    gen->add_option("--seed", gen_seed, "placement seed (default 0)");
    gen->add_option("--construct", gen_construct, "adversarial instance: degree10 | complete")
        ->check(CLI::IsMember({"degree10", "complete"}));
    gen->add_option("--range", gen_range, "range the instance is built for (default 1.0)");
    gen->add_option("--epsilon", gen_epsilon, "complete-instance packing radius factor");
    gen->add_option("--out", gen_out, "output file (default points.csv)");

    // build
    auto* build = app.add_subcommand("build", "build a topology from a point set");
    InstanceArgs build_inst;
    build_inst.attach(build);
    std::string build_algorithm = "alg1", build_out;
    build->add_option("--algorithm", build_algorithm,
                      "alg1 | alg2:<delta> | variant:<min|max> | xtc | "
                      "kneigh:<k>[:<union|intersection>] | gilbert");
    build->add_option("--out", build_out, "edge-list CSV output");
    build->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    // analyze
    auto* analyze = app.add_subcommand("analyze", "single-instance metrics");
    InstanceArgs analyze_inst;
    analyze_inst.attach(analyze);
    std::string analyze_algorithm = "alg1", analyze_out;
    std::vector<double> analyze_alphas;
    std::size_t analyze_pairs = 10000;
    std::uint64_t analyze_seed = 0;
    analyze->add_option("--algorithm", analyze_algorithm, "algorithm descriptor");
    analyze->add_option("--alphas", analyze_alphas, "stretch exponents (e.g. --alphas 0 1 2)");
    analyze->add_option("--pairs", analyze_pairs,
                        "sampled pairs per stretch CDF; 0 = all pairs");
    analyze->add_option("--seed", analyze_seed, "pair-sampling seed");
    analyze->add_option("--out", analyze_out, "write the report to a file instead of stdout");
    analyze->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    // protocol
    auto* protocol = app.add_subcommand("protocol", "run the three-round distributed protocol");
    InstanceArgs protocol_inst;
    protocol_inst.attach(protocol);
    std::string transcript_path;
    protocol->add_option("--transcript", transcript_path, "write the message transcript (JSONL)");
    protocol->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    // verify
    auto* verify = app.add_subcommand("verify", "check the guarantees on one instance");
    InstanceArgs verify_inst;
    verify_inst.attach(verify);
    std::string verify_algorithm = "alg1";
    std::size_t verify_schedules = 10;
    std::uint64_t verify_seed = 0;
    verify->add_option("--algorithm", verify_algorithm, "algorithm descriptor");
    verify->add_option("--schedules", verify_schedules, "random schedules to test (default 10)");
    verify->add_option("--seed", verify_seed, "schedule seed");
    verify->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    // mc
    auto* mc = app.add_subcommand("mc", "Monte-Carlo harness");
    std::string mc_config, mc_out = "reports";
    unsigned mc_workers = 0;
    std::uint64_t mc_seed = 0;
    mc->add_option("--config", mc_config, "experiment config JSON")->required();
    mc->add_option("--out", mc_out, "output directory (default reports)");
    auto* mc_seed_opt = mc->add_option("--seed", mc_seed, "master seed (overrides config)");
    mc->add_option("--workers", mc_workers, "worker threads (default: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            if (gen_construct.empty() && gen->count("--n") == 0)
                throw std::invalid_argument("gen: --n is required unless --construct is given");
            if (gen_construct == "complete" && gen->count("--n") == 0)
                throw std::invalid_argument("gen: --construct complete needs --n");
            return cmd_gen(gen_construct, gen_n, gen_seed, gen_range, gen_epsilon, gen_out);
        }
        if (build->parsed()) {
            build_inst.finalize(build);
            return cmd_build(build_inst, build_algorithm, build_out, format);
        }
        if (analyze->parsed()) {
            analyze_inst.finalize(analyze);
            return cmd_analyze(analyze_inst, analyze_algorithm, analyze_alphas, analyze_pairs,
                               analyze_seed, format, analyze_out);
        }
        if (protocol->parsed()) {
            protocol_inst.finalize(protocol);
            return cmd_protocol(protocol_inst, transcript_path, format);
        }
        if (verify->parsed()) {
            verify_inst.finalize(verify);
            return cmd_verify(verify_inst, verify_algorithm, verify_schedules, verify_seed, format);
        }
        if (mc->parsed()) {
            std::optional<std::uint64_t> seed;
            if (mc_seed_opt->count() > 0) seed = mc_seed;
            return cmd_mc(mc_config, mc_out, seed, mc_workers);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
