#include "noderank/app/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "noderank/graph.hpp"
#include "noderank/io.hpp"
#include "noderank/metrics.hpp"
#include "noderank/ranking.hpp"

namespace fs = std::filesystem;

namespace noderank::app {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kPageRank = "PR";

std::string dump(const json& j) { return j.dump(2) + "\n"; }

fs::path require_path(const fs::path& p, std::string_view key, std::string_view command) {
    if (p.empty()) throw ConfigError(std::string(command) + " needs --" + std::string(key));
    return p;
}

std::vector<View> selected_views(const RunConfig& config) {
    if (config.view == "all") return {View::Retweet, View::Reply, View::Mention, View::Mixed};
    return {parse_view_setting(config.view)};
}

fs::path activity_path(const RunConfig& config) {
    if (!config.activity.empty()) return resolve_dataset(config.activity);
    if (const char* dir = std::getenv(kDataDirEnv); dir != nullptr && *dir != '\0') {
        for (const char* name : {"higgs-activity_time.txt.gz", "higgs-activity_time.txt"}) {
            const fs::path candidate = fs::path(dir) / name;
            if (fs::exists(candidate)) return candidate;
        }
    }
    throw ConfigError(std::string("ingest needs --activity or ") + kDataDirEnv +
                      " holding higgs-activity_time.txt[.gz]; the Higgs data is published at " + kHiggsUrl);
}

/// Canonical edge file -> graph. Structural problems are data errors.
DisseminationGraph load_graph(const fs::path& path) {
    std::istringstream in(io::read_file(path));
    auto edges = read_canonical_edges(in);
    if (edges.empty()) throw DataError("no edges in '" + path.string() + "'");
    const View view = infer_view(edges);
    try {
        return DisseminationGraph(std::move(edges), view);
    } catch (const std::invalid_argument& e) {
        throw DataError("'" + path.string() + "': " + e.what());
    }
}

RankResult load_rank(const fs::path& path) {
    std::istringstream in(io::read_file(path));
    try {
        return read_rank_csv(in);
    } catch (const DataError& e) {
        throw DataError("'" + path.string() + "': " + e.what());
    }
}

std::string label_from(const fs::path& path) {
    std::string stem = path.stem().string();
    if (stem.rfind("rank_", 0) == 0) stem.erase(0, 5);
    return stem.empty() ? std::string("ranking") : stem;
}

void report_diagnostics(const std::vector<Diagnostic>& diagnostics, const fs::path& path, bool strict,
                        std::ostream& log) {
    constexpr std::size_t kShown = 10;
    for (std::size_t i = 0; i < diagnostics.size() && i < kShown; ++i) {
        log << "warning: " << path.string() << ":" << diagnostics[i].line << ": " << diagnostics[i].message << '\n';
    }
    if (diagnostics.size() > kShown) log << "warning: " << diagnostics.size() - kShown << " more skipped lines\n";
    if (strict && !diagnostics.empty()) {
        throw DataError(path.string() + ":" + std::to_string(diagnostics.front().line) + ": " +
                        diagnostics.front().message);
    }
}

struct RankJob {
    std::string name;
    std::optional<Variant> variant;  // empty for PageRank
};

std::vector<RankJob> rank_jobs(const RunConfig& config) {
    if (config.variants.empty()) throw ConfigError("no variants selected");
    std::vector<RankJob> jobs;
    for (const auto& name : config.variants) {
        if (name == kPageRank) {
            jobs.push_back({name, std::nullopt});
        } else if (const auto v = parse_variant(name)) {
            jobs.push_back({name, v});
        } else {
            throw ConfigError("unknown variant '" + name + "': expected NR, NR-A, NR-I, NR-AI or PR");
        }
    }
    return jobs;
}

bool needs_embeddings(const std::vector<RankJob>& jobs) {
    return std::any_of(jobs.begin(), jobs.end(),
                       [](const RankJob& j) { return j.variant && variant_uses_intimacy(*j.variant); });
}

void check_coverage(const EmbeddingTable& table, const DisseminationGraph& graph, const fs::path& path) {
    for (const NodeId id : graph.nodes()) {
        if (!table.contains(id)) {
            throw DataError("embeddings '" + path.string() + "' have no vector for node " + std::to_string(id));
        }
    }
}

std::string params_text(const Node2VecParams& p, const std::string& source, unsigned threads) {
    std::ostringstream out;
    out << "source=" << source << '\n'
        << "p=" << io::format_real(p.p, 17) << '\n'
        << "q=" << io::format_real(p.q, 17) << '\n'
        << "walk_length=" << p.walk_length << '\n'
        << "walks_per_node=" << p.walks_per_node << '\n'
        << "window=" << p.window << '\n'
        << "negatives=" << p.negatives << '\n'
        << "epochs=" << p.epochs << '\n'
        << "learning_rate=" << io::format_real(p.learning_rate, 17) << '\n'
        << "dim=" << p.dim << '\n'
        << "rng_seed=" << p.rng_seed << '\n'
        << "threads=" << threads << '\n';
    return out.str();
}

constexpr std::string_view kVariantNames[] = {"NR", "NR-A", "NR-I", "NR-AI"};

}  // namespace

fs::path resolve_dataset(const fs::path& path) {
    if (path.empty() || fs::exists(path)) return path;
    const char* dir = std::getenv(kDataDirEnv);
    if (dir == nullptr || *dir == '\0') return path;
    if (path.is_relative() && fs::exists(fs::path(dir) / path)) return fs::path(dir) / path;
    if (fs::exists(fs::path(dir) / path.filename())) return fs::path(dir) / path.filename();
    return path;
}

int cmd_ingest(const RunConfig& config, std::ostream& log) {
    const fs::path source = activity_path(config);
    const auto parsed = parse_activity(io::read_file(source));
    report_diagnostics(parsed.diagnostics, source, config.strict, log);
    if (parsed.edges.empty()) throw DataError("no edges in activity file '" + source.string() + "'");

    std::optional<SocialParse> social;
    fs::path social_path;
    if (!config.social.empty()) {
        social_path = resolve_dataset(config.social);
        social = parse_social(io::read_file(social_path));
        report_diagnostics(social->diagnostics, social_path, config.strict, log);
    }

    for (const View view : selected_views(config)) {
        const auto graph = build_view(parsed.edges, view);
        const auto scc = largest_scc(graph);
        const std::string name(view_name(view));
        json stats;
        stats["view"] = name;
        stats["source"] = source.string();
        stats["lines_read"] = parsed.lines_read;
        stats["self_loops"] = parsed.self_loops;
        stats["malformed"] = parsed.malformed;
        stats["unknown_actions"] = parsed.unknown_actions;
        stats["nodes"] = graph.node_count();
        stats["edges"] = graph.edge_count();
        stats["scc_nodes"] = scc.node_count();
        stats["scc_edges"] = scc.edge_count();
        stats["t0"] = scc.t0();
        stats["max_timestamp"] = scc.max_timestamp();
        if (social) {
            stats["social"] = {{"source", social_path.string()},
                               {"nodes", social->graph.node_count()},
                               {"edges", social->graph.edge_count()},
                               {"malformed", social->malformed},
                               {"self_loops", social->self_loops}};
        }
        io::write_file_atomic(config.out / (name + ".edges"), canonical_edges_text(scc.edges()));
        io::write_file_atomic(config.out / (name + ".stats.json"), dump(stats));
        log << name << ": " << graph.node_count() << " nodes, " << graph.edge_count() << " edges; largest SCC "
            << scc.node_count() << " nodes, " << scc.edge_count() << " edges -> "
            << (config.out / (name + ".edges")).string() << '\n';
    }
    return kExitOk;
}

int cmd_embed(const RunConfig& config, std::ostream& log) {
    const Node2VecParams params = config.node2vec_params();
    UndirectedGraph substrate;
    std::string source;
    if (!config.edges_from.empty()) {
        const fs::path path = resolve_dataset(config.edges_from);
        const auto social = parse_social(io::read_file(path));
        report_diagnostics(social.diagnostics, path, config.strict, log);
        if (social.graph.edge_count() == 0) throw DataError("no edges in '" + path.string() + "'");
        substrate = UndirectedGraph::from(social.graph);
        source = path.string();
    } else {
        const fs::path path = require_path(config.graph, "graph", "embed");
        substrate = UndirectedGraph::from(load_graph(path));
        source = path.string();
    }
    const auto corpus = generate_walks(substrate, params, config.threads);
    const auto table = train_sgns(corpus, params, config.threads);
    const fs::path out = config.out / "embeddings.txt";
    io::write_file_atomic(out, embeddings_text(table));
    io::write_file_atomic(config.out / "embeddings.params.txt", params_text(params, source, config.threads));
    log << "embedded " << table.size() << " nodes in " << table.dim() << " dimensions -> " << out.string() << '\n';
    return kExitOk;
}

int cmd_rank(const RunConfig& config, std::ostream& log) {
    const auto jobs = rank_jobs(config);
    const fs::path graph_path = require_path(config.graph, "graph", "rank");
    // parameter errors surface before any work
    const auto graph = load_graph(graph_path);
    const NodeRankParams nr_params = config.noderank_params(graph.view());
    const PageRankParams pr_params = config.pagerank_params();

    std::optional<EmbeddingTable> table;
    if (needs_embeddings(jobs)) {
        if (config.embeddings.empty()) {
            throw ConfigError("variants using intimacy (NR, NR-I) need --embeddings; NR-A, NR-AI and PR do not");
        }
        table = load_embeddings(config.embeddings);
        check_coverage(*table, graph, config.embeddings);
    }

    bool all_converged = true;
    for (const auto& job : jobs) {
        const RankResult result = job.variant ? run_variant(graph, table ? &*table : nullptr, *job.variant,
                                                            nr_params, config.threads)
                                              : pagerank(graph, pr_params, config.threads);
        const double eps = job.variant ? nr_params.epsilon : pr_params.epsilon;
        io::write_file_atomic(config.out / ("rank_" + job.name + ".csv"), rank_csv_text(result));
        io::write_file_atomic(config.out / ("rank_" + job.name + ".log"), convergence_log(result, eps));
        all_converged = all_converged && result.converged;
        log << job.name << ": " << (result.converged ? "converged" : "did not converge") << " after "
            << result.iterations << " iterations -> " << (config.out / ("rank_" + job.name + ".csv")).string()
            << '\n';
    }
    if (!all_converged && config.strict) {
        log << "error: a ranking stopped at max_iter (--strict)\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
    const SirParams params = config.sir_params();
    const auto graph = load_graph(require_path(config.graph, "graph", "simulate"));
    const fs::path path_a = require_path(config.rank_a, "rank-a", "simulate");
    const fs::path path_b = require_path(config.rank_b, "rank-b", "simulate");
    const auto rank_a = load_rank(path_a);
    const auto rank_b = load_rank(path_b);
    std::string label_a = config.label_a.empty() ? label_from(path_a) : config.label_a;
    std::string label_b = config.label_b.empty() ? label_from(path_b) : config.label_b;
    if (label_a == label_b) {
        label_a += "-a";
        label_b += "-b";
    }

    const auto cmp = evaluate_seeds(graph, rank_a, rank_b, params, config.threads, label_a, label_b);
    for (const MethodOutcome* m : {&cmp.a, &cmp.b}) {
        const fs::path dir = config.out / "traces" / m->label;
        fs::remove_all(dir);
        for (std::size_t t = 0; t < m->traces.size(); ++t) {
            char name[32];
            std::snprintf(name, sizeof name, "trial_%04zu.csv", t);
            io::write_file_atomic(dir / name, trace_csv(m->traces[t]));
        }
        io::write_file_atomic(config.out / (m->label + "_mean.csv"), mean_trace_csv(m->mean));
    }
    io::write_file_atomic(config.out / "comparison.json", dump(comparison_json(cmp)));
    log << "mean final reached: " << cmp.a.label << " " << io::format_real(cmp.a.mean_final, 6) << ", "
        << cmp.b.label << " " << io::format_real(cmp.b.mean_final, 6) << ", ratio "
        << io::format_real(cmp.ratio, 6) << " -> " << (config.out / "comparison.json").string() << '\n';
    return kExitOk;
}

int cmd_report(const RunConfig& config, std::ostream& log) {
    const fs::path dir = config.out;
    const fs::path baseline_path = dir / "rank_PR.csv";
    std::vector<std::string> present;
    for (const auto name : kVariantNames) {
        if (fs::exists(dir / ("rank_" + std::string(name) + ".csv"))) present.emplace_back(name);
    }
    if (!fs::exists(baseline_path) || present.empty()) {
        std::string expected = "rank_PR.csv and at least one of";
        for (const auto name : kVariantNames) expected += " rank_" + std::string(name) + ".csv";
        throw DataError("missing rank files in '" + dir.string() + "': expected " + expected);
    }

    const auto baseline = load_rank(baseline_path);
    json report;
    report["baseline"] = kPageRank;
    auto& rankings = report["rankings"] = json::object();
    for (const auto& name : present) {
        const auto ranking = load_rank(dir / ("rank_" + name + ".csv"));
        json entry = comparison_report(ranking, baseline);
        entry["self_shift"] = ranking_shift(ranking, ranking).mean_abs_shift;
        rankings[name] = std::move(entry);
        log << name << " vs PR: mean_abs_shift " << io::format_real(rankings[name]["mean_abs_shift"].get<double>(), 6)
            << '\n';
    }
    if (const fs::path sir_path = dir / "comparison.json"; fs::exists(sir_path)) {
        const auto sir = json::parse(io::read_file(sir_path));
        report["sir"] = {{"finals", sir.at("finals")}, {"ratio", sir.at("ratio")}, {"params", sir.at("params")}};
    }
    io::write_file_atomic(dir / "report.json", dump(report));
    log << "report -> " << (dir / "report.json").string() << '\n';
    return kExitOk;
}

int cmd_pipeline(const RunConfig& config, std::ostream& log) {
    const auto jobs = rank_jobs(config);
    const auto views = selected_views(config);
    int status = kExitOk;
    for (const View view : views) {
        RunConfig step = config;
        step.view = std::string(view_name(view));
        if (views.size() > 1) step.out = config.out / step.view;
        if (int rc = cmd_ingest(step, log); rc != kExitOk) return rc;
        step.graph = step.out / (step.view + ".edges");
        if (needs_embeddings(jobs)) {
            if (int rc = cmd_embed(step, log); rc != kExitOk) return rc;
            step.embeddings = step.out / "embeddings.txt";
        }
        if (int rc = cmd_rank(step, log); rc != kExitOk) status = rc;

        const auto nr = std::find_if(jobs.begin(), jobs.end(), [](const RankJob& j) { return j.variant.has_value(); });
        const bool has_pr = std::any_of(jobs.begin(), jobs.end(), [](const RankJob& j) { return !j.variant; });
        if (nr != jobs.end() && has_pr) {
            step.rank_a = step.out / ("rank_" + nr->name + ".csv");
            step.rank_b = step.out / "rank_PR.csv";
            step.label_a = nr->name;
            step.label_b = std::string(kPageRank);
            if (int rc = cmd_simulate(step, log); rc != kExitOk) return rc;
            if (int rc = cmd_report(step, log); rc != kExitOk) return rc;
        }
    }
    return status;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Influence ranking on temporal dissemination networks"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Show every option");

    std::string config_file;
    app.add_option("--config", config_file, "key=value file applied before the flags")->group("Run");
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    for (const auto& field : config_fields()) {
        std::string name = "--" + std::string(field.key);
        std::replace(name.begin(), name.end(), '_', '-');
        if (field.is_flag) {
            app.add_flag(name, flags[std::string(field.key)], std::string(field.help))->group(std::string(field.group));
        } else {
            app.add_option(name, values[std::string(field.key)], std::string(field.help))
                ->group(std::string(field.group));
        }
    }

    using Command = int (*)(const RunConfig&, std::ostream&);
    const std::vector<std::tuple<std::string, std::string, Command>> commands{
        {"ingest", "parse the activity file and write the largest SCC of each view", cmd_ingest},
        {"embed", "train node embeddings on a graph", cmd_embed},
        {"rank", "rank nodes with NodeRank variants and PageRank", cmd_rank},
        {"simulate", "compare two rankings as SIR seed sets", cmd_simulate},
        {"report", "summarize the rankings in a run directory", cmd_report},
        {"pipeline", "ingest, embed, rank, simulate and report in one go", cmd_pipeline},
    };
    for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    try {
        RunConfig config;
        if (!config_file.empty()) apply_config_text(config, io::read_file(config_file));
        for (const auto& field : config_fields()) {
            std::string name = "--" + std::string(field.key);
            std::replace(name.begin(), name.end(), '_', '-');
            if (app.count(name) == 0) continue;
            const std::string key(field.key);
            field.set(config, field.is_flag ? std::string(flags[key] ? "true" : "false") : values[key]);
        }
        Command fn = nullptr;
        for (const auto& [name, help, f] : commands)
            if (name == command) fn = f;
        const int rc = fn(config, out);
        if (rc == kExitOk) {
            io::write_file_atomic(config.out / (command + ".config"), "# noderank " + command + "\n" + serialize(config));
        }
        return rc;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
}

}  // namespace noderank::app
