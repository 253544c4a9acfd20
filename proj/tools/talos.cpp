// Experiment front end: dataset generation, attacks, purification, GCN
// training, metrics, report grids, and stage benchmarks. Each subcommand
// reads and writes files so stages can be re-run independently.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numeric>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "talos/attack.hpp"
#include "talos/dataset.hpp"
#include "talos/defense.hpp"
#include "talos/errors.hpp"
#include "talos/gcn.hpp"
#include "talos/io.hpp"
#include "talos/metrics.hpp"
#include "talos/run_config.hpp"
#include "talos/sbm.hpp"
#include "talos/similarity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace talos;

namespace {

struct Cli {
    std::string config_path;
    std::vector<std::string> overrides;
};

RunConfig load_config(const Cli& cli) {
    RunConfig cfg = cli.config_path.empty() ? RunConfig{} : RunConfig::from_file(cli.config_path);
    for (const auto& o : cli.overrides) cfg.apply_override(o);
    return cfg;
}

fs::path out_dir(const RunConfig& cfg) {
    fs::path dir = cfg.get_str("out_dir", ".");
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> config_header(const RunConfig& cfg) {
    return {"config: " + cfg.echo_json()};
}

void write_json(const fs::path& path, json j, const RunConfig& cfg) {
    j["config"] = json::parse(cfg.echo_json());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

Dataset load_dataset_from(const RunConfig& cfg) {
    return load_dataset(cfg.require_str("graph"), cfg.require_str("features"),
                        cfg.require_str("labels"), cfg.get_str("split", ""),
                        cfg.get_double("split_train", 0.1), cfg.get_double("split_val", 0.1),
                        cfg.get_int("seed", 0), cfg.get_bool("stratified", true));
}

GcnParams gcn_params_from(const RunConfig& cfg) {
    GcnParams p;
    p.hidden_dim = static_cast<int>(cfg.get_int("hidden_dim", 16));
    p.dropout = cfg.get_double("dropout", 0.5);
    p.lr = cfg.get_double("lr", 0.01);
    p.weight_decay = cfg.get_double("weight_decay", 5e-4);
    p.momentum = cfg.get_double("momentum", 0.9);
    p.max_epochs = static_cast<int>(cfg.get_int("max_epochs", 200));
    p.patience = static_cast<int>(cfg.get_int("patience", 30));
    p.seed = cfg.get_int("gcn_seed", cfg.get_int("seed", 0));
    return p;
}

PurifyConfig purify_config_from(const RunConfig& cfg, const Graph& g) {
    PurifyConfig pc;
    pc.alpha = cfg.has("alpha") ? cfg.get_double("alpha", 0.0)
                                : select_alpha(g, cfg.get_double("alpha_safety", 0.95));
    pc.resolvent.mode =
        cfg.get_bool("neumann", false) ? ResolventMode::neumann : ResolventMode::exact_solve;
    pc.resolvent.neumann_tol = cfg.get_double("neumann_tol", 1e-8);
    pc.resolvent.max_terms = static_cast<int>(cfg.get_int("max_terms", 64));
    return pc;
}

SbmParams sbm_params_from(const RunConfig& cfg) {
    SbmParams p;
    p.n = static_cast<int>(cfg.get_int("n", 400));
    p.classes = static_cast<int>(cfg.get_int("classes", 4));
    p.p_intra = cfg.get_double("p_intra", 0.05);
    p.p_inter = cfg.get_double("p_inter", 0.002);
    p.feature_dim = static_cast<int>(cfg.get_int("feature_dim", 64));
    p.feature_flip = cfg.get_double("feature_flip", 0.2);
    p.seed = cfg.get_int("seed", 0);
    p.train_frac = cfg.get_double("split_train", 0.1);
    p.val_frac = cfg.get_double("split_val", 0.1);
    p.stratified = cfg.get_bool("stratified", true);
    return p;
}

int attack_budget(const RunConfig& cfg, const Graph& g) {
    if (cfg.has("attack_budget")) return static_cast<int>(cfg.get_int("attack_budget", 0));
    double rate = cfg.get_double("attack_rate", 0.25);
    return static_cast<int>(std::ceil(rate * g.edge_count()));
}

AttackResult run_attack(const RunConfig& cfg, const Dataset& d) {
    std::string method = cfg.get_str("attack_method", "heterophilic");
    int budget = attack_budget(cfg, d.graph);
    std::uint64_t seed = cfg.get_int("attack_seed", cfg.get_int("seed", 0));
    if (method == "heterophilic") return inject_heterophilic(d, budget, seed);
    if (method == "random") return random_flip(d, budget, seed);
    if (method == "greedy") {
        PurifyConfig pc = purify_config_from(cfg, d.graph);
        return greedy_homophily_attack(d, budget, pc,
                                       static_cast<int>(cfg.get_int("candidate_pool", 256)),
                                       seed);
    }
    if (method == "indirect") {
        std::vector<int> targets;
        for (const auto& t : cfg.get_list("targets", {})) targets.push_back(std::stoi(t));
        if (targets.empty()) {
            // default: seeded sample of test nodes that have neighbors
            std::vector<int> pool;
            for (int v : d.split.test)
                if (d.graph.degree(v) > 0) pool.push_back(v);
            std::mt19937_64 rng(seed);
            std::shuffle(pool.begin(), pool.end(), rng);
            int want = static_cast<int>(cfg.get_int("target_count", 10));
            pool.resize(std::min<std::size_t>(pool.size(), want));
            std::sort(pool.begin(), pool.end());
            targets = pool;
        }
        return inject_indirect(d, targets, budget, seed);
    }
    throw ConfigError("unknown attack_method '" + method + "'");
}

struct PurifyRun {
    Dataset dataset;
    std::vector<Edge> removed;
    EdgeScoreTable table;  // talos method only
    double alpha = 0.0;
    std::string method;
};

PurifyRun run_purify(const RunConfig& cfg, const Dataset& d) {
    PurifyRun out;
    out.method = cfg.get_str("method", "talos");
    if (out.method == "jaccard") {
        auto res = jaccard_threshold_purify(d, cfg.get_double("threshold", 0.01));
        out.dataset = with_graph(d, res.graph);
        out.removed = res.removed;
        return out;
    }
    if (out.method == "second_order") {
        auto res = second_order_augment(d, cfg.get_double("threshold", 0.01));
        out.dataset = with_graph(d, res.graph);
        out.removed = res.removed;
        return out;
    }
    if (out.method != "talos") throw ConfigError("unknown purify method '" + out.method + "'");

    PurifyConfig pc = purify_config_from(cfg, d.graph);
    out.alpha = pc.alpha;
    std::string nr = cfg.get_str("removal_count", "auto");
    if (nr == "auto") {
        GcnParams gp = gcn_params_from(cfg);
        auto evaluator = [&](const Dataset& cand) { return gcn_train(cand, gp).val_accuracy; };
        pc.removal_count =
            sweep_removal_count(d, pc, auto_removal_grid(d.graph.edge_count()), evaluator);
    } else {
        pc.removal_count = static_cast<int>(cfg.get_int("removal_count", 0));
    }
    out.table = edge_scores(d, pc);
    PurifyResult res = purify(d, pc);
    out.dataset = res.dataset;
    for (const auto& e : res.removed) out.removed.emplace_back(e.u, e.v);
    return out;
}

json train_json(const TrainResult& r) {
    return {{"val_accuracy", r.val_accuracy},
            {"test_accuracy", r.test_accuracy},
            {"epochs_run", r.epochs_run},
            {"final_loss", r.loss_curve.empty() ? 0.0 : r.loss_curve.back()}};
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- subcommands ----

void cmd_gen(const RunConfig& cfg) {
    SbmResult sbm = generate_sbm(sbm_params_from(cfg));
    fs::path dir = out_dir(cfg);
    auto hdr = config_header(cfg);
    save_edge_list(dir / "graph.edges", sbm.dataset.graph.edges(), hdr);
    save_features(dir / "features.csv", sbm.dataset.features, hdr);
    save_labels(dir / "labels.txt", sbm.dataset.labels, hdr);
    save_split(dir / "split.txt", sbm.dataset.split, sbm.dataset.graph.node_count(), hdr);
    std::cout << "gen: n=" << sbm.dataset.graph.node_count()
              << " edges=" << sbm.dataset.graph.edge_count()
              << " homophily=" << measure_edge_homophily(sbm.dataset) << "\n";
}

void cmd_attack(const RunConfig& cfg) {
    Dataset d = load_dataset_from(cfg);
    AttackResult res = run_attack(cfg, d);
    fs::path dir = out_dir(cfg);
    save_edge_list(dir / "attacked.edges", res.dataset.graph.edges(), config_header(cfg));
    res.record.save_json(dir / "attack.json", cfg.echo_json());
    std::cout << "attack: method=" << res.record.method
              << " injected=" << res.record.injected.size() << "\n";
}

void cmd_purify(const RunConfig& cfg) {
    Dataset d = load_dataset_from(cfg);
    PurifyRun res = run_purify(cfg, d);
    fs::path dir = out_dir(cfg);
    auto hdr = config_header(cfg);
    save_edge_list(dir / "purified.edges", res.dataset.graph.edges(), hdr);
    save_edge_list(dir / "removed.edges", res.removed, hdr);
    if (res.method == "talos") res.table.save_csv(dir / "scores.csv", hdr);
    write_json(dir / "purify.json",
               {{"method", res.method},
                {"alpha", res.alpha},
                {"removed", res.removed.size()},
                {"edges_before", d.graph.edge_count()},
                {"edges_after", res.dataset.graph.edge_count()}},
               cfg);
    std::cout << "purify: method=" << res.method << " removed=" << res.removed.size() << "\n";
}

void cmd_train(const RunConfig& cfg) {
    Dataset d = load_dataset_from(cfg);
    TrainResult r = gcn_train(d, gcn_params_from(cfg));
    fs::path dir = out_dir(cfg);
    write_json(dir / "train.json", train_json(r), cfg);
    std::ofstream curve(dir / "loss_curve.csv");
    curve << "epoch,loss\n";
    curve.precision(17);
    for (std::size_t i = 0; i < r.loss_curve.size(); ++i)
        curve << i << "," << r.loss_curve[i] << "\n";
    std::cout << "train: epochs=" << r.epochs_run << " val=" << r.val_accuracy
              << " test=" << r.test_accuracy << "\n";
}

void cmd_eval(const RunConfig& cfg) {
    EdgeScoreTable table = EdgeScoreTable::load_csv(cfg.require_str("scores"));
    AttackRecord record = AttackRecord::load_json(cfg.require_str("attack_record"));
    int bins = static_cast<int>(cfg.get_int("bins", 50));
    ScoreSplit split = split_scores(table, record);

    int k = static_cast<int>(
        cfg.get_int("removal_count", static_cast<long long>(record.injected.size())));
    k = std::min<int>(k, static_cast<int>(table.entries.size()));
    std::vector<Edge> removed;
    for (int i = 0; i < k; ++i) removed.emplace_back(table.entries[i].u, table.entries[i].v);
    RecoveryPR pr = recovery_pr(removed, record);

    fs::path dir = out_dir(cfg);
    export_histograms(split, bins, dir / "histograms.csv", config_header(cfg));
    write_json(dir / "eval.json",
               {{"ks", ks_statistic(split)},
                {"sr", separation_rate(split, bins)},
                {"bins", bins},
                {"precision", pr.precision},
                {"recall", pr.recall},
                {"removed", k}},
               cfg);
    std::cout << "eval: ks=" << ks_statistic(split) << " sr=" << separation_rate(split, bins)
              << " precision=" << pr.precision << " recall=" << pr.recall << "\n";
}

struct ReportCell {
    std::uint64_t seed;
    double rate;
    std::string method;
    json row;
    bool ordering_ok;
};

ReportCell run_cell(const RunConfig& cfg, std::uint64_t seed, double rate,
                    const std::string& method) {
    SbmParams sp = sbm_params_from(cfg);
    sp.seed = seed;
    Dataset clean = generate_sbm(sp).dataset;

    RunConfig cell = cfg;
    cell.set("seed", std::to_string(seed));
    cell.set("attack_seed", std::to_string(seed));
    cell.set("attack_method", method);
    cell.set("attack_rate", std::to_string(rate));
    AttackResult atk = run_attack(cell, clean);

    PurifyConfig pc = purify_config_from(cell, atk.dataset.graph);
    pc.removal_count = static_cast<int>(atk.record.injected.size());
    if (cell.get_str("removal_count", "budget") != "budget")
        pc.removal_count = static_cast<int>(cell.get_int("removal_count", pc.removal_count));
    EdgeScoreTable table = edge_scores(atk.dataset, pc);
    PurifyResult pur = purify(atk.dataset, pc);

    GcnParams gp = gcn_params_from(cell);
    TrainResult t_clean = gcn_train(clean, gp);
    TrainResult t_attacked = gcn_train(atk.dataset, gp);
    TrainResult t_purified = gcn_train(pur.dataset, gp);

    ScoreSplit split = split_scores(table, atk.record);
    std::vector<Edge> removed;
    for (const auto& e : pur.removed) removed.emplace_back(e.u, e.v);
    RecoveryPR pr = recovery_pr(removed, atk.record);
    int bins = static_cast<int>(cell.get_int("bins", 50));

    ReportCell out;
    out.seed = seed;
    out.rate = rate;
    out.method = method;
    out.ordering_ok = t_clean.test_accuracy >= t_purified.test_accuracy &&
                      t_purified.test_accuracy >= t_attacked.test_accuracy;
    out.row = {{"seed", seed},
               {"rate", rate},
               {"method", method},
               {"alpha", pc.alpha},
               {"injected", atk.record.injected.size()},
               {"removed", pur.removed.size()},
               {"acc_clean", t_clean.test_accuracy},
               {"acc_attacked", t_attacked.test_accuracy},
               {"acc_purified", t_purified.test_accuracy},
               {"ks", ks_statistic(split)},
               {"sr", separation_rate(split, bins)},
               {"precision", pr.precision},
               {"recall", pr.recall}};
    return out;
}

void cmd_report(const RunConfig& cfg) {
    std::vector<std::uint64_t> seeds;
    for (const auto& s : cfg.get_list("seeds", {"0"})) seeds.push_back(std::stoull(s));
    std::vector<double> rates;
    for (const auto& r : cfg.get_list("rates", {"0.25"})) rates.push_back(std::stod(r));
    std::vector<std::string> methods = cfg.get_list("methods", {"heterophilic"});
    int jobs = std::max(1, static_cast<int>(cfg.get_int("jobs", 1)));

    struct CellSpec {
        std::uint64_t seed;
        double rate;
        std::string method;
    };
    std::vector<CellSpec> specs;
    for (const auto& m : methods)
        for (double r : rates)
            for (auto s : seeds) specs.push_back({s, r, m});

    std::vector<ReportCell> cells(specs.size());
    for (std::size_t base = 0; base < specs.size(); base += jobs) {
        std::vector<std::future<ReportCell>> batch;
        for (std::size_t i = base; i < std::min(base + jobs, specs.size()); ++i)
            batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                       [&, i] {
                                           return run_cell(cfg, specs[i].seed, specs[i].rate,
                                                           specs[i].method);
                                       }));
        for (std::size_t i = 0; i < batch.size(); ++i) cells[base + i] = batch[i].get();
    }

    json rows = json::array();
    for (auto& c : cells) {
        if (!c.ordering_ok)
            std::cerr << "warning: accuracy ordering clean >= purified >= attacked violated "
                      << "(seed=" << c.seed << " rate=" << c.rate << " method=" << c.method
                      << ")\n";
        rows.push_back(c.row);
    }

    fs::path dir = out_dir(cfg);
    write_json(dir / "report.json", {{"rows", rows}}, cfg);
    std::ofstream csv(dir / "report.csv");
    csv << "# config: " << cfg.echo_json() << "\n";
    csv << "method,rate,seed,alpha,injected,removed,acc_clean,acc_attacked,acc_purified,"
           "ks,sr,precision,recall\n";
    csv.precision(17);
    for (const auto& r : rows)
        csv << r["method"].get<std::string>() << "," << r["rate"].get<double>() << ","
            << r["seed"].get<std::uint64_t>() << "," << r["alpha"].get<double>() << ","
            << r["injected"].get<std::size_t>() << "," << r["removed"].get<std::size_t>() << ","
            << r["acc_clean"].get<double>() << "," << r["acc_attacked"].get<double>() << ","
            << r["acc_purified"].get<double>() << "," << r["ks"].get<double>() << ","
            << r["sr"].get<double>() << "," << r["precision"].get<double>() << ","
            << r["recall"].get<double>() << "\n";
    std::cout << "report: " << rows.size() << " cells -> " << (dir / "report.csv") << "\n";
}

void cmd_bench(const RunConfig& cfg) {
    int reps = static_cast<int>(cfg.get_int("repetitions", 10));
    if (reps < 1) throw ConfigError("repetitions must be >= 1");

    std::map<std::string, std::vector<double>> samples;
    for (int rep = 0; rep < reps; ++rep) {
        SbmParams sp = sbm_params_from(cfg);
        sp.seed = cfg.get_int("seed", 0) + rep;

        auto t0 = std::chrono::steady_clock::now();
        Dataset clean = generate_sbm(sp).dataset;
        samples["gen"].push_back(elapsed(t0));

        RunConfig cell = cfg;
        cell.set("attack_seed", std::to_string(sp.seed));
        t0 = std::chrono::steady_clock::now();
        AttackResult atk = run_attack(cell, clean);
        samples["attack"].push_back(elapsed(t0));

        PurifyConfig pc = purify_config_from(cell, atk.dataset.graph);
        pc.removal_count = static_cast<int>(atk.record.injected.size());
        t0 = std::chrono::steady_clock::now();
        PurifyResult pur = purify(atk.dataset, pc);
        samples["purify"].push_back(elapsed(t0));

        GcnParams gp = gcn_params_from(cell);
        gp.seed = sp.seed;
        t0 = std::chrono::steady_clock::now();
        gcn_train(clean, gp);
        gcn_train(atk.dataset, gp);
        gcn_train(pur.dataset, gp);
        samples["train"].push_back(elapsed(t0));
    }

    json stages = json::object();
    double total_mean = 0.0;
    for (const auto& [stage, xs] : samples) {
        double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        double stddev = xs.size() > 1 ? std::sqrt(var / (xs.size() - 1)) : 0.0;
        stages[stage] = {{"mean_s", mean}, {"stddev_s", stddev}, {"samples", xs}};
        total_mean += mean;
        std::cout << "bench: " << stage << " " << mean << " +- " << stddev << " s\n";
    }
    stages["total"] = {{"mean_s", total_mean}};
    std::cout << "bench: total " << total_mean << " s\n";
    write_json(out_dir(cfg) / "bench.json", {{"stages", stages}, {"repetitions", reps}}, cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Talos graph purification experiments"};
    app.require_subcommand(1);

    Cli cli;
    std::string chosen;
    for (const char* name : {"gen", "attack", "purify", "train", "eval", "report", "bench"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", cli.config_path, "flat JSON config file");
        sub->add_option("--set", cli.overrides, "key=value override (repeatable)");
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : ConfigError::exit_code;
    }

    try {
        RunConfig cfg = load_config(cli);
        if (chosen == "gen") cmd_gen(cfg);
        else if (chosen == "attack") cmd_attack(cfg);
        else if (chosen == "purify") cmd_purify(cfg);
        else if (chosen == "train") cmd_train(cfg);
        else if (chosen == "eval") cmd_eval(cfg);
        else if (chosen == "report") cmd_report(cfg);
        else if (chosen == "bench") cmd_bench(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config-error: " << e.what() << "\n";
        return ConfigError::exit_code;
    } catch (const DataError& e) {
        std::cerr << "data-error: " << e.what() << "\n";
        return DataError::exit_code;
    } catch (const NumericError& e) {
        std::cerr << "numeric-error: " << e.what() << "\n";
        return NumericError::exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
