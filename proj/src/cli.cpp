#include "semtraj/cli.hpp"

#include "semtraj/baselines.hpp"
#include "semtraj/datagen.hpp"
#include "semtraj/encoder.hpp"
#include "semtraj/eval.hpp"
#include "semtraj/io.hpp"
#include "semtraj/pipeline.hpp"
#include "semtraj/shingler.hpp"
#include "semtraj/similarity.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace semtraj::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitResource = 4;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::input: return kExitInput;
    case ErrorKind::config: return kExitConfig;
    case ErrorKind::resource: return kExitResource;
    }
    return kExitConfig;
}

// Shared pipeline-ish options; each subcommand registers the subset it uses.
struct CommonOpts {
    int levels = 3;
    int k = 3;
    std::string weights_csv;
    double threshold = 2.0;
    int workers = WorkerPool::default_workers();
    std::string mode = "staged";
    std::uint64_t seed = 1;
    std::size_t max_group = 50'000;
    std::size_t memory_budget_mb = 4096;

    SimilarityConfig similarity() const {
        SimilarityConfig cfg = SimilarityConfig::defaults(levels);
        cfg.k = k;
        cfg.threshold = threshold;
        if (!weights_csv.empty()) {
            cfg.weights.clear();
            std::stringstream ss(weights_csv);
            std::string field;
            while (std::getline(ss, field, ',')) {
                try {
                    cfg.weights.push_back(std::stod(field));
                } catch (const std::exception&) {
                    throw InvalidConfig("bad weight '" + field + "'");
                }
            }
        }
        cfg.validate();
        if (!cfg.recall_guarantee_holds())
            std::cerr << "warning: k = " << cfg.k << " > floor(threshold) + 1 = "
                      << static_cast<int>(std::floor(cfg.threshold)) + 1
                      << "; the hashing stage may miss similar pairs\n";
        return cfg;
    }

    PipelineConfig pipeline() const {
        PipelineConfig cfg;
        cfg.sim = similarity();
        cfg.workers = workers;
        if (mode == "staged")
            cfg.mode = ExecMode::staged;
        else if (mode == "monolithic")
            cfg.mode = ExecMode::monolithic;
        else
            throw InvalidConfig("mode must be 'staged' or 'monolithic', got '" + mode + "'");
        cfg.partition.max_group = max_group;
        cfg.partition.memory_budget_bytes = static_cast<std::uint64_t>(memory_budget_mb) << 20;
        return cfg;
    }

    io::ReportConfigEcho echo(bool with_seed = false) const {
        io::ReportConfigEcho e;
        e.levels = levels;
        e.k = k;
        e.weights = similarity_weights_quiet();
        e.threshold = threshold;
        e.mode = mode;
        if (with_seed)
            e.seed = seed;
        return e;
    }

private:
    std::vector<double> similarity_weights_quiet() const {
        SimilarityConfig cfg = SimilarityConfig::defaults(levels);
        if (!weights_csv.empty()) {
            cfg.weights.clear();
            std::stringstream ss(weights_csv);
            std::string field;
            while (std::getline(ss, field, ','))
                cfg.weights.push_back(std::stod(field));
        }
        return cfg.weights;
    }
};

void add_similarity_flags(CLI::App* cmd, CommonOpts& opts, bool with_k = true) {
    cmd->add_option("--levels", opts.levels, "Hierarchy levels (default 3)");
    if (with_k)
        cmd->add_option("--k", opts.k, "Shingle length (default 3)");
    cmd->add_option("--weights", opts.weights_csv, "Comma list of level weights, must sum to 1");
    cmd->add_option("--threshold", opts.threshold, "Similarity threshold rho (default 2)");
}

void add_engine_flags(CLI::App* cmd, CommonOpts& opts, bool with_mode = true) {
    cmd->add_option("--workers", opts.workers, "Worker count (default: available parallelism)");
    if (with_mode)
        cmd->add_option("--mode", opts.mode, "Execution mode: staged|monolithic");
    cmd->add_option("--max-group", opts.max_group, "Block size for oversized shingle groups");
    cmd->add_option("--memory-budget-mb", opts.memory_budget_mb,
                    "Candidate-set memory ceiling in MiB");
}

Dataset load_dataset(const std::string& forest_path, const std::string& trajectories_path) {
    // sequential construction; gcc 11 fails to unwind earlier aggregate
    // members when a later initializer throws
    Dataset dataset{load_forest(io::read_forest_tsv(forest_path)), {}};
    dataset.trajectories = io::read_trajectories_jsonl(trajectories_path);
    return dataset;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void print_summary(const EvalReport& report, std::size_t similar, std::size_t communities) {
    std::cout << "pairs_compared=" << report.pairs_compared << " similar=" << similar
              << " communities=" << communities << " workers=" << report.worker_count;
    for (const auto& [stage, ms] : report.stage_ms)
        std::cout << ' ' << stage << "_ms=" << ms;
    std::cout << '\n';
}

// --- subcommand bodies -------------------------------------------------------

struct GenArgs {
    std::string out_forest, out_trajectories;
    std::size_t places = 10'000;
    int types = 30;
    int classes = 10;
    std::size_t count = 1000;
    std::size_t len_min = 5, len_max = 10;
    std::string plant_csv;
    std::string zipf = "off";
};

int cmd_gen(const GenArgs& args, const CommonOpts& common) {
    ForestGenConfig fcfg{args.places, args.types, args.classes, common.seed};
    ForestSource source = gen_forest(fcfg);
    io::write_forest_tsv(args.out_forest, source);
    SemanticForest forest = load_forest(source);

    TrajectoryGenConfig tcfg;
    tcfg.count = args.count;
    tcfg.len_min = args.len_min;
    tcfg.len_max = args.len_max;
    tcfg.seed = common.seed;
    if (args.zipf != "off") {
        try {
            tcfg.zipf_exponent = std::stod(args.zipf);
        } catch (const std::exception&) {
            throw InvalidConfig("--zipf expects 'off' or an exponent, got '" + args.zipf + "'");
        }
        if (tcfg.zipf_exponent <= 0)
            throw InvalidConfig("zipf exponent must be positive");
    }
    if (!args.plant_csv.empty()) {
        PlantSpec plant;
        std::vector<std::size_t> vals;
        std::stringstream ss(args.plant_csv);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                vals.push_back(static_cast<std::size_t>(std::stoull(field)));
            } catch (const std::exception&) {
                throw InvalidConfig("bad --plant value '" + field + "'");
            }
        }
        if (vals.size() != 3 && vals.size() != 4)
            throw InvalidConfig("--plant expects groups,size,len[,level]");
        plant.groups = vals[0];
        plant.group_size = vals[1];
        plant.subseq_len = vals[2];
        plant.level = vals.size() == 4 ? static_cast<int>(vals[3]) : 0;
        tcfg.plant = plant;
    }
    auto trajectories = gen_trajectories(tcfg, forest);
    io::write_trajectories_jsonl(args.out_trajectories, trajectories);
    std::cout << "wrote " << source.rows.size() << " places, " << trajectories.size()
              << " trajectories\n";
    return kExitOk;
}

struct PathArgs {
    std::string forest, trajectories, pairs, out, out_pairs, out_communities, report;
};

int cmd_encode(const PathArgs& paths, const CommonOpts& common) {
    Dataset dataset = load_dataset(paths.forest, paths.trajectories);
    WorkerPool pool(common.workers);
    auto encoded = encode_all(dataset.forest, dataset.trajectories, pool);
    io::write_encoded_jsonl(paths.out, encoded);
    std::cout << "encoded " << encoded.size() << " trajectories\n";
    return kExitOk;
}

int cmd_pairs(const PathArgs& paths, const CommonOpts& common) {
    Dataset dataset = load_dataset(paths.forest, paths.trajectories);
    PipelineConfig cfg = common.pipeline();
    WorkerPool pool(cfg.workers);
    auto encoded = encode_all(dataset.forest, dataset.trajectories, pool);
    std::vector<ShingleSet> sets =
        parallel_map(pool, std::span<const EncodedTrajectory>(encoded),
                     [&](const EncodedTrajectory& et) { return shingle_trajectory(et, cfg.sim.k); });
    auto rows = explode(sets);
    CandidatePairSet candidates = candidate_pairs(rows, pool, cfg.partition);
    io::write_pairs_csv(paths.out, candidates);
    std::cout << "candidates=" << candidates.pairs.size() << '\n';
    return kExitOk;
}

int cmd_score(const PathArgs& paths, const CommonOpts& common) {
    Dataset dataset = load_dataset(paths.forest, paths.trajectories);
    SimilarityConfig sim = common.similarity();
    if (sim.levels != dataset.forest.levels())
        throw ConfigMismatch("config levels do not match forest levels");
    CandidatePairSet pairs = io::read_pairs_csv(paths.pairs);
    WorkerPool pool(common.workers);
    auto encoded = encode_all(dataset.forest, dataset.trajectories, pool);
    TrajectoryIndex index(encoded);
    auto scored = score_candidates(pairs, index, sim, pool);
    io::write_scored_csv(paths.out, scored, sim.levels);
    std::cout << "scored=" << scored.size() << '\n';
    return kExitOk;
}

int cmd_run(const PathArgs& paths, const CommonOpts& common) {
    Dataset dataset = load_dataset(paths.forest, paths.trajectories);
    PipelineConfig cfg = common.pipeline();
    PipelineResult result = run_pipeline(dataset, cfg);
    io::write_scored_csv(paths.out_pairs, result.similar, cfg.sim.levels);
    io::write_communities_jsonl(paths.out_communities, result.communities);
    if (!paths.report.empty())
        io::write_report_json(paths.report, result.report, common.echo());
    print_summary(result.report, result.similar.size(), result.communities.size());
    return kExitOk;
}

int cmd_oracle(const PathArgs& paths, const CommonOpts& common) {
    Dataset dataset = load_dataset(paths.forest, paths.trajectories);
    SimilarityConfig sim = common.similarity();
    if (sim.levels != dataset.forest.levels())
        throw ConfigMismatch("config levels do not match forest levels");
    WorkerPool pool(common.workers);

    EvalReport report;
    report.worker_count = common.workers;
    report.mode = "centralized";
    auto t0 = std::chrono::steady_clock::now();
    auto encoded = encode_all(dataset.forest, dataset.trajectories, pool);
    report.stage_ms.emplace_back("encode", ms_since(t0));

    t0 = std::chrono::steady_clock::now();
    std::uint64_t scanned = 0;
    std::vector<ScoredPair> similar;
    if (encoded.size() >= 2)
        similar = centralized_similar(encoded, sim, sim.threshold, pool, &scanned);
    report.pairs_compared = scanned;
    report.stage_ms.emplace_back("score", ms_since(t0));

    t0 = std::chrono::steady_clock::now();
    auto graph = build_graph(similar);
    auto communities = maximal_cliques(graph, CliqueOptions{}, pool);
    report.stage_ms.emplace_back("community", ms_since(t0));
    for (const auto& [stage, ms] : report.stage_ms)
        report.total_ms += ms;

    io::write_scored_csv(paths.out_pairs, similar, sim.levels);
    io::write_communities_jsonl(paths.out_communities, communities);
    if (!paths.report.empty()) {
        auto echo = common.echo();
        echo.mode = "centralized";
        io::write_report_json(paths.report, report, echo);
    }
    print_summary(report, similar.size(), communities.size());
    return kExitOk;
}

int cmd_minhash(const PathArgs& paths, const CommonOpts& common, const MinHashOptions& mh) {
    Dataset dataset = load_dataset(paths.forest, paths.trajectories);
    SimilarityConfig sim = common.similarity();
    if (sim.levels != dataset.forest.levels())
        throw ConfigMismatch("config levels do not match forest levels");
    WorkerPool pool(common.workers);

    EvalReport report;
    report.worker_count = common.workers;
    report.mode = "minhash";
    auto t0 = std::chrono::steady_clock::now();
    auto encoded = encode_all(dataset.forest, dataset.trajectories, pool);
    report.stage_ms.emplace_back("encode", ms_since(t0));

    t0 = std::chrono::steady_clock::now();
    CandidatePairSet candidates;
    if (!encoded.empty())
        candidates = minhash_candidates(encoded, mh, pool);
    report.pairs_compared = candidates.pairs.size();
    report.stage_ms.emplace_back("minhash", ms_since(t0));

    t0 = std::chrono::steady_clock::now();
    TrajectoryIndex index(encoded);
    auto similar = filter_similar(score_candidates(candidates, index, sim, pool), sim.threshold);
    report.stage_ms.emplace_back("score", ms_since(t0));

    t0 = std::chrono::steady_clock::now();
    auto graph = build_graph(similar);
    auto communities = maximal_cliques(graph, CliqueOptions{}, pool);
    report.stage_ms.emplace_back("community", ms_since(t0));
    for (const auto& [stage, ms] : report.stage_ms)
        report.total_ms += ms;

    io::write_scored_csv(paths.out_pairs, similar, sim.levels);
    io::write_communities_jsonl(paths.out_communities, communities);
    if (!paths.report.empty()) {
        auto echo = common.echo(true);
        echo.mode = "minhash";
        io::write_report_json(paths.report, report, echo);
    }
    print_summary(report, similar.size(), communities.size());
    return kExitOk;
}

int cmd_communities(const PathArgs& paths, const CommonOpts& common) {
    auto scored = io::read_scored_csv(paths.pairs);
    auto similar = filter_similar(std::move(scored), common.threshold);
    auto graph = build_graph(similar);
    WorkerPool pool(common.workers);
    auto communities = maximal_cliques(graph, CliqueOptions{}, pool);
    io::write_communities_jsonl(paths.out, communities);
    std::cout << "communities=" << communities.size() << '\n';
    return kExitOk;
}

struct EvalArgs {
    std::string pairs, ref_pairs, communities, ref_communities, out;
};

int cmd_eval(const EvalArgs& args, const CommonOpts& common) {
    auto dis_pairs = to_pair_set(io::read_scored_csv(args.pairs));
    auto cen_pairs = to_pair_set(io::read_scored_csv(args.ref_pairs));
    auto dis_comm = io::read_communities_jsonl(args.communities);
    auto cen_comm = io::read_communities_jsonl(args.ref_communities);

    EvalReport report;
    report.qa1 = qa1(dis_comm, cen_comm);
    report.qa2 = qa2(dis_pairs, cen_pairs);
    report.worker_count = common.workers;
    report.mode = "eval";
    std::cout << "qa1=" << *report.qa1 << " qa2=" << *report.qa2 << '\n';
    if (!args.out.empty()) {
        auto echo = common.echo();
        echo.mode = "eval";
        io::write_report_json(args.out, report, echo);
    }
    return kExitOk;
}

int cmd_bench(const PathArgs& paths, const CommonOpts& common, int repeats) {
    Dataset dataset = load_dataset(paths.forest, paths.trajectories);
    PipelineConfig cfg = common.pipeline();
    EvalReport report = bench(dataset, cfg, repeats);
    if (!paths.out.empty())
        io::write_report_json(paths.out, report, common.echo());
    std::cout << "pairs_compared=" << report.pairs_compared << " workers=" << report.worker_count
              << " total_ms=" << report.total_ms;
    for (const auto& [stage, ms] : report.stage_ms)
        std::cout << ' ' << stage << "_ms=" << ms;
    std::cout << '\n';
    return kExitOk;
}

} // namespace

int run(std::vector<std::string> args) {
    CLI::App app{"Semantic trajectory similarity and community search"};
    app.require_subcommand(1);

    CommonOpts common;
    GenArgs gen_args;
    PathArgs paths;
    EvalArgs eval_args;
    MinHashOptions mh;
    int repeats = 3;

    auto* gen = app.add_subcommand("gen", "Generate a synthetic forest and trajectories");
    gen->add_option("--out-forest", gen_args.out_forest)->required();
    gen->add_option("--out-trajectories", gen_args.out_trajectories)->required();
    gen->add_option("--places", gen_args.places, "Number of places (default 10000)");
    gen->add_option("--types", gen_args.types, "Place types (default 30)");
    gen->add_option("--classes", gen_args.classes, "Classes per type (default 10)");
    gen->add_option("--count", gen_args.count, "Trajectory count");
    gen->add_option("--len-min", gen_args.len_min);
    gen->add_option("--len-max", gen_args.len_max);
    gen->add_option("--seed", common.seed, "Generator seed (default 1)");
    gen->add_option("--plant", gen_args.plant_csv, "Planted groups: groups,size,len[,level]");
    gen->add_option("--zipf", gen_args.zipf, "Zipf exponent for place draws, or 'off'");

    auto* encode = app.add_subcommand("encode", "Encode trajectories against a forest");
    encode->add_option("--forest", paths.forest)->required();
    encode->add_option("--trajectories", paths.trajectories)->required();
    encode->add_option("--out", paths.out)->required();
    encode->add_option("--workers", common.workers);

    auto* pairs = app.add_subcommand("pairs", "Emit hashing candidate pairs");
    pairs->add_option("--forest", paths.forest)->required();
    pairs->add_option("--trajectories", paths.trajectories)->required();
    pairs->add_option("--out", paths.out)->required();
    pairs->add_option("--k", common.k);
    add_engine_flags(pairs, common, false);

    auto* score = app.add_subcommand("score", "Score listed candidate pairs (unfiltered)");
    score->add_option("--forest", paths.forest)->required();
    score->add_option("--trajectories", paths.trajectories)->required();
    score->add_option("--pairs", paths.pairs)->required();
    score->add_option("--out", paths.out)->required();
    add_similarity_flags(score, common, false);
    score->add_option("--workers", common.workers);

    auto* runc = app.add_subcommand("run", "Full hashing pipeline: pairs, scores, communities");
    runc->add_option("--forest", paths.forest)->required();
    runc->add_option("--trajectories", paths.trajectories)->required();
    runc->add_option("--out-pairs", paths.out_pairs)->required();
    runc->add_option("--out-communities", paths.out_communities)->required();
    runc->add_option("--report", paths.report);
    add_similarity_flags(runc, common);
    add_engine_flags(runc, common);

    auto* oracle = app.add_subcommand("oracle", "Centralized all-pairs reference pipeline");
    oracle->add_option("--forest", paths.forest)->required();
    oracle->add_option("--trajectories", paths.trajectories)->required();
    oracle->add_option("--out-pairs", paths.out_pairs)->required();
    oracle->add_option("--out-communities", paths.out_communities)->required();
    oracle->add_option("--report", paths.report);
    add_similarity_flags(oracle, common, false);
    oracle->add_option("--workers", common.workers);

    auto* minhash = app.add_subcommand("minhash", "MinHash LSH baseline pipeline");
    minhash->add_option("--forest", paths.forest)->required();
    minhash->add_option("--trajectories", paths.trajectories)->required();
    minhash->add_option("--out-pairs", paths.out_pairs)->required();
    minhash->add_option("--out-communities", paths.out_communities)->required();
    minhash->add_option("--report", paths.report);
    minhash->add_option("--num-hashes", mh.num_hashes, "MinHash functions (default 128)");
    minhash->add_option("--bands", mh.bands, "LSH bands, must divide num-hashes (default 32)");
    minhash->add_option("--seed", mh.seed, "Hash family seed");
    add_similarity_flags(minhash, common, false);
    minhash->add_option("--workers", common.workers);

    auto* comm = app.add_subcommand("communities", "Maximal cliques from a scored-pairs file");
    comm->add_option("--pairs", paths.pairs)->required();
    comm->add_option("--out", paths.out)->required();
    comm->add_option("--threshold", common.threshold);
    comm->add_option("--workers", common.workers);

    auto* evalc = app.add_subcommand("eval", "QA metrics of one result against a reference");
    evalc->add_option("--pairs", eval_args.pairs)->required();
    evalc->add_option("--ref-pairs", eval_args.ref_pairs)->required();
    evalc->add_option("--communities", eval_args.communities)->required();
    evalc->add_option("--ref-communities", eval_args.ref_communities)->required();
    evalc->add_option("--out", eval_args.out);

    auto* benchc = app.add_subcommand("bench", "Timed pipeline runs with a warmup");
    benchc->add_option("--forest", paths.forest)->required();
    benchc->add_option("--trajectories", paths.trajectories)->required();
    benchc->add_option("--repeats", repeats, "Measured repeats (default 3)");
    benchc->add_option("--out", paths.out);
    add_similarity_flags(benchc, common);
    add_engine_flags(benchc, common);

    std::vector<char*> argv;
    std::string prog = "semtraj";
    argv.push_back(prog.data());
    for (auto& a : args)
        argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, returns 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help() << '\n';
        return kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_args, common);
        if (encode->parsed()) return cmd_encode(paths, common);
        if (pairs->parsed()) return cmd_pairs(paths, common);
        if (score->parsed()) return cmd_score(paths, common);
        if (runc->parsed()) return cmd_run(paths, common);
        if (oracle->parsed()) return cmd_oracle(paths, common);
        if (minhash->parsed()) return cmd_minhash(paths, common, mh);
        if (comm->parsed()) return cmd_communities(paths, common);
        if (evalc->parsed()) return cmd_eval(eval_args, common);
        if (benchc->parsed()) return cmd_bench(paths, common, repeats);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return kExitConfig;
}

} // namespace semtraj::cli
