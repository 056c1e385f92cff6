#include "semtraj/pipeline.hpp"

#include "semtraj/encoder.hpp"
#include "semtraj/shingler.hpp"
#include "semtraj/similarity.hpp"

#include <bit>
#include <chrono>

namespace semtraj {

namespace {

class StageClock {
public:
    explicit StageClock(EvalReport& report) : report_(report), start_(now()) {}

    void mark(const std::string& stage) {
        auto t = now();
        report_.stage_ms.emplace_back(stage, ms(t - start_));
        start_ = t;
    }

private:
    using Clock = std::chrono::steady_clock;
    static Clock::time_point now() { return Clock::now(); }
    static double ms(Clock::duration d) {
        return std::chrono::duration<double, std::milli>(d).count();
    }

    EvalReport& report_;
    Clock::time_point start_;
};

void check_unique_ids(std::span<const Trajectory> trajectories) {
    std::vector<TrajectoryId> ids;
    ids.reserve(trajectories.size());
    for (const auto& t : trajectories)
        ids.push_back(t.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw MalformedInput("duplicate trajectory ids in dataset");
}

// Packed shingles when every type code fits: k * bits <= 63.
int packed_bits(const SemanticForest& forest, int k) {
    Code max_type = 0;
    for (const auto& entry : forest.entries())
        max_type = std::max(max_type, entry.level_keys[0]);
    int bits = std::bit_width(static_cast<std::uint64_t>(max_type) + 1);
    return static_cast<std::size_t>(bits) * static_cast<std::size_t>(k) <= 63 ? bits : 0;
}

PipelineResult run_stages(const Dataset& dataset, const PipelineConfig& cfg, WorkerPool& pool) {
    PipelineResult result;
    result.report.worker_count = pool.workers();
    StageClock clock(result.report);

    auto encoded = encode_all(dataset.forest, dataset.trajectories, pool);
    clock.mark("encode");

    CandidatePairSet candidates;
    if (int bits = packed_bits(dataset.forest, cfg.sim.k); bits > 0) {
        std::vector<std::vector<std::uint64_t>> packed =
            parallel_map(pool, std::span<const EncodedTrajectory>(encoded),
                         [&](const EncodedTrajectory& et) {
                             return k_shingles_packed(et.type_keys(), cfg.sim.k, bits);
                         });
        clock.mark("shingle");

        // explode into (key, id) rows at precomputed offsets, in parallel
        std::vector<std::size_t> offsets(packed.size() + 1, 0);
        for (std::size_t i = 0; i < packed.size(); ++i)
            offsets[i + 1] = offsets[i] + packed[i].size();
        std::vector<std::pair<std::uint64_t, TrajectoryId>> rows(offsets.back());
        pool.parallel_blocks(packed.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                std::size_t at = offsets[i];
                for (std::uint64_t key : packed[i])
                    rows[at++] = {key, encoded[i].id()};
            }
        });
        packed.clear();
        packed.shrink_to_fit();
        candidates = detail::pairs_from_keyed_rows(std::move(rows), pool, cfg.partition);
    } else {
        std::vector<ShingleSet> shingle_sets =
            parallel_map(pool, std::span<const EncodedTrajectory>(encoded),
                         [&](const EncodedTrajectory& et) { return shingle_trajectory(et, cfg.sim.k); });
        clock.mark("shingle");

        auto rows = explode(shingle_sets);
        shingle_sets.clear();
        shingle_sets.shrink_to_fit();
        candidates = candidate_pairs(rows, pool, cfg.partition);
    }
    result.report.pairs_compared = candidates.pairs.size();
    clock.mark("partition");

    TrajectoryIndex index(encoded);
    auto scored = score_candidates(candidates, index, cfg.sim, pool);
    candidates.pairs.clear();
    candidates.pairs.shrink_to_fit();
    result.similar = filter_similar(std::move(scored), cfg.sim.threshold);
    clock.mark("score");

    auto graph = build_graph(result.similar);
    result.communities = maximal_cliques(graph, cfg.cliques, pool);
    clock.mark("community");
    return result;
}

// The user-defined-function shape: everything fused into one stage the
// substrate cannot see into, executed on a single worker.
PipelineResult run_monolithic(const Dataset& dataset, const PipelineConfig& cfg) {
    WorkerPool solo(1);
    PipelineResult result;
    result.report.worker_count = 1;
    StageClock clock(result.report);

    auto encoded = encode_all(dataset.forest, dataset.trajectories, solo);
    std::vector<ShingleSet> shingle_sets;
    shingle_sets.reserve(encoded.size());
    for (const auto& et : encoded)
        shingle_sets.push_back(shingle_trajectory(et, cfg.sim.k));
    auto rows = explode(shingle_sets);
    CandidatePairSet candidates = candidate_pairs(rows, solo, cfg.partition);
    result.report.pairs_compared = candidates.pairs.size();
    TrajectoryIndex index(encoded);
    auto scored = score_candidates(candidates, index, cfg.sim, solo);
    result.similar = filter_similar(std::move(scored), cfg.sim.threshold);
    auto graph = build_graph(result.similar);
    result.communities = maximal_cliques(graph, cfg.cliques, solo);
    clock.mark("monolithic");
    return result;
}

} // namespace

std::vector<EncodedTrajectory> encode_all(const SemanticForest& forest,
                                          std::span<const Trajectory> trajectories, WorkerPool& pool) {
    return parallel_map(pool, trajectories,
                        [&](const Trajectory& t) { return encode_trajectory(t, forest); });
}

PipelineResult run_pipeline(const Dataset& dataset, const PipelineConfig& cfg) {
    cfg.sim.validate();
    if (cfg.workers < 1)
        throw InvalidConfig("workers must be >= 1, got " + std::to_string(cfg.workers));
    if (cfg.sim.levels != dataset.forest.levels())
        throw ConfigMismatch("config levels (" + std::to_string(cfg.sim.levels) +
                             ") do not match forest levels (" +
                             std::to_string(dataset.forest.levels()) + ")");
    check_unique_ids(dataset.trajectories);

    PipelineResult result;
    if (dataset.trajectories.empty()) {
        result.report.worker_count = cfg.workers;
        result.report.mode = cfg.mode == ExecMode::staged ? "staged" : "monolithic";
        return result;
    }

    if (cfg.mode == ExecMode::monolithic) {
        result = run_monolithic(dataset, cfg);
        result.report.mode = "monolithic";
    } else {
        WorkerPool pool(cfg.workers);
        result = run_stages(dataset, cfg, pool);
        result.report.mode = "staged";
    }
    for (const auto& [stage, ms] : result.report.stage_ms)
        result.report.total_ms += ms;
    return result;
}

} // namespace semtraj
