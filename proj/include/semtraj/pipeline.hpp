#pragma once
// The staged execution of the whole flow: encode -> shingle -> partition ->
// score -> filter -> communities, with per-stage timing and a guarantee that
// outputs are identical for every worker count. The monolithic mode runs the
// same logic as one opaque single-worker stage, kept for benchmark contrast
// with the staged decomposition.

#include "semtraj/community.hpp"
#include "semtraj/engine.hpp"
#include "semtraj/eval.hpp"
#include "semtraj/model.hpp"
#include "semtraj/partitioner.hpp"

namespace semtraj {

struct Dataset {
    SemanticForest forest;
    std::vector<Trajectory> trajectories;
};

enum class ExecMode { staged, monolithic };

struct PipelineConfig {
    SimilarityConfig sim = SimilarityConfig::defaults();
    int workers = 1;
    ExecMode mode = ExecMode::staged;
    PartitionOptions partition;
    CliqueOptions cliques;
};

struct PipelineResult {
    std::vector<ScoredPair> similar;    // score > threshold, sorted by (id1, id2)
    std::vector<Community> communities; // sorted
    EvalReport report;                  // timings, candidate count, workers
};

// Encode every trajectory against the forest, in input order.
std::vector<EncodedTrajectory> encode_all(const SemanticForest& forest,
                                          std::span<const Trajectory> trajectories, WorkerPool& pool);

PipelineResult run_pipeline(const Dataset& dataset, const PipelineConfig& cfg);

} // namespace semtraj
