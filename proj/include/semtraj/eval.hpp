#pragma once
// Accuracy metrics against the centralized ground truth (QA1 over
// communities, QA2 over similar pairs) and the timing harness.

#include "semtraj/model.hpp"
#include "semtraj/partitioner.hpp"

#include <optional>

namespace semtraj {

struct Dataset;
struct PipelineConfig;

struct EvalReport {
    std::optional<double> qa1;
    std::optional<double> qa2;
    std::uint64_t pairs_compared = 0;
    // (stage name, milliseconds), in execution order
    std::vector<std::pair<std::string, double>> stage_ms;
    double total_ms = 0.0;
    int worker_count = 1;
    std::string mode;
};

// Fraction of ground-truth communities recovered exactly (member-set
// equality). Throws UndefinedMetric when the ground truth is empty.
double qa1(std::span<const Community> dis, std::span<const Community> cen);

// Fraction of ground-truth similar pairs recovered.
double qa2(const CandidatePairSet& pairs_dis, const CandidatePairSet& pairs_cen);

inline CandidatePairSet to_pair_set(std::span<const ScoredPair> scored) {
    CandidatePairSet set;
    set.pairs.reserve(scored.size());
    for (const auto& sp : scored)
        set.pairs.push_back({sp.id1, sp.id2});
    std::sort(set.pairs.begin(), set.pairs.end());
    set.pairs.erase(std::unique(set.pairs.begin(), set.pairs.end()), set.pairs.end());
    return set;
}

// Runs the pipeline 1 + repeats times (the warmup is discarded), checks the
// non-timing outputs are identical across repeats, and reports the median
// per-stage wall clock.
EvalReport bench(const Dataset& dataset, const PipelineConfig& cfg, int repeats);

} // namespace semtraj
