#pragma once
// Sequence-sensitive hashing: explode shingle sets into rows, group rows by
// shingle, and emit the deduplicated candidate pair set. Two trajectories
// become a candidate pair exactly when they share at least one shingle, and
// each pair is emitted once no matter how many shingles it shares.

#include "semtraj/engine.hpp"
#include "semtraj/model.hpp"
#include "semtraj/shingler.hpp"

#include <map>

namespace semtraj {

// One (shingle, trajectory) row of the exploded table.
struct ShingleRow {
    Shingle shingle;
    TrajectoryId id = 0;
};

// Canonical candidate pairs: (id1, id2) with id1 < id2, sorted, no duplicates.
struct CandidatePairSet {
    std::vector<std::pair<TrajectoryId, TrajectoryId>> pairs;

    bool contains(TrajectoryId a, TrajectoryId b) const {
        auto p = canonical_pair(a, b);
        return std::binary_search(pairs.begin(), pairs.end(), p);
    }
};

struct PartitionOptions {
    // Groups larger than this are paired in blocks; never dropped, the
    // recall guarantee forbids that.
    std::size_t max_group = 50'000;
    // Ceiling on the candidate-pair working set. Breaching it raises
    // ResourceExceeded instead of silently thrashing.
    std::uint64_t memory_budget_bytes = 4ull << 30;
};

// Flattens shingle sets into one row per (shingle, id). Row order follows
// the input sets, so the operation is lossless and deterministic.
std::vector<ShingleRow> explode(std::span<const ShingleSet> shingle_sets);

// Groups rows by shingle and pairs the trajectories within each group.
// Output is independent of row order and worker count.
CandidatePairSet candidate_pairs(std::span<const ShingleRow> rows, WorkerPool& pool,
                                 const PartitionOptions& opts = {});
CandidatePairSet candidate_pairs(std::span<const ShingleRow> rows);

// Group-size distribution and skew summary of the shingle partitions.
struct PartitionStats {
    std::size_t rows = 0;
    std::size_t groups = 0;
    std::size_t max_group = 0;
    double mean_group = 0.0;
    double max_mean_ratio = 0.0;
    // candidate-pair slots before dedup: sum over groups of C(size, 2)
    std::uint64_t pair_slots = 0;
    std::map<std::size_t, std::size_t> size_histogram;
};

PartitionStats partition_stats(std::span<const ShingleRow> rows);

namespace detail {

// Pair emission over pre-keyed rows; shared with the MinHash baseline whose
// band buckets are already 64-bit keys.
CandidatePairSet pairs_from_keyed_rows(std::vector<std::pair<std::uint64_t, TrajectoryId>> rows,
                                       WorkerPool& pool, const PartitionOptions& opts);

} // namespace detail

} // namespace semtraj
