#pragma once
// Reference competitors for the hashing pipeline: the centralized all-pairs
// scorer (the accuracy ground truth) and a set-based MinHash LSH candidate
// generator, which ignores visiting order and multiplicity by construction.

#include "semtraj/engine.hpp"
#include "semtraj/model.hpp"
#include "semtraj/partitioner.hpp"
#include "semtraj/similarity.hpp"

namespace semtraj {

// Scores every one of the N(N-1)/2 pairs. Ground truth for the QA metrics;
// quadratic on purpose. Throws EmptyResult for fewer than two trajectories.
std::vector<ScoredPair> centralized_all_pairs(std::span<const EncodedTrajectory> ets,
                                              const SimilarityConfig& cfg, WorkerPool& pool);

// Same scan, but keeps only pairs with score > threshold. This is what the
// oracle pipeline runs at scale, where materializing every pair is waste.
// Returns the kept pairs; pairs_scored reports the full comparison count.
std::vector<ScoredPair> centralized_similar(std::span<const EncodedTrajectory> ets,
                                            const SimilarityConfig& cfg, double threshold,
                                            WorkerPool& pool, std::uint64_t* pairs_scored = nullptr);

struct MinHashOptions {
    int num_hashes = 128;
    int bands = 32; // must divide num_hashes
    std::uint64_t seed = 1;
};

// Candidate pairs from banded MinHash over each trajectory's set of visited
// place types. Order and repetition are discarded before hashing -- the
// documented weakness this baseline exists to exhibit. Deterministic under
// a fixed seed.
CandidatePairSet minhash_candidates(std::span<const EncodedTrajectory> ets,
                                    const MinHashOptions& opts, WorkerPool& pool);

} // namespace semtraj
