#pragma once
// Multi-level trajectory similarity: per-level longest-common-subsequence
// match counts |M_h| and their weighted sum (the MSS score). Level-h equality
// is prefix(h) equality, which is what makes the match counts non-increasing
// from the coarsest level down.

#include "semtraj/engine.hpp"
#include "semtraj/model.hpp"
#include "semtraj/partitioner.hpp"

#include <unordered_map>

namespace semtraj {

// Length of the longest common subsequence of two code sequences.
// kUnknownCode never matches, not even against itself.
std::uint32_t lcs_length(std::span<const Code> a, std::span<const Code> b);

// Scores one pair across all levels. Ids are canonicalized in the result.
ScoredPair mss(const EncodedTrajectory& u, const EncodedTrajectory& v, const SimilarityConfig& cfg);

// Id -> encoded trajectory lookup for candidate scoring.
class TrajectoryIndex {
public:
    TrajectoryIndex() = default;
    explicit TrajectoryIndex(std::span<const EncodedTrajectory> ets);

    const EncodedTrajectory& at(TrajectoryId id) const; // throws MissingTrajectory
    std::size_t size() const { return by_id_.size(); }

private:
    std::unordered_map<TrajectoryId, const EncodedTrajectory*> by_id_;
};

// Scores every candidate pair via level expansion: each (pair, level) is an
// independent work unit computing the partial score beta_h * |M_h|; partials
// are then summed per pair in level order, a deterministic reduce. Output is
// sorted by (id1, id2), one ScoredPair per input pair.
std::vector<ScoredPair> score_candidates(const CandidatePairSet& pairs, const TrajectoryIndex& index,
                                         const SimilarityConfig& cfg, WorkerPool& pool);

// Keeps pairs with score strictly above the threshold.
std::vector<ScoredPair> filter_similar(std::vector<ScoredPair> scored, double threshold);

} // namespace semtraj
