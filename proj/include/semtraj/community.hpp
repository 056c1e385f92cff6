#pragma once
// Communities of common interest: the maximal cliques of the graph whose
// edges are trajectory pairs above the similarity threshold.

#include "semtraj/engine.hpp"
#include "semtraj/model.hpp"

namespace semtraj {

// Undirected simple graph over the ids that appear in at least one pair.
// Vertices are dense indices into `ids` (sorted ascending); adjacency lists
// are sorted.
struct SimilarityGraph {
    std::vector<TrajectoryId> ids;
    std::vector<std::vector<std::uint32_t>> adj;

    std::size_t vertex_count() const { return ids.size(); }
    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto& a : adj) twice += a.size();
        return twice / 2;
    }
};

SimilarityGraph build_graph(std::span<const ScoredPair> similar);

struct CliqueOptions {
    std::size_t min_size = 2;          // a single user is not a community
    std::size_t max_cliques = 1'000'000; // hard ceiling; exceeding it throws
};

// Complete maximal-clique enumeration (Bron-Kerbosch with pivoting, outer
// loop in degeneracy order). Members are ascending within a community and
// communities are sorted lexicographically, so output is deterministic for
// any worker count and edge order. Throws ResourceExceeded past the ceiling.
std::vector<Community> maximal_cliques(const SimilarityGraph& graph, const CliqueOptions& opts,
                                       WorkerPool& pool);
std::vector<Community> maximal_cliques(const SimilarityGraph& graph, const CliqueOptions& opts = {});

} // namespace semtraj
