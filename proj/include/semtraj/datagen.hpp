#pragma once
// Seeded synthetic data: a forest of places spread over a type/class
// hierarchy, and random trajectories with optional planted similar groups
// so recall tests have known positives to find.

#include "semtraj/encoder.hpp"
#include "semtraj/model.hpp"

#include <optional>

namespace semtraj {

struct ForestGenConfig {
    std::size_t num_places = 10'000;
    int num_types = 30;
    int classes_per_type = 10;
    std::uint64_t seed = 1;
};

// Three-level forest (type.class.name). The first num_types*classes_per_type
// places cover every class once, the rest draw classes uniformly; name codes
// count up within each class in creation order. Byte-identical under a seed.
ForestSource gen_forest(const ForestGenConfig& cfg);

// Groups of trajectories that share an ordered subsequence of places agreeing
// on the first `level` components. level = forest levels (the default, 0)
// plants identical place names, which makes intra-group pairs similar at
// every level; level = 1 plants only matching types.
struct PlantSpec {
    std::size_t groups = 0;
    std::size_t group_size = 0;
    std::size_t subseq_len = 0;
    int level = 0; // 0 = deepest level
};

struct TrajectoryGenConfig {
    std::size_t count = 0;
    std::size_t len_min = 5;
    std::size_t len_max = 10;
    std::uint64_t seed = 1;
    // 0 disables; otherwise places are drawn Zipf(exponent) by entry rank,
    // which concentrates visits and stresses partition skew handling.
    double zipf_exponent = 0.0;
    std::optional<PlantSpec> plant;
};

// Ids are 1..count; planted groups occupy the lowest ids, group by group.
// Generation is a single seeded stream, so output never depends on worker
// count or platform.
std::vector<Trajectory> gen_trajectories(const TrajectoryGenConfig& cfg, const SemanticForest& forest);

} // namespace semtraj
