#include "semtraj/similarity.hpp"

#include <algorithm>

namespace semtraj {

std::uint32_t lcs_length(std::span<const Code> a, std::span<const Code> b) {
    if (a.empty() || b.empty())
        return 0;
    // Two-row dynamic program over lengths; the matched sequence itself is
    // never needed downstream. Rows live in thread-local scratch since this
    // sits in the per-pair hot loop.
    thread_local std::vector<std::uint32_t> prev, cur;
    prev.assign(b.size() + 1, 0);
    cur.assign(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        const Code ai = a[i - 1];
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (ai == b[j - 1] && ai != kUnknownCode)
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

namespace {

void check_compatible(const EncodedTrajectory& u, const EncodedTrajectory& v,
                      const SimilarityConfig& cfg) {
    if (u.id() == v.id())
        throw InvalidPair("similarity of trajectory " + std::to_string(u.id()) + " with itself");
    if (u.levels() != cfg.levels || v.levels() != cfg.levels)
        throw ConfigMismatch("encoded levels (" + std::to_string(u.levels()) + ", " +
                             std::to_string(v.levels()) + ") do not match config levels " +
                             std::to_string(cfg.levels));
    if (u.forest_tag() != v.forest_tag())
        throw ConfigMismatch("trajectories " + std::to_string(u.id()) + " and " +
                             std::to_string(v.id()) + " were encoded against different forests");
}

ScoredPair assemble(TrajectoryId a, TrajectoryId b, const SimilarityConfig& cfg,
                    std::vector<std::uint32_t> matches) {
    for (std::size_t h = 1; h < matches.size(); ++h)
        if (matches[h] > matches[h - 1])
            throw std::logic_error("per-level matches must be non-increasing coarse to fine");

    ScoredPair sp;
    std::tie(sp.id1, sp.id2) = canonical_pair(a, b);
    double score = 0.0;
    for (std::size_t h = 0; h < matches.size(); ++h)
        score += cfg.weights[h] * static_cast<double>(matches[h]);
    sp.score = score;
    sp.per_level_matches = std::move(matches);
    return sp;
}

} // namespace

ScoredPair mss(const EncodedTrajectory& u, const EncodedTrajectory& v, const SimilarityConfig& cfg) {
    cfg.validate();
    check_compatible(u, v, cfg);

    std::vector<std::uint32_t> matches(static_cast<std::size_t>(cfg.levels));
    for (int h = 1; h <= cfg.levels; ++h)
        matches[static_cast<std::size_t>(h - 1)] = lcs_length(u.level_keys(h), v.level_keys(h));
    return assemble(u.id(), v.id(), cfg, std::move(matches));
}

TrajectoryIndex::TrajectoryIndex(std::span<const EncodedTrajectory> ets) {
    by_id_.reserve(ets.size());
    for (const auto& et : ets) {
        if (!by_id_.emplace(et.id(), &et).second)
            throw MalformedInput("duplicate trajectory id " + std::to_string(et.id()));
    }
}

const EncodedTrajectory& TrajectoryIndex::at(TrajectoryId id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end())
        throw MissingTrajectory("trajectory id " + std::to_string(id) + " not in index");
    return *it->second;
}

std::vector<ScoredPair> score_candidates(const CandidatePairSet& pairs, const TrajectoryIndex& index,
                                         const SimilarityConfig& cfg, WorkerPool& pool) {
    cfg.validate();
    const std::size_t n_pairs = pairs.pairs.size();
    const std::size_t n_levels = static_cast<std::size_t>(cfg.levels);

    // Resolve ids up front so a dangling id fails before any work unit runs.
    std::vector<const EncodedTrajectory*> u_of(n_pairs), v_of(n_pairs);
    pool.parallel_blocks(n_pairs, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            u_of[p] = &index.at(pairs.pairs[p].first);
            v_of[p] = &index.at(pairs.pairs[p].second);
            check_compatible(*u_of[p], *v_of[p], cfg);
        }
    });

    // D6/D7: one work unit per (pair, level), each filling its own slot.
    std::vector<std::uint32_t> match_matrix(n_pairs * n_levels, 0);
    pool.parallel_blocks(n_pairs * n_levels, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t unit = begin; unit < end; ++unit) {
            const std::size_t p = unit / n_levels;
            const int h = static_cast<int>(unit % n_levels) + 1;
            match_matrix[unit] = lcs_length(u_of[p]->level_keys(h), v_of[p]->level_keys(h));
        }
    });

    // D8: per-pair aggregation, always in level order 1..n so the float sum
    // is identical no matter how the units were scheduled.
    std::vector<ScoredPair> out(n_pairs);
    pool.parallel_blocks(n_pairs, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            std::vector<std::uint32_t> matches(match_matrix.begin() + static_cast<std::ptrdiff_t>(p * n_levels),
                                               match_matrix.begin() + static_cast<std::ptrdiff_t>((p + 1) * n_levels));
            out[p] = assemble(pairs.pairs[p].first, pairs.pairs[p].second, cfg, std::move(matches));
        }
    });
    return out;
}

std::vector<ScoredPair> filter_similar(std::vector<ScoredPair> scored, double threshold) {
    std::erase_if(scored, [&](const ScoredPair& sp) { return !(sp.score > threshold); });
    return scored;
}

} // namespace semtraj
