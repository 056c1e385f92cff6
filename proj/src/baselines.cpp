#include "semtraj/baselines.hpp"

#include <algorithm>
#include <random>

namespace semtraj {

namespace {

// Flattened upper-triangle walk: block b covers pair indices [begin, end).
std::pair<std::size_t, std::size_t> unrank_pair(std::uint64_t t, std::size_t n) {
    // Find i such that i*(2n-i-1)/2 <= t < (i+1)*(2n-i-2)/2 via the closed
    // form, then clamp against rounding.
    double nn = static_cast<double>(n);
    double ti = std::floor(nn - 0.5 - std::sqrt((nn - 0.5) * (nn - 0.5) - 2.0 * static_cast<double>(t)));
    std::size_t i = static_cast<std::size_t>(std::max(0.0, ti));
    auto row_start = [&](std::size_t r) { return static_cast<std::uint64_t>(r) * (2 * n - r - 1) / 2; };
    while (i + 1 < n && row_start(i + 1) <= t)
        ++i;
    while (i > 0 && row_start(i) > t)
        --i;
    std::size_t j = i + 1 + static_cast<std::size_t>(t - row_start(i));
    return {i, j};
}

template <class Keep>
std::uint64_t scan_all_pairs(std::span<const EncodedTrajectory> ets, const SimilarityConfig& cfg,
                             WorkerPool& pool, std::vector<ScoredPair>& out, Keep keep) {
    cfg.validate();
    if (ets.size() < 2)
        throw EmptyResult("need at least two trajectories, got " + std::to_string(ets.size()));

    const std::size_t n = ets.size();
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;

    const std::size_t blocks = static_cast<std::size_t>(pool.workers()) * 8;
    std::vector<std::vector<ScoredPair>> block_out(blocks);
    pool.parallel_blocks(blocks, [&](std::size_t, std::size_t bb, std::size_t be) {
        for (std::size_t blk = bb; blk < be; ++blk) {
            std::uint64_t begin = total * blk / blocks;
            std::uint64_t end = total * (blk + 1) / blocks;
            if (begin >= end)
                continue;
            auto [i, j] = unrank_pair(begin, n);
            for (std::uint64_t t = begin; t < end; ++t) {
                ScoredPair sp = mss(ets[i], ets[j], cfg);
                if (keep(sp))
                    block_out[blk].push_back(std::move(sp));
                if (++j == n) {
                    ++i;
                    j = i + 1;
                }
            }
        }
    });

    std::size_t kept = 0;
    for (const auto& b : block_out) kept += b.size();
    out.reserve(out.size() + kept);
    for (auto& b : block_out)
        for (auto& sp : b) out.push_back(std::move(sp));
    std::sort(out.begin(), out.end(), [](const ScoredPair& a, const ScoredPair& b) {
        return std::tie(a.id1, a.id2) < std::tie(b.id1, b.id2);
    });
    return total;
}

} // namespace

std::vector<ScoredPair> centralized_all_pairs(std::span<const EncodedTrajectory> ets,
                                              const SimilarityConfig& cfg, WorkerPool& pool) {
    std::vector<ScoredPair> out;
    scan_all_pairs(ets, cfg, pool, out, [](const ScoredPair&) { return true; });
    return out;
}

std::vector<ScoredPair> centralized_similar(std::span<const EncodedTrajectory> ets,
                                            const SimilarityConfig& cfg, double threshold,
                                            WorkerPool& pool, std::uint64_t* pairs_scored) {
    std::vector<ScoredPair> out;
    std::uint64_t total = scan_all_pairs(ets, cfg, pool, out,
                                         [&](const ScoredPair& sp) { return sp.score > threshold; });
    if (pairs_scored)
        *pairs_scored = total;
    return out;
}

CandidatePairSet minhash_candidates(std::span<const EncodedTrajectory> ets,
                                    const MinHashOptions& opts, WorkerPool& pool) {
    if (opts.num_hashes < 1 || opts.bands < 1)
        throw InvalidConfig("num_hashes and bands must be >= 1");
    if (opts.num_hashes % opts.bands != 0)
        throw InvalidConfig("bands (" + std::to_string(opts.bands) + ") must divide num_hashes (" +
                            std::to_string(opts.num_hashes) + ")");

    // Universal hash family over a Mersenne prime, seeded once.
    constexpr std::uint64_t kPrime = (1ull << 61) - 1;
    const std::size_t nh = static_cast<std::size_t>(opts.num_hashes);
    std::vector<std::uint64_t> mult(nh), add(nh);
    std::mt19937_64 gen(opts.seed);
    for (std::size_t i = 0; i < nh; ++i) {
        mult[i] = gen() % (kPrime - 1) + 1;
        add[i] = gen() % kPrime;
    }

    // Per-trajectory type-presence sets (order and multiplicity dropped).
    bool any_type = false;
    std::vector<std::vector<Code>> type_sets(ets.size());
    pool.parallel_blocks(ets.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto types = ets[i].type_keys();
            std::vector<Code> set(types.begin(), types.end());
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            std::erase(set, kUnknownCode);
            type_sets[i] = std::move(set);
        }
    });
    for (const auto& s : type_sets)
        if (!s.empty()) { any_type = true; break; }
    if (!ets.empty() && !any_type)
        throw EmptyVocabulary("no trajectory has a known place type");

    // Signatures, then band keys: (band index, fingerprint of the band rows).
    const std::size_t rows_per_band = nh / static_cast<std::size_t>(opts.bands);
    std::vector<std::vector<std::pair<std::uint64_t, TrajectoryId>>> band_rows(ets.size());
    pool.parallel_blocks(ets.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<std::uint64_t> sig(nh);
        for (std::size_t i = begin; i < end; ++i) {
            if (type_sets[i].empty())
                continue; // nothing to hash; can never collide
            for (std::size_t f = 0; f < nh; ++f) {
                std::uint64_t best = ~0ull;
                for (Code c : type_sets[i]) {
                    unsigned __int128 v = static_cast<unsigned __int128>(mult[f]) *
                                              (static_cast<std::uint64_t>(c) + 1) + add[f];
                    best = std::min(best, static_cast<std::uint64_t>(v % kPrime));
                }
                sig[f] = best;
            }
            auto& rows = band_rows[i];
            rows.reserve(static_cast<std::size_t>(opts.bands));
            for (int b = 0; b < opts.bands; ++b) {
                std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(b);
                for (std::size_t r = 0; r < rows_per_band; ++r) {
                    h ^= sig[static_cast<std::size_t>(b) * rows_per_band + r];
                    h *= 1099511628211ULL;
                }
                rows.emplace_back(h, ets[i].id());
            }
        }
    });

    std::vector<std::pair<std::uint64_t, TrajectoryId>> all_rows;
    std::size_t total = 0;
    for (const auto& r : band_rows) total += r.size();
    all_rows.reserve(total);
    for (auto& r : band_rows)
        all_rows.insert(all_rows.end(), r.begin(), r.end());

    return detail::pairs_from_keyed_rows(std::move(all_rows), pool, PartitionOptions{});
}

} // namespace semtraj
