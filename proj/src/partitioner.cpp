#include "semtraj/partitioner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <unordered_map>

namespace semtraj {

namespace {

using IdPair = std::pair<TrajectoryId, TrajectoryId>;

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

// Sorted-run pair emitter shared by the packed and generic paths. Rows must
// arrive sorted by (key, id); every maximal equal-key run is one group.
// Appends canonical pairs to `out`, compacting (sort+unique) whenever the
// buffer doubles, and accounts bytes against the budget.
template <class KeyedRow>
class PairEmitter {
public:
    PairEmitter(std::vector<IdPair>& out, const PartitionOptions& opts,
                std::atomic<std::uint64_t>& global_bytes)
        : out_(out), opts_(opts), global_bytes_(global_bytes) {}

    void run(std::span<const KeyedRow> sorted) {
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j].first == sorted[i].first)
                ++j;
            emit_group(sorted, i, j);
            i = j;
        }
        compact();
    }

private:
    void emit_group(std::span<const KeyedRow> rows, std::size_t begin, std::size_t end) {
        // ids within a run are ascending; drop duplicate (key, id) rows.
        ids_.clear();
        for (std::size_t r = begin; r < end; ++r)
            if (ids_.empty() || ids_.back() != rows[r].second)
                ids_.push_back(rows[r].second);

        const std::size_t block = opts_.max_group;
        for (std::size_t a0 = 0; a0 < ids_.size(); a0 += block) {
            std::size_t a1 = std::min(ids_.size(), a0 + block);
            for (std::size_t a = a0; a < a1; ++a) {
                for (std::size_t b = a + 1; b < ids_.size(); ++b)
                    out_.emplace_back(ids_[a], ids_[b]);
                // check every outer row: one row of an oversized group can
                // append group-size pairs, and the budget must see that
                // before the next row lands
                if (ids_.size() > block)
                    maybe_compact();
            }
            maybe_compact();
        }
    }

    void maybe_compact() {
        if (out_.size() >= compact_at_)
            compact();
    }

    void compact() {
        std::sort(out_.begin(), out_.end());
        out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
        compact_at_ = std::max<std::size_t>(out_.size() * 2, 1 << 16);

        std::uint64_t bytes = out_.size() * sizeof(IdPair);
        std::uint64_t prev = accounted_.exchange(bytes);
        global_bytes_ += bytes - prev;
        if (global_bytes_.load() > opts_.memory_budget_bytes)
            throw ResourceExceeded("candidate pair set exceeds memory budget of " +
                                   std::to_string(opts_.memory_budget_bytes) + " bytes");
    }

    std::vector<IdPair>& out_;
    const PartitionOptions& opts_;
    std::atomic<std::uint64_t>& global_bytes_;
    std::atomic<std::uint64_t> accounted_{0};
    std::vector<TrajectoryId> ids_;
    std::size_t compact_at_ = 1 << 16;
};

// Shard rows by key hash, sort each shard, emit pairs per shard, then merge
// with a global sort+unique. The final sort makes the output independent of
// sharding, so any worker count and any row order give identical pair sets.
template <class Key, class HashFn>
CandidatePairSet grouped_pairs(std::vector<std::pair<Key, TrajectoryId>> rows, WorkerPool& pool,
                               const PartitionOptions& opts, HashFn hash) {
    using KeyedRow = std::pair<Key, TrajectoryId>;
    const std::size_t shards = static_cast<std::size_t>(pool.workers());

    std::vector<std::vector<std::vector<KeyedRow>>> buckets;
    const std::size_t block_count =
        rows.empty() ? 1 : std::min<std::size_t>(shards, rows.size());
    buckets.resize(block_count);
    pool.parallel_blocks(rows.size(), [&](std::size_t block, std::size_t begin, std::size_t end) {
        auto& local = buckets[block];
        local.resize(shards);
        for (auto& b : local)
            b.reserve((end - begin) / shards + 16);
        for (std::size_t i = begin; i < end; ++i)
            local[hash(rows[i].first) % shards].push_back(std::move(rows[i]));
    });
    rows.clear();
    rows.shrink_to_fit();

    std::atomic<std::uint64_t> global_bytes{0};
    std::vector<std::vector<IdPair>> shard_pairs(shards);
    pool.parallel_blocks(shards, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            std::vector<KeyedRow> mine;
            std::size_t total = 0;
            for (const auto& b : buckets)
                if (s < b.size()) total += b[s].size();
            mine.reserve(total);
            for (const auto& b : buckets)
                if (s < b.size()) mine.insert(mine.end(), b[s].begin(), b[s].end());
            std::sort(mine.begin(), mine.end());

            PairEmitter<KeyedRow> emitter(shard_pairs[s], opts, global_bytes);
            emitter.run(std::span<const KeyedRow>(mine));
        }
    });
    buckets.clear();

    CandidatePairSet result;
    std::size_t total = 0;
    for (const auto& sp : shard_pairs) total += sp.size();
    if (total * sizeof(IdPair) > opts.memory_budget_bytes)
        throw ResourceExceeded("candidate pair set exceeds memory budget of " +
                               std::to_string(opts.memory_budget_bytes) + " bytes");
    result.pairs.reserve(total);
    for (auto& sp : shard_pairs) {
        result.pairs.insert(result.pairs.end(), sp.begin(), sp.end());
        sp.clear();
        sp.shrink_to_fit();
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    result.pairs.erase(std::unique(result.pairs.begin(), result.pairs.end()), result.pairs.end());
    return result;
}

// Shingles pack into one 64-bit key when every code fits a fixed bit width.
// This covers realistic type vocabularies; odd inputs take the generic path.
bool packable(std::span<const ShingleRow> rows, std::size_t& k_out, int& bits_out) {
    if (rows.empty())
        return true;
    std::size_t k = rows.front().shingle.codes.size();
    Code max_code = 0;
    for (const auto& row : rows) {
        if (row.shingle.codes.size() != k)
            return false;
        for (Code c : row.shingle.codes) {
            if (c < 0)
                return false;
            max_code = std::max(max_code, c);
        }
    }
    int bits = std::bit_width(static_cast<std::uint64_t>(max_code) + 1);
    if (k == 0 || static_cast<std::size_t>(bits) * k > 63)
        return false;
    k_out = k;
    bits_out = bits;
    return true;
}

} // namespace

std::vector<ShingleRow> explode(std::span<const ShingleSet> shingle_sets) {
    std::size_t total = 0;
    for (const auto& s : shingle_sets)
        total += s.shingles.size();
    std::vector<ShingleRow> rows;
    rows.reserve(total);
    for (const auto& s : shingle_sets)
        for (const auto& g : s.shingles)
            rows.push_back(ShingleRow{g, s.id});
    return rows;
}

CandidatePairSet candidate_pairs(std::span<const ShingleRow> rows, WorkerPool& pool,
                                 const PartitionOptions& opts) {
    std::size_t k = 0;
    int bits = 0;
    if (packable(rows, k, bits)) {
        std::vector<std::pair<std::uint64_t, TrajectoryId>> keyed(rows.size());
        pool.parallel_blocks(rows.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                std::uint64_t key = 0;
                for (Code c : rows[i].shingle.codes)
                    key = (key << bits) | static_cast<std::uint64_t>(c);
                keyed[i] = {key, rows[i].id};
            }
        });
        return grouped_pairs(std::move(keyed), pool, opts, mix64);
    }

    std::vector<std::pair<Shingle, TrajectoryId>> keyed(rows.size());
    pool.parallel_blocks(rows.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            keyed[i] = {rows[i].shingle, rows[i].id};
    });
    return grouped_pairs(std::move(keyed), pool, opts, ShingleHash{});
}

CandidatePairSet candidate_pairs(std::span<const ShingleRow> rows) {
    WorkerPool pool(1);
    return candidate_pairs(rows, pool);
}

PartitionStats partition_stats(std::span<const ShingleRow> rows) {
    PartitionStats stats;
    stats.rows = rows.size();

    std::unordered_map<Shingle, std::vector<TrajectoryId>, ShingleHash> groups;
    for (const auto& row : rows)
        groups[row.shingle].push_back(row.id);

    for (auto& [shingle, ids] : groups) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        std::size_t size = ids.size();
        stats.max_group = std::max(stats.max_group, size);
        stats.pair_slots += static_cast<std::uint64_t>(size) * (size - 1) / 2;
        ++stats.size_histogram[size];
    }
    stats.groups = groups.size();
    if (stats.groups > 0) {
        std::size_t members = 0;
        for (const auto& [size, count] : stats.size_histogram)
            members += size * count;
        stats.mean_group = static_cast<double>(members) / static_cast<double>(stats.groups);
        stats.max_mean_ratio = static_cast<double>(stats.max_group) / stats.mean_group;
    }
    return stats;
}

namespace detail {

CandidatePairSet pairs_from_keyed_rows(std::vector<std::pair<std::uint64_t, TrajectoryId>> rows,
                                       WorkerPool& pool, const PartitionOptions& opts) {
    return grouped_pairs(std::move(rows), pool, opts, mix64);
}

} // namespace detail

} // namespace semtraj
