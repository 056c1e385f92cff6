#pragma once
// The in-process data-parallel substrate. Stages are pure functions over
// partitioned batches; shuffles hash-partition by key; merges sort by key.
// Every stage result is therefore identical for any worker count, which is
// what lets the pipeline promise byte-identical artifacts at 1 or 8 workers.

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace semtraj {

// Bounded pool of OS threads. workers() == 1 executes everything inline on
// the calling thread; the pool threads otherwise persist across stage calls.
class WorkerPool {
public:
    explicit WorkerPool(int workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int workers() const { return workers_; }

    // Splits [0, count) into contiguous blocks, at most one per worker, and
    // runs body(block_index, begin, end) concurrently. Blocks are fixed by
    // count and worker count alone, never by scheduling, so a body that
    // writes results by index is deterministic.
    void parallel_blocks(std::size_t count,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

    static int default_workers() {
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }

private:
    void run_tasks(std::size_t task_count, const std::function<void(std::size_t)>& task);
    void drain(const std::function<void(std::size_t)>& task);
    void worker_loop();

    int workers_ = 1;
    std::vector<std::thread> threads_;
    std::mutex mu_;
    std::condition_variable cv_work_;
    std::condition_variable cv_done_;
    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t task_count_ = 0;
    std::atomic<std::size_t> next_task_{0};
    std::size_t pending_ = 0;
    std::uint64_t generation_ = 0;
    std::exception_ptr failure_;
    bool stop_ = false;
};

// Element-wise parallel map: out[i] = fn(in[i]). Output order equals input
// order regardless of worker count.
template <class In, class Fn>
auto parallel_map(WorkerPool& pool, std::span<const In> in, Fn fn)
    -> std::vector<decltype(fn(in[0]))> {
    using Out = decltype(fn(in[0]));
    std::vector<Out> out(in.size());
    pool.parallel_blocks(in.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            out[i] = fn(in[i]);
    });
    return out;
}

// Group-by with a hash-partitioned shuffle and a sorted merge.
//
// Rows are scanned in parallel and routed to hash(key) % shards; each shard
// groups its rows (stable within a group: original row order) and applies
// group_fn(key, rows) per group. The merged result is sorted by key, so the
// output is a pure function of the input multiset.
//
// Requirements: Key is hashable via Hash, totally ordered via <; key_fn and
// group_fn are pure.
template <class Key, class Row, class KeyFn, class GroupFn,
          class Hash = std::hash<Key>>
auto parallel_group_by(WorkerPool& pool, std::span<const Row> rows, KeyFn key_fn, GroupFn group_fn,
                       Hash hash = {})
    -> std::vector<std::pair<Key, decltype(group_fn(std::declval<const Key&>(),
                                                    std::declval<std::span<const Row>>()))>> {
    using Result = decltype(group_fn(std::declval<const Key&>(), std::declval<std::span<const Row>>()));
    using Out = std::vector<std::pair<Key, Result>>;

    const std::size_t shards = static_cast<std::size_t>(pool.workers());

    // Phase 1: partition. buckets[block][shard] keeps arrival order so the
    // shard-side concatenation below is deterministic.
    std::vector<std::vector<std::vector<std::pair<Key, std::size_t>>>> buckets;
    std::size_t block_count = std::min<std::size_t>(shards, rows.empty() ? 0 : rows.size());
    buckets.resize(block_count == 0 ? 1 : block_count);
    pool.parallel_blocks(rows.size(), [&](std::size_t block, std::size_t begin, std::size_t end) {
        auto& local = buckets[block];
        local.resize(shards);
        for (std::size_t i = begin; i < end; ++i) {
            Key k = key_fn(rows[i]);
            std::size_t s = hash(k) % shards;
            local[s].emplace_back(std::move(k), i);
        }
    });

    // Phase 2: per shard, gather, sort by key (stable on row index), and run
    // the group function over each key run.
    std::vector<Out> shard_out(shards);
    pool.parallel_blocks(shards, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            std::vector<std::pair<Key, std::size_t>> mine;
            std::size_t total = 0;
            for (const auto& b : buckets)
                if (s < b.size()) total += b[s].size();
            mine.reserve(total);
            for (const auto& b : buckets)
                if (s < b.size()) mine.insert(mine.end(), b[s].begin(), b[s].end());
            std::sort(mine.begin(), mine.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return a.second < b.second;
            });

            std::vector<Row> group_rows;
            for (std::size_t i = 0; i < mine.size();) {
                std::size_t j = i;
                while (j < mine.size() && mine[j].first == mine[i].first) ++j;
                group_rows.clear();
                group_rows.reserve(j - i);
                for (std::size_t r = i; r < j; ++r)
                    group_rows.push_back(rows[mine[r].second]);
                shard_out[s].emplace_back(mine[i].first,
                                          group_fn(mine[i].first, std::span<const Row>(group_rows)));
                i = j;
            }
        }
    });

    // Phase 3: sorted merge.
    Out merged;
    std::size_t total = 0;
    for (const auto& so : shard_out) total += so.size();
    merged.reserve(total);
    for (auto& so : shard_out)
        for (auto& kv : so) merged.push_back(std::move(kv));
    std::sort(merged.begin(), merged.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return merged;
}

} // namespace semtraj
