#include "semtraj/engine.hpp"

#include <stdexcept>

namespace semtraj {

WorkerPool::WorkerPool(int workers) : workers_(workers) {
    if (workers < 1)
        throw std::invalid_argument("worker count must be >= 1");
    for (int i = 1; i < workers; ++i)
        threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mu_);
        stop_ = true;
    }
    cv_work_.notify_all();
    for (auto& t : threads_)
        t.join();
}

void WorkerPool::worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
        const std::function<void(std::size_t)>* task;
        {
            std::unique_lock lock(mu_);
            cv_work_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            task = task_;
        }
        drain(*task);
        {
            std::lock_guard lock(mu_);
            if (--pending_ == 0) cv_done_.notify_one();
        }
    }
}

// Pulls task indices until exhausted. The first exception is kept and
// rethrown on the calling thread once the batch completes; later tasks
// still run (they may hold results other shards need to free).
void WorkerPool::drain(const std::function<void(std::size_t)>& task) {
    for (;;) {
        std::size_t i = next_task_.fetch_add(1);
        if (i >= task_count_) break;
        try {
            task(i);
        } catch (...) {
            std::lock_guard lock(mu_);
            if (!failure_) failure_ = std::current_exception();
        }
    }
}

void WorkerPool::run_tasks(std::size_t task_count, const std::function<void(std::size_t)>& task) {
    if (task_count == 0) return;
    if (threads_.empty() || task_count == 1) {
        for (std::size_t i = 0; i < task_count; ++i)
            task(i);
        return;
    }
    {
        std::lock_guard lock(mu_);
        task_ = &task;
        task_count_ = task_count;
        next_task_.store(0);
        pending_ = threads_.size();
        failure_ = nullptr;
        ++generation_;
    }
    cv_work_.notify_all();
    drain(task); // the calling thread pulls tasks too
    std::unique_lock lock(mu_);
    cv_done_.wait(lock, [&] { return pending_ == 0; });
    task_ = nullptr;
    if (failure_)
        std::rethrow_exception(std::exchange(failure_, nullptr));
}

void WorkerPool::parallel_blocks(std::size_t count,
                                 const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (count == 0) return;
    const std::size_t blocks = std::min<std::size_t>(static_cast<std::size_t>(workers_), count);
    run_tasks(blocks, [&](std::size_t b) {
        std::size_t begin = count * b / blocks;
        std::size_t end = count * (b + 1) / blocks;
        body(b, begin, end);
    });
}

} // namespace semtraj
