#include "ssvm/parallel_engine.hpp"

#include <algorithm>

namespace ssvm {

std::vector<Partition> make_partitions(std::size_t n, std::size_t workers) {
    workers = std::max<std::size_t>(workers, 1);
    std::vector<Partition> parts;
    parts.reserve(workers);
    const std::size_t base = n / workers;
    const std::size_t extra = n % workers;
    std::size_t begin = 0;
    for (std::size_t q = 0; q < workers; ++q) {
        const std::size_t len = base + (q < extra ? 1 : 0);
        parts.push_back({q, begin, begin + len});
        begin += len;
    }
    return parts;
}

WorkerPool::WorkerPool(std::size_t workers) : workers_(std::max<std::size_t>(workers, 1)), errors_(workers_) {
    threads_.reserve(workers_ - 1);
    for (std::size_t q = 1; q < workers_; ++q) {
        threads_.emplace_back([this, q] { worker_loop(q); });
    }
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) {
        t.join();
    }
}

void WorkerPool::worker_loop(std::size_t q) {
    std::size_t seen = 0;
    for (;;) {
        const std::function<void(std::size_t)>* job = nullptr;
        {
            std::unique_lock lock(mutex_);
            start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
            if (stopping_) {
                return;
            }
            seen = generation_;
            job = job_;
        }
        try {
            (*job)(q);
        } catch (...) {
            errors_[q] = std::current_exception();
        }
        {
            std::lock_guard lock(mutex_);
            if (--pending_ == 0) {
                done_cv_.notify_one();
            }
        }
    }
}

void WorkerPool::run(const std::function<void(std::size_t)>& job) {
    std::fill(errors_.begin(), errors_.end(), nullptr);
    if (workers_ > 1) {
        std::lock_guard lock(mutex_);
        job_ = &job;
        pending_ = workers_ - 1;
        ++generation_;
    }
    start_cv_.notify_all();

    try {
        job(0);
    } catch (...) {
        errors_[0] = std::current_exception();
    }

    if (workers_ > 1) {
        std::unique_lock lock(mutex_);
        done_cv_.wait(lock, [&] { return pending_ == 0; });
        job_ = nullptr;
    }
    for (const auto& e : errors_) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

GlobalExtrema reduce_extrema(std::span<const LocalExtrema> locals) noexcept {
    LocalExtrema acc;
    for (const auto& l : locals) {
        if (l.up.valid()) {
            acc.offer_up(l.up.value, l.up.id);
        }
        if (l.low.valid()) {
            acc.offer_low(l.low.value, l.low.id);
        }
    }
    return {acc.up, acc.low};
}

}  // namespace ssvm
