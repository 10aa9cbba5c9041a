#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

namespace ssvm {

/// Contiguous range of sample ids owned by one worker.
struct Partition {
    std::size_t worker = 0;
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
    [[nodiscard]] bool empty() const noexcept { return begin == end; }
    [[nodiscard]] bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Balanced contiguous split of [0, n): the first n % workers ranges get one
/// extra sample. Surplus workers (workers > n) get empty ranges.
[[nodiscard]] std::vector<Partition> make_partitions(std::size_t n, std::size_t workers);

/// Fixed set of threads that execute one job at a time with fork-join
/// semantics. Worker 0 is the calling thread. With a single worker no
/// threads are started.
class WorkerPool {
  public:
    explicit WorkerPool(std::size_t workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    [[nodiscard]] std::size_t size() const noexcept { return workers_; }

    /// Runs job(q) for every worker q and returns once all have finished.
    /// The first exception (lowest q) is rethrown after every worker is idle.
    void run(const std::function<void(std::size_t)>& job);

  private:
    void worker_loop(std::size_t q);

    std::size_t workers_;
    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(std::size_t)>* job_ = nullptr;
    std::size_t generation_ = 0;
    std::size_t pending_ = 0;
    bool stopping_ = false;
    std::vector<std::exception_ptr> errors_;
};

/// Runs body(partition) on each non-empty partition in parallel, one
/// partition per worker. Results for empty partitions stay default-constructed.
template <typename Result, typename Body>
std::vector<Result> parallel_for_samples(WorkerPool& pool, std::span<const Partition> partitions, Body&& body) {
    std::vector<Result> results(partitions.size());
    pool.run([&](std::size_t q) {
        for (std::size_t p = q; p < partitions.size(); p += pool.size()) {
            if (!partitions[p].empty()) {
                results[p] = body(partitions[p]);
            }
        }
    });
    return results;
}

/// An extremum candidate: value plus the sample that produced it.
struct Extremum {
    double value = 0.0;
    std::size_t id = std::numeric_limits<std::size_t>::max();

    [[nodiscard]] bool valid() const noexcept { return id != std::numeric_limits<std::size_t>::max(); }
};

/// Per-worker candidates for beta_up (min) and beta_low (max).
struct LocalExtrema {
    Extremum up{std::numeric_limits<double>::infinity()};
    Extremum low{-std::numeric_limits<double>::infinity()};

    /// Folds one sample in. Ties go to the lower id.
    void offer_up(double gamma, std::size_t id) noexcept {
        if (gamma < up.value || (gamma == up.value && id < up.id)) {
            up = {gamma, id};
        }
    }
    void offer_low(double gamma, std::size_t id) noexcept {
        if (gamma > low.value || (gamma == low.value && id < low.id)) {
            low = {gamma, id};
        }
    }
};

struct GlobalExtrema {
    Extremum up;
    Extremum low;

    /// False when either side had no eligible sample.
    [[nodiscard]] bool complete() const noexcept { return up.valid() && low.valid(); }
};

/// Combines locals in ascending worker order. A side with no eligible
/// sample keeps value +inf (up) or -inf (low) and an invalid id.
[[nodiscard]] GlobalExtrema reduce_extrema(std::span<const LocalExtrema> locals) noexcept;

/// Working pair as every worker sees it for one iteration.
struct SharedPair {
    std::size_t up = 0;
    std::size_t low = 0;
};

/// In-process stand-in for the broadcast of the selected pair: the returned
/// value is written in the serial region and read by workers only after the
/// next fork, so every worker observes the same ids.
[[nodiscard]] inline SharedPair share_pair(std::size_t i_up, std::size_t i_low) noexcept { return {i_up, i_low}; }

}  // namespace ssvm
