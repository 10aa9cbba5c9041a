#pragma once

#include "ssvm/config.hpp"
#include "ssvm/index_set.hpp"
#include "ssvm/kernel.hpp"
#include "ssvm/parallel_engine.hpp"
#include "ssvm/smo_core.hpp"
#include "ssvm/sparse_data.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ssvm {

enum class ShrinkTrigger {
    fixed_iterations,  ///< shrink every k iterations ("random: k" rows)
    sample_fraction,   ///< shrink every ceil(fraction * N) iterations ("numsamples" rows)
};

enum class ReconMode {
    single,  ///< one reconstruction, then shrinking stays off
    multi,   ///< reconstruct at every phase exit, shrinking stays on
};

struct ShrinkSchedule {
    ShrinkTrigger trigger = ShrinkTrigger::fixed_iterations;
    double parameter = 0.0;  ///< k, or the fraction of N
    ReconMode recon = ReconMode::single;
    std::size_t initial_interval = 1;
    std::size_t counter = 1;  ///< iterations left before the next shrink pass
};

/// Interval: k for fixed triggers, ceil(fraction * n) for fractional ones
/// (at least 1). Returns nullopt for Heuristic::original.
[[nodiscard]] std::optional<ShrinkSchedule> resolve_schedule(Heuristic heuristic, std::size_t n);

/// Custom schedule outside the named heuristics.
[[nodiscard]] ShrinkSchedule make_schedule(ShrinkTrigger trigger, double parameter, ReconMode recon, std::size_t n);

/// Elimination rule: I3/I4 samples below beta_up, or I1/I2 samples above
/// beta_low. I0 samples are never eliminated.
[[nodiscard]] constexpr bool shrink_test(IndexSet s, double gamma, double beta_up, double beta_low) noexcept {
    switch (s) {
        case IndexSet::I3:
        case IndexSet::I4:
            return gamma < beta_up;
        case IndexSet::I1:
        case IndexSet::I2:
            return gamma > beta_low;
        case IndexSet::I0:
            break;
    }
    return false;
}

/// Active sample ids (pi), kept per worker partition in ascending order.
/// The complement (omega) holds eliminated samples whose alpha is frozen.
class ActiveSet {
  public:
    ActiveSet() = default;
    /// Everything active.
    explicit ActiveSet(std::span<const Partition> partitions);

    [[nodiscard]] std::size_t size() const noexcept { return count_; }
    [[nodiscard]] std::size_t total() const noexcept { return flags_.size(); }
    [[nodiscard]] std::size_t eliminated_count() const noexcept { return total() - count_; }
    [[nodiscard]] bool contains(std::size_t i) const noexcept { return flags_[i] != 0; }

    [[nodiscard]] std::span<const Partition> partitions() const noexcept { return partitions_; }
    [[nodiscard]] std::span<const std::size_t> worker_ids(std::size_t q) const noexcept { return per_worker_[q]; }

    /// pi, ascending.
    [[nodiscard]] std::vector<std::size_t> ids() const;
    /// omega restricted to partition q, ascending.
    [[nodiscard]] std::vector<std::size_t> eliminated(std::size_t q) const;
    [[nodiscard]] std::vector<std::size_t> eliminated() const;

    /// Keeps only ids for which keep(id) is true within partition q. Must
    /// only be called by the worker owning q; call commit() afterwards.
    template <typename Keep>
    std::size_t filter_worker(std::size_t q, Keep&& keep) {
        auto& ids = per_worker_[q];
        std::size_t removed = 0;
        std::size_t out = 0;
        for (const std::size_t i : ids) {
            if (keep(i)) {
                ids[out++] = i;
            } else {
                flags_[i] = 0;
                ++removed;
            }
        }
        ids.resize(out);
        return removed;
    }

    /// Recounts after a round of filter_worker calls (serial region).
    void commit() noexcept;

    /// Reactivates every sample.
    void reset();

  private:
    std::vector<Partition> partitions_;
    std::vector<std::vector<std::size_t>> per_worker_;
    std::vector<std::uint8_t> flags_;
    std::size_t count_ = 0;
};

/// Applies shrink_test to every active sample in parallel, removes the
/// eliminable ones and resets the counter to min(initial_interval, |pi|).
/// Returns the number eliminated.
std::size_t shrink_pass(WorkerPool& pool, PrototypeStore& store, ActiveSet& active, const GlobalExtrema& thresholds,
                        ShrinkSchedule& schedule);

/// Recomputes gamma from scratch for every eliminated sample,
///   gamma_a = sum_{b : alpha_b > 0} alpha_b y_b K(a, b) - y_a,
/// then returns the thresholds over the full sample set.
GlobalExtrema reconstruct_gradients(WorkerPool& pool, PrototypeStore& store, const RbfKernel& kernel,
                                    const ActiveSet& active);

/// SMO with shrinking per config.heuristic (which must not be original).
/// Single mode: shrink down to the loose 20-epsilon condition, reconstruct
/// once, and if violators remain finish on the full set without shrinking.
/// Multi mode: the first phase stops at 20 epsilon, later phases at
/// 2 epsilon, shrinking stays on, and every phase exit reconstructs;
/// convergence is declared only after a reconstruction passes 2 epsilon.
[[nodiscard]] TrainResult train_shrinking(PrototypeStore& store, const TrainerConfig& config,
                                          const TrainHooks& hooks = {});

}  // namespace ssvm
