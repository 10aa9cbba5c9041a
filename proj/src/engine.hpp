#pragma once

#include "ssvm/config.hpp"
#include "ssvm/kernel.hpp"
#include "ssvm/parallel_engine.hpp"
#include "ssvm/shrinking.hpp"
#include "ssvm/smo_core.hpp"
#include "ssvm/sparse_data.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace ssvm::detail {

enum class PhaseExit {
    converged,  ///< thresholds over the active set satisfy the phase tolerance
    stalled,    ///< the selected pair could not move
};

/// Shared iteration machinery of the trainers. Owns the worker pool, the
/// partitioning and the active set; the store is mutated in place.
class Engine {
  public:
    Engine(PrototypeStore& store, const TrainerConfig& config, const TrainHooks& hooks);

    /// Optimizes over the active set until beta_up + slack * eps >= beta_low.
    /// With a schedule, a shrink pass runs whenever its counter expires.
    PhaseExit run_phase(double slack, ShrinkSchedule* schedule);

    /// Recomputes eliminated gammas; state thresholds become full-set values.
    void reconstruct();

    /// Brings every sample back into the active set.
    void reactivate_all();

    /// Current thresholds pass the given slack.
    [[nodiscard]] bool thresholds_satisfy(double slack) const noexcept;

    [[noreturn]] void fail(const std::string& why) const;

    void start_phase();
    void end_phase();

    [[nodiscard]] TrainResult finish();

    [[nodiscard]] const TrainState& state() const noexcept { return state_; }
    [[nodiscard]] ActiveSet& active() noexcept { return active_; }

  private:
    using Clock = std::chrono::steady_clock;

    /// One SMO iteration over the active set. Returns false when the pair is degenerate.
    bool step();
    void adopt(const GlobalExtrema& extrema) noexcept;

    PrototypeStore& store_;
    TrainerConfig config_;
    const TrainHooks& hooks_;
    SelfDotTable self_dots_;
    RbfKernel kernel_;
    WorkerPool pool_;
    std::vector<Partition> partitions_;
    ActiveSet active_;
    TrainState state_;

    Clock::time_point started_;
    Clock::time_point phase_started_;
    double train_seconds_ = 0.0;
    double recon_seconds_ = 0.0;
    std::size_t recon_count_ = 0;
    std::size_t reactivations_ = 0;
};

}  // namespace ssvm::detail
