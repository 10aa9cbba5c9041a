#pragma once

#include "ssvm/config.hpp"
#include "ssvm/index_set.hpp"
#include "ssvm/kernel.hpp"
#include "ssvm/model_io.hpp"
#include "ssvm/parallel_engine.hpp"
#include "ssvm/sparse_data.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>

namespace ssvm {

/// Optimizer state between iterations.
struct TrainState {
    std::size_t i_up = 0;
    std::size_t i_low = 0;
    double beta_up = 0.0;
    double beta_low = 0.0;
    std::size_t iteration = 0;
};

/// Inputs of one analytic two-variable step.
struct PairInput {
    double alpha_up = 0.0;
    double alpha_low = 0.0;
    double y_up = 1.0;
    double y_low = 1.0;
    double gamma_up = 0.0;
    double gamma_low = 0.0;
};

struct StepOutcome {
    double alpha_up = 0.0;
    double alpha_low = 0.0;
    double delta_up = 0.0;
    double delta_low = 0.0;
    bool clipped = false;
    /// Neither multiplier moved; the pair cannot make progress.
    bool degenerate = false;
};

/// Curvatures above this are treated as this value (the pair's kernel
/// matrix is singular, e.g. duplicate samples).
inline constexpr double kMaxRho = -1e-12;

/// rho = 2 K(low, up) - K(up, up) - K(low, low); for the Gaussian kernel 2K - 2.
[[nodiscard]] double compute_rho(const RbfKernel& kernel, std::size_t i_low, std::size_t i_up) noexcept;

/// Unconstrained pair update, then clipped to the box along
/// y_up * a_up + y_low * a_low = const. Values within 1e-12 C of a bound are
/// written as the exact bound.
[[nodiscard]] StepOutcome update_alphas(const PairInput& pair, double rho, double c) noexcept;

[[nodiscard]] inline double update_gradient(double gamma, double y_up, double delta_up, double k_up_i, double y_low,
                                            double delta_low, double k_low_i) noexcept {
    return gamma + y_up * delta_up * k_up_i + y_low * delta_low * k_low_i;
}

/// Serial arg-min over active ∩ (I0 ∪ I1 ∪ I2) and arg-max over
/// active ∩ (I0 ∪ I3 ∪ I4); ties resolve to the lowest id.
/// GlobalExtrema::complete() is false when either side is empty.
[[nodiscard]] GlobalExtrema select_working_set(const PrototypeStore& store, std::span<const std::size_t> active);

/// beta_up + slack * epsilon >= beta_low. slack is 2 for final and 20 for
/// the loose shrinking phase.
[[nodiscard]] constexpr bool check_termination(double beta_up, double beta_low, double epsilon,
                                               double slack_multiplier) noexcept {
    return beta_up + slack_multiplier * epsilon >= beta_low;
}

/// Mean gamma over I0 (whole store), or the threshold midpoint when I0 is empty.
[[nodiscard]] double compute_beta(const PrototypeStore& store, double beta_up, double beta_low);

/// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij, evaluated from the
/// maintained gammas (valid when every gamma is current).
[[nodiscard]] double dual_objective(const PrototypeStore& store);

struct TrainReport {
    std::size_t iterations = 0;
    double total_seconds = 0.0;
    double train_seconds = 0.0;
    double recon_seconds = 0.0;
    std::size_t recon_count = 0;
    /// Reconstructions after which violators remained and samples were reactivated.
    std::size_t reactivations = 0;
    std::size_t n_support = 0;
    double beta = 0.0;
    double beta_up = 0.0;
    double beta_low = 0.0;
    std::string heuristic = "original";
    std::size_t workers = 1;

    /// beta_low - beta_up at exit, over the full sample set.
    [[nodiscard]] double gap() const noexcept { return beta_low - beta_up; }
};

struct TrainResult {
    SvmModel model;
    TrainReport report;
};

/// Progress snapshot passed to TrainHooks::on_checkpoint.
struct TrainProgress {
    const TrainState& state;
    std::span<const std::size_t> active;  ///< ids whose gammas are current
};

struct TrainHooks {
    /// Called after every `checkpoint_interval` iterations (0 disables).
    std::size_t checkpoint_interval = 0;
    std::function<void(const PrototypeStore&, const TrainProgress&)> on_checkpoint;
};

/// SMO without shrinking. Mutates the store's header cells in place; on
/// return they hold the converged alpha, index sets and gammas.
/// Throws PreconditionError when a class is missing, NonConvergenceError
/// when max_iterations is reached.
[[nodiscard]] TrainResult train_original(PrototypeStore& store, const TrainerConfig& config,
                                         const TrainHooks& hooks = {});

/// Dispatches on config.heuristic to train_original or train_shrinking.
[[nodiscard]] TrainResult train(PrototypeStore& store, const TrainerConfig& config, const TrainHooks& hooks = {});

}  // namespace ssvm
