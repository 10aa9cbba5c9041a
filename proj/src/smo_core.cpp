#include "ssvm/smo_core.hpp"

#include "engine.hpp"
#include "ssvm/errors.hpp"
#include "ssvm/shrinking.hpp"

#include <algorithm>
#include <cmath>

namespace ssvm {

namespace {

double snap_to_box(double alpha, double c) noexcept {
    const double tol = 1e-12 * c;
    if (alpha <= tol) {
        return 0.0;
    }
    if (alpha >= c - tol) {
        return c;
    }
    return alpha;
}

}  // namespace

double compute_rho(const RbfKernel& kernel, std::size_t i_low, std::size_t i_up) noexcept {
    return 2.0 * kernel(i_low, i_up) - kernel(i_up, i_up) - kernel(i_low, i_low);
}

StepOutcome update_alphas(const PairInput& pair, double rho, double c) noexcept {
    rho = std::min(rho, kMaxRho);
    const double s = pair.y_up * pair.y_low;

    const double unconstrained = pair.alpha_low - pair.y_low * (pair.gamma_up - pair.gamma_low) / rho;

    // Feasible segment for alpha_low on the line y_up a_up + y_low a_low = const.
    double lo = 0.0;
    double hi = c;
    const double total = pair.alpha_up + pair.alpha_low;
    const double diff = pair.alpha_low - pair.alpha_up;
    if (s > 0.0) {
        lo = std::max(0.0, total - c);
        hi = std::min(c, total);
    } else {
        lo = std::max(0.0, diff);
        hi = std::min(c, c + diff);
    }

    StepOutcome out;
    double a_low = std::clamp(unconstrained, lo, hi);
    out.clipped = a_low != unconstrained;
    a_low = snap_to_box(a_low, c);
    double a_up = s > 0.0 ? total - a_low : a_low - diff;
    a_up = snap_to_box(std::clamp(a_up, 0.0, c), c);

    out.alpha_low = a_low;
    out.alpha_up = a_up;
    out.delta_low = a_low - pair.alpha_low;
    out.delta_up = a_up - pair.alpha_up;
    out.degenerate = out.delta_low == 0.0 && out.delta_up == 0.0;
    return out;
}

GlobalExtrema select_working_set(const PrototypeStore& store, std::span<const std::size_t> active) {
    LocalExtrema local;
    for (const std::size_t i : active) {
        const double* h = store.header(i);
        const IndexSet s = from_cell(h[kIndexSet]);
        if (in_up_set(s)) {
            local.offer_up(h[kGamma], i);
        }
        if (in_low_set(s)) {
            local.offer_low(h[kGamma], i);
        }
    }
    return {local.up, local.low};
}

double compute_beta(const PrototypeStore& store, double beta_up, double beta_low) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < store.size(); ++i) {
        const double* h = store.header(i);
        if (from_cell(h[kIndexSet]) == IndexSet::I0) {
            sum += h[kGamma];
            ++count;
        }
    }
    return count != 0 ? sum / static_cast<double>(count) : (beta_low + beta_up) / 2.0;
}

double dual_objective(const PrototypeStore& store) {
    // sum_j alpha_j y_j K_ij = gamma_i + y_i
    double linear = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < store.size(); ++i) {
        const double* h = store.header(i);
        linear += h[kAlpha];
        quadratic += h[kAlpha] * h[kLabel] * (h[kGamma] + h[kLabel]);
    }
    return linear - 0.5 * quadratic;
}

TrainResult train_original(PrototypeStore& store, const TrainerConfig& config, const TrainHooks& hooks) {
    config.validate();
    detail::Engine engine(store, config, hooks);
    engine.start_phase();
    const auto exit = engine.run_phase(2.0, nullptr);
    engine.end_phase();
    if (exit == detail::PhaseExit::stalled && !engine.thresholds_satisfy(2.0)) {
        engine.fail("working pair made no progress");
    }
    return engine.finish();
}

TrainResult train(PrototypeStore& store, const TrainerConfig& config, const TrainHooks& hooks) {
    return config.heuristic == Heuristic::original ? train_original(store, config, hooks)
                                                    : train_shrinking(store, config, hooks);
}

}  // namespace ssvm
