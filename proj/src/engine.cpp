#include "engine.hpp"

#include "ssvm/errors.hpp"
#include "ssvm/index_set.hpp"

#include <numeric>

namespace ssvm::detail {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

Engine::Engine(PrototypeStore& store, const TrainerConfig& config, const TrainHooks& hooks)
    : store_(store),
      config_(config),
      hooks_(hooks),
      self_dots_(compute_self_dots(store)),
      kernel_(store, self_dots_, KernelParams{config.sigma2}),
      pool_(config.workers),
      partitions_(make_partitions(store.size(), config.workers)),
      active_(partitions_),
      started_(Clock::now()) {
    if (store.c() != config.c) {
        throw PreconditionError("store was built for a different C");
    }
    store_.reset_state();

    // Initial pair: lowest-id positive as i_low, lowest-id negative as i_up.
    std::size_t first_pos = store.size();
    std::size_t first_neg = store.size();
    for (std::size_t i = 0; i < store.size() && (first_pos == store.size() || first_neg == store.size()); ++i) {
        if (store.label(i) > 0.0) {
            first_pos = std::min(first_pos, i);
        } else {
            first_neg = std::min(first_neg, i);
        }
    }
    if (first_pos == store.size() || first_neg == store.size()) {
        throw PreconditionError("training needs at least one sample of each class");
    }
    // With alpha = 0 everywhere gamma = -y, so beta_up = -1 and beta_low = +1.
    state_.i_low = first_pos;
    state_.i_up = first_neg;
    state_.beta_up = -1.0;
    state_.beta_low = 1.0;
}

void Engine::adopt(const GlobalExtrema& extrema) noexcept {
    state_.beta_up = extrema.up.value;
    state_.beta_low = extrema.low.value;
    if (extrema.up.valid()) {
        state_.i_up = extrema.up.id;
    }
    if (extrema.low.valid()) {
        state_.i_low = extrema.low.id;
    }
}

bool Engine::step() {
    const SharedPair pair = share_pair(state_.i_up, state_.i_low);
    const double* up = store_.header(pair.up);
    const double* low = store_.header(pair.low);

    const PairInput input{up[kAlpha], low[kAlpha], up[kLabel], low[kLabel], up[kGamma], low[kGamma]};
    const StepOutcome out = update_alphas(input, compute_rho(kernel_, pair.low, pair.up), config_.c);
    if (out.degenerate) {
        return false;
    }

    const double c = config_.c;
    const double y_up = input.y_up;
    const double y_low = input.y_low;
    const auto locals =
        parallel_for_samples<LocalExtrema>(pool_, partitions_, [&](const Partition& part) {
            LocalExtrema local;
            for (const std::size_t i : active_.worker_ids(part.worker)) {
                double* h = store_.header(i);
                h[kGamma] = update_gradient(h[kGamma], y_up, out.delta_up, kernel_(pair.up, i), y_low, out.delta_low,
                                            kernel_(pair.low, i));
                if (i == pair.up) {
                    h[kAlpha] = out.alpha_up;
                    h[kIndexSet] = to_cell(classify_index(out.alpha_up, y_up, c));
                } else if (i == pair.low) {
                    h[kAlpha] = out.alpha_low;
                    h[kIndexSet] = to_cell(classify_index(out.alpha_low, y_low, c));
                }
                const IndexSet s = from_cell(h[kIndexSet]);
                if (in_up_set(s)) {
                    local.offer_up(h[kGamma], i);
                }
                if (in_low_set(s)) {
                    local.offer_low(h[kGamma], i);
                }
            }
            return local;
        });
    adopt(reduce_extrema(locals));
    return true;
}

PhaseExit Engine::run_phase(double slack, ShrinkSchedule* schedule) {
    while (!thresholds_satisfy(slack)) {
        if (state_.iteration >= config_.max_iterations) {
            fail("iteration cap reached");
        }
        if (!step()) {
            return PhaseExit::stalled;
        }
        ++state_.iteration;

        if (hooks_.checkpoint_interval != 0 && hooks_.on_checkpoint &&
            state_.iteration % hooks_.checkpoint_interval == 0) {
            const auto ids = active_.ids();
            hooks_.on_checkpoint(store_, TrainProgress{state_, ids});
        }

        if (schedule != nullptr && !thresholds_satisfy(slack)) {
            if (schedule->counter == 0) {
                shrink_pass(pool_, store_, active_, GlobalExtrema{{state_.beta_up, state_.i_up}, {state_.beta_low, state_.i_low}},
                            *schedule);
            } else {
                --schedule->counter;
            }
        }
    }
    return PhaseExit::converged;
}

void Engine::reconstruct() {
    const auto t = Clock::now();
    adopt(reconstruct_gradients(pool_, store_, kernel_, active_));
    recon_seconds_ += seconds_since(t);
    ++recon_count_;
}

void Engine::reactivate_all() {
    active_.reset();
    ++reactivations_;
}

bool Engine::thresholds_satisfy(double slack) const noexcept {
    return check_termination(state_.beta_up, state_.beta_low, config_.epsilon, slack);
}

void Engine::fail(const std::string& why) const {
    throw NonConvergenceError(why + " after " + std::to_string(state_.iteration) + " iterations (beta_up " +
                                  std::to_string(state_.beta_up) + ", beta_low " + std::to_string(state_.beta_low) + ")",
                              state_.beta_up, state_.beta_low, state_.iteration);
}

void Engine::start_phase() { phase_started_ = Clock::now(); }

void Engine::end_phase() { train_seconds_ += seconds_since(phase_started_); }

TrainResult Engine::finish() {
    std::vector<std::size_t> all(store_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const GlobalExtrema full = select_working_set(store_, all);

    TrainResult result;
    const double beta = compute_beta(store_, full.up.value, full.low.value);
    result.model = extract_model(store_, beta, config_, state_.iteration);

    TrainReport& r = result.report;
    r.iterations = state_.iteration;
    r.train_seconds = train_seconds_;
    r.recon_seconds = recon_seconds_;
    r.recon_count = recon_count_;
    r.reactivations = reactivations_;
    r.n_support = result.model.support_vectors.size();
    r.beta = beta;
    r.beta_up = full.up.value;
    r.beta_low = full.low.value;
    r.heuristic = std::string(heuristic_name(config_.heuristic));
    r.workers = pool_.size();
    r.total_seconds = seconds_since(started_);
    return result;
}

}  // namespace ssvm::detail
