#include "ssvm/shrinking.hpp"

#include "engine.hpp"
#include "ssvm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ssvm {

namespace {

struct HeuristicRow {
    Heuristic id;
    ShrinkTrigger trigger;
    double parameter;
    ReconMode recon;
};

constexpr HeuristicRow kRows[] = {
    {Heuristic::single2, ShrinkTrigger::fixed_iterations, 2, ReconMode::single},
    {Heuristic::single500, ShrinkTrigger::fixed_iterations, 500, ReconMode::single},
    {Heuristic::single1000, ShrinkTrigger::fixed_iterations, 1000, ReconMode::single},
    {Heuristic::single5pc, ShrinkTrigger::sample_fraction, 0.05, ReconMode::single},
    {Heuristic::single10pc, ShrinkTrigger::sample_fraction, 0.10, ReconMode::single},
    {Heuristic::single50pc, ShrinkTrigger::sample_fraction, 0.50, ReconMode::single},
    {Heuristic::multi2, ShrinkTrigger::fixed_iterations, 2, ReconMode::multi},
    {Heuristic::multi500, ShrinkTrigger::fixed_iterations, 500, ReconMode::multi},
    {Heuristic::multi1000, ShrinkTrigger::fixed_iterations, 1000, ReconMode::multi},
    {Heuristic::multi5pc, ShrinkTrigger::sample_fraction, 0.05, ReconMode::multi},
    {Heuristic::multi10pc, ShrinkTrigger::sample_fraction, 0.10, ReconMode::multi},
    {Heuristic::multi50pc, ShrinkTrigger::sample_fraction, 0.50, ReconMode::multi},
};

}  // namespace

ShrinkSchedule make_schedule(ShrinkTrigger trigger, double parameter, ReconMode recon, std::size_t n) {
    if (!(parameter > 0.0) || !std::isfinite(parameter)) {
        throw ConfigError("shrink schedule parameter must be positive");
    }
    ShrinkSchedule s;
    s.trigger = trigger;
    s.parameter = parameter;
    s.recon = recon;
    const double interval =
        trigger == ShrinkTrigger::fixed_iterations ? std::ceil(parameter) : std::ceil(parameter * static_cast<double>(n));
    s.initial_interval = std::max<std::size_t>(1, static_cast<std::size_t>(interval));
    s.counter = s.initial_interval;
    return s;
}

std::optional<ShrinkSchedule> resolve_schedule(Heuristic heuristic, std::size_t n) {
    for (const auto& row : kRows) {
        if (row.id == heuristic) {
            return make_schedule(row.trigger, row.parameter, row.recon, n);
        }
    }
    return std::nullopt;
}

ActiveSet::ActiveSet(std::span<const Partition> partitions) : partitions_(partitions.begin(), partitions.end()) {
    std::size_t n = 0;
    for (const auto& p : partitions_) {
        n = std::max(n, p.end);
    }
    flags_.assign(n, 0);
    per_worker_.resize(partitions_.size());
    reset();
}

std::vector<std::size_t> ActiveSet::ids() const {
    std::vector<std::size_t> out;
    out.reserve(count_);
    for (const auto& ids : per_worker_) {
        out.insert(out.end(), ids.begin(), ids.end());
    }
    return out;
}

std::vector<std::size_t> ActiveSet::eliminated(std::size_t q) const {
    std::vector<std::size_t> out;
    for (std::size_t i = partitions_[q].begin; i < partitions_[q].end; ++i) {
        if (flags_[i] == 0) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> ActiveSet::eliminated() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flags_.size(); ++i) {
        if (flags_[i] == 0) {
            out.push_back(i);
        }
    }
    return out;
}

void ActiveSet::commit() noexcept {
    count_ = 0;
    for (const auto& ids : per_worker_) {
        count_ += ids.size();
    }
}

void ActiveSet::reset() {
    std::fill(flags_.begin(), flags_.end(), 1);
    for (std::size_t q = 0; q < partitions_.size(); ++q) {
        auto& ids = per_worker_[q];
        ids.clear();
        for (std::size_t i = partitions_[q].begin; i < partitions_[q].end; ++i) {
            ids.push_back(i);
        }
    }
    commit();
}

std::size_t shrink_pass(WorkerPool& pool, PrototypeStore& store, ActiveSet& active, const GlobalExtrema& thresholds,
                        ShrinkSchedule& schedule) {
    const double beta_up = thresholds.up.value;
    const double beta_low = thresholds.low.value;
    const auto removed = parallel_for_samples<std::size_t>(pool, active.partitions(), [&](const Partition& part) {
        return active.filter_worker(part.worker, [&](std::size_t i) {
            const double* h = store.header(i);
            return !shrink_test(from_cell(h[kIndexSet]), h[kGamma], beta_up, beta_low);
        });
    });
    active.commit();
    schedule.counter = std::min(schedule.initial_interval, active.size());

    std::size_t total = 0;
    for (const std::size_t r : removed) {
        total += r;
    }
    return total;
}

GlobalExtrema reconstruct_gradients(WorkerPool& pool, PrototypeStore& store, const RbfKernel& kernel,
                                    const ActiveSet& active) {
    std::vector<std::size_t> contributors;
    for (std::size_t b = 0; b < store.size(); ++b) {
        if (store.alpha(b) > 0.0) {
            contributors.push_back(b);
        }
    }

    const auto locals = parallel_for_samples<LocalExtrema>(pool, active.partitions(), [&](const Partition& part) {
        for (std::size_t a = part.begin; a < part.end; ++a) {
            if (active.contains(a)) {
                continue;
            }
            double my_gamma = 0.0;
            for (const std::size_t b : contributors) {
                my_gamma += store.alpha(b) * store.label(b) * kernel(a, b);
            }
            double* h = store.header(a);
            h[kGamma] = my_gamma - h[kLabel];
        }
        LocalExtrema local;
        for (std::size_t i = part.begin; i < part.end; ++i) {
            const double* h = store.header(i);
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
    return reduce_extrema(locals);
}

TrainResult train_shrinking(PrototypeStore& store, const TrainerConfig& config, const TrainHooks& hooks) {
    config.validate();
    auto schedule = resolve_schedule(config.heuristic, store.size());
    if (!schedule) {
        throw ConfigError("train_shrinking needs a shrinking heuristic");
    }
    const std::size_t min_shrink_counter = schedule->initial_interval;

    detail::Engine engine(store, config, hooks);
    bool shrinking = true;
    bool first_phase = true;
    std::size_t stalls = 0;
    for (;;) {
        const double slack = first_phase ? 20.0 : 2.0;
        engine.start_phase();
        const auto exit = engine.run_phase(slack, shrinking ? &*schedule : nullptr);
        engine.end_phase();
        first_phase = false;

        if (exit == detail::PhaseExit::stalled) {
            ++stalls;
        } else {
            stalls = 0;
        }

        if (!shrinking) {
            if (exit == detail::PhaseExit::converged) {
                break;
            }
            engine.fail("working pair made no progress");
        }

        engine.reconstruct();
        if (engine.thresholds_satisfy(2.0)) {
            break;
        }
        if (stalls > 1) {
            engine.fail("working pair made no progress");
        }
        engine.reactivate_all();
        schedule->counter = min_shrink_counter;
        if (schedule->recon == ReconMode::single) {
            shrinking = false;
        }
    }
    return engine.finish();
}

}  // namespace ssvm
