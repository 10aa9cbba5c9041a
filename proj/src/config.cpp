#include "ssvm/config.hpp"

#include "ssvm/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>

namespace ssvm {

std::string_view heuristic_name(Heuristic h) noexcept {
    switch (h) {
        case Heuristic::original: return "original";
        case Heuristic::single2: return "single2";
        case Heuristic::single500: return "single500";
        case Heuristic::single1000: return "single1000";
        case Heuristic::single5pc: return "single5pc";
        case Heuristic::single10pc: return "single10pc";
        case Heuristic::single50pc: return "single50pc";
        case Heuristic::multi2: return "multi2";
        case Heuristic::multi500: return "multi500";
        case Heuristic::multi1000: return "multi1000";
        case Heuristic::multi5pc: return "multi5pc";
        case Heuristic::multi10pc: return "multi10pc";
        case Heuristic::multi50pc: return "multi50pc";
    }
    return "unknown";
}

std::optional<Heuristic> parse_heuristic(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    for (const Heuristic h : kAllHeuristics) {
        if (heuristic_name(h) == lower) {
            return h;
        }
    }
    return std::nullopt;
}

void TrainerConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(c)) {
        throw ConfigError("C must be positive");
    }
    if (!positive(sigma2)) {
        throw ConfigError("sigma2 must be positive");
    }
    if (!positive(epsilon)) {
        throw ConfigError("epsilon must be positive");
    }
    if (workers == 0) {
        throw ConfigError("workers must be at least 1");
    }
    if (max_iterations == 0) {
        throw ConfigError("max_iterations must be at least 1");
    }
}

std::size_t default_workers() noexcept {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

}  // namespace ssvm
