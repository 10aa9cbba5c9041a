#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ssvm {

/// Shrinking heuristics. `original` disables shrinking; the rest pair an
/// initial-shrink trigger (fixed iteration count or fraction of the
/// training set) with single or multiple gradient reconstruction.
enum class Heuristic {
    original,
    single2,
    single500,
    single1000,
    single5pc,
    single10pc,
    single50pc,
    multi2,
    multi500,
    multi1000,
    multi5pc,
    multi10pc,
    multi50pc,
};

inline constexpr std::array<Heuristic, 13> kAllHeuristics = {
    Heuristic::original,  Heuristic::single2,   Heuristic::single500,  Heuristic::single1000, Heuristic::single5pc,
    Heuristic::single10pc, Heuristic::single50pc, Heuristic::multi2,   Heuristic::multi500,   Heuristic::multi1000,
    Heuristic::multi5pc,  Heuristic::multi10pc,  Heuristic::multi50pc,
};

[[nodiscard]] std::string_view heuristic_name(Heuristic h) noexcept;
/// Case-insensitive. Returns nullopt for unknown names.
[[nodiscard]] std::optional<Heuristic> parse_heuristic(std::string_view name);

struct TrainerConfig {
    double c = 1.0;
    double sigma2 = 1.0;
    double epsilon = 1e-3;
    Heuristic heuristic = Heuristic::original;
    std::size_t workers = 1;
    std::size_t max_iterations = 10'000'000;

    /// Throws ConfigError unless c, sigma2, epsilon are positive and finite
    /// and workers >= 1.
    void validate() const;
};

/// std::thread::hardware_concurrency(), or 1 when unknown.
[[nodiscard]] std::size_t default_workers() noexcept;

}  // namespace ssvm
