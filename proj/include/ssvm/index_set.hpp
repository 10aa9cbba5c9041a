#pragma once

#include <cstdint>

namespace ssvm {

// Boundary status of a multiplier. Stored in header cell 1 as a double.
//   I0: 0 < alpha < C
//   I1: y = +1, alpha = 0      I2: y = -1, alpha = C
//   I3: y = +1, alpha = C      I4: y = -1, alpha = 0
enum class IndexSet : std::uint8_t { I0 = 0, I1 = 1, I2 = 2, I3 = 3, I4 = 4 };

/// Bounds are compared with exact equality; the pair update writes exact 0 or C when clipping.
[[nodiscard]] constexpr IndexSet classify_index(double alpha, double y, double c) noexcept {
    if (alpha > 0.0 && alpha < c) {
        return IndexSet::I0;
    }
    const bool positive = y > 0.0;
    if (alpha <= 0.0) {
        return positive ? IndexSet::I1 : IndexSet::I4;
    }
    return positive ? IndexSet::I3 : IndexSet::I2;
}

/// Members may supply beta_up (I0, I1, I2).
[[nodiscard]] constexpr bool in_up_set(IndexSet s) noexcept {
    return s == IndexSet::I0 || s == IndexSet::I1 || s == IndexSet::I2;
}

/// Members may supply beta_low (I0, I3, I4).
[[nodiscard]] constexpr bool in_low_set(IndexSet s) noexcept {
    return s == IndexSet::I0 || s == IndexSet::I3 || s == IndexSet::I4;
}

[[nodiscard]] constexpr double to_cell(IndexSet s) noexcept { return static_cast<double>(static_cast<std::uint8_t>(s)); }

[[nodiscard]] constexpr IndexSet from_cell(double cell) noexcept {
    return static_cast<IndexSet>(static_cast<std::uint8_t>(cell));
}

}  // namespace ssvm
