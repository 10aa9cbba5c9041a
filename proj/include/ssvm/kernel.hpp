#pragma once

#include "ssvm/sparse_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

namespace ssvm {

/// Merge-style inner product of two interleaved (id, value) rows.
[[nodiscard]] inline double sparse_dot(FeatureRow a, FeatureRow b) noexcept {
    double dp = 0.0;
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    const std::size_t n1 = a.size();
    const std::size_t n2 = b.size();
    while (s1 < n1 && s2 < n2) {
        const double ia = a[s1];
        const double ib = b[s2];
        if (ia == ib) {
            dp += a[s1 + 1] * b[s2 + 1];
            s1 += 2;
            s2 += 2;
        } else if (ia < ib) {
            s1 += 2;
        } else {
            s2 += 2;
        }
    }
    return dp;
}

struct KernelParams {
    double sigma2 = 1.0;  ///< Gaussian width; K(x, z) = exp(-|x - z|^2 / (2 sigma2))
};

/// exp(-d2 / (2 sigma2)) with d2 clamped at 0 against cancellation.
[[nodiscard]] inline double gaussian_from_sq_distance(double sq_distance, const KernelParams& params) noexcept {
    return std::exp(-std::max(sq_distance, 0.0) / (2.0 * params.sigma2));
}

/// Gaussian kernel between two free-standing rows.
[[nodiscard]] inline double rbf(FeatureRow a, double a_self, FeatureRow b, double b_self, const KernelParams& params) noexcept {
    return gaussian_from_sq_distance(a_self + b_self - 2.0 * sparse_dot(a, b), params);
}

/// Gaussian kernel over stored samples, recomputed on every call (no cache).
/// The dot product is always evaluated as (min id, max id) so that
/// k(i, j) and k(j, i) agree bit for bit.
class RbfKernel {
  public:
    RbfKernel(const PrototypeStore& store, const SelfDotTable& self_dots, KernelParams params)
        : store_(&store), self_dots_(&self_dots), params_(params) {}

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        if (i > j) {
            std::swap(i, j);
        }
        const double d2 = (*self_dots_)[i] + (*self_dots_)[j] - 2.0 * sparse_dot(store_->features(i), store_->features(j));
        return gaussian_from_sq_distance(d2, params_);
    }

    /// Kernel between stored sample i and an external row.
    [[nodiscard]] double operator()(std::size_t i, FeatureRow z, double z_self) const noexcept {
        return rbf(store_->features(i), (*self_dots_)[i], z, z_self, params_);
    }

    [[nodiscard]] const KernelParams& params() const noexcept { return params_; }
    [[nodiscard]] const PrototypeStore& store() const noexcept { return *store_; }

  private:
    const PrototypeStore* store_;
    const SelfDotTable* self_dots_;
    KernelParams params_;
};

}  // namespace ssvm
