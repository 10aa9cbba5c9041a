#pragma once

#include "ssvm/config.hpp"
#include "ssvm/kernel.hpp"
#include "ssvm/sparse_data.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ssvm {

struct SupportVector {
    double coefficient = 0.0;  ///< alpha_i * y_i
    std::vector<double> features;  ///< interleaved (id, value) cells
    double self_dot = 0.0;

    friend bool operator==(const SupportVector&, const SupportVector&) = default;
};

/// Training settings recorded alongside the solution.
struct ModelMetadata {
    double c = 0.0;
    double epsilon = 0.0;
    std::string heuristic = "original";
    std::size_t iterations = 0;

    friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

/// Decision function f(z) = sum_i coef_i K(sv_i, z) - beta.
struct SvmModel {
    KernelParams kernel;
    double beta = 0.0;
    std::vector<SupportVector> support_vectors;
    ModelMetadata metadata;

    friend bool operator==(const SvmModel& a, const SvmModel& b) {
        return a.kernel.sigma2 == b.kernel.sigma2 && a.beta == b.beta && a.support_vectors == b.support_vectors &&
               a.metadata == b.metadata;
    }
};

/// Every stored sample with alpha > 0, coefficient alpha * y.
/// Throws DegenerateModelError when there is none.
[[nodiscard]] SvmModel extract_model(const PrototypeStore& store, double beta, const TrainerConfig& config,
                                     std::size_t iterations = 0);

[[nodiscard]] double decision_value(const SvmModel& model, FeatureRow z);
[[nodiscard]] double decision_value(const SvmModel& model, const SparseSample& z);

/// sign of the decision value; exactly 0 maps to +1.
[[nodiscard]] double predict(const SvmModel& model, const SparseSample& z);

/// Fraction of correctly classified samples. Throws PreconditionError on an empty set.
[[nodiscard]] double evaluate(const SvmModel& model, std::span<const SparseSample> testset);

/// Text format:
///   svm_model v1
///   kernel rbf
///   sigma2 <v>
///   beta <v>
///   c <v> / epsilon <v> / heuristic <name> / iterations <n>   (optional)
///   nsv <n>
///   <coef> idx:val idx:val ...        (n lines)
/// Numbers use the shortest representation that round-trips exactly.
void save_model(const SvmModel& model, std::ostream& out);
void save_model(const SvmModel& model, const std::filesystem::path& path);

/// Throws ModelLoadError on version mismatch, truncation or malformed rows.
[[nodiscard]] SvmModel load_model(std::istream& in);
[[nodiscard]] SvmModel load_model(const std::filesystem::path& path);

}  // namespace ssvm
