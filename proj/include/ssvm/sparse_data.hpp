#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace ssvm {

/// One labeled sparse row. Feature ids are 1-based and strictly increasing.
struct SparseSample {
    std::vector<std::uint32_t> indices;
    std::vector<double> values;
    double label = 1.0;

    [[nodiscard]] std::size_t nnz() const noexcept { return indices.size(); }
    friend bool operator==(const SparseSample&, const SparseSample&) = default;
};

enum class LabelPolicy {
    strict,     ///< only +1 / -1 accepted
    zero_one,   ///< 0 -> -1, 1 -> +1 (+1/-1 still accepted)
    unlabeled,  ///< label token is read but ignored; every sample gets +1
};

struct Dataset {
    std::vector<SparseSample> samples;
    bool labeled = true;

    /// Largest feature id seen (0 for an all-empty dataset).
    [[nodiscard]] std::uint32_t dimension() const noexcept;
};

/// Parses svmlight/libsvm text: `label idx:val ...`, `#` starts a comment.
/// Blank lines are skipped. Throws ParseError / FormatError / LabelError.
[[nodiscard]] Dataset parse_svmlight(std::istream& in, LabelPolicy policy = LabelPolicy::strict);
[[nodiscard]] Dataset read_svmlight_file(const std::filesystem::path& path, LabelPolicy policy = LabelPolicy::strict);

/// Interleaved (id, value) cells of one row: [id0, v0, id1, v1, ...].
using FeatureRow = std::span<const double>;

/// Interleaves a sample's features into the cell layout used by the store.
[[nodiscard]] std::vector<double> to_feature_cells(const SparseSample& sample);

// Header slots of a stored row.
inline constexpr std::size_t kAlpha = 0;
inline constexpr std::size_t kIndexSet = 1;
inline constexpr std::size_t kGamma = 2;
inline constexpr std::size_t kLabel = 3;
inline constexpr std::size_t kHeaderCells = 4;

using SampleHeader = std::span<double, kHeaderCells>;
using ConstSampleHeader = std::span<const double, kHeaderCells>;

struct SampleView {
    SampleHeader header;
    FeatureRow features;
};

struct ConstSampleView {
    ConstSampleHeader header;
    FeatureRow features;
};

/// All samples packed into one flat array of doubles. Row i occupies
/// cells[row_ptr[i], row_ptr[i+1]) and is laid out as
///   [alpha, index-set, gamma, y, id1, val1, id2, val2, ...]
/// Feature cells and row_ptr never change after construction; only the
/// four header cells are written during training.
class PrototypeStore {
  public:
    PrototypeStore() = default;
    PrototypeStore(std::vector<double> cells, std::vector<std::size_t> row_ptr, double c);

    [[nodiscard]] std::size_t size() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
    [[nodiscard]] double c() const noexcept { return c_; }
    [[nodiscard]] std::span<const double> cells() const noexcept { return cells_; }
    [[nodiscard]] std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }

    /// Bounds-checked; throws IndexError.
    [[nodiscard]] SampleView view(std::size_t i);
    [[nodiscard]] ConstSampleView view(std::size_t i) const;

    // Unchecked accessors for the hot loops.
    [[nodiscard]] double* header(std::size_t i) noexcept { return cells_.data() + row_ptr_[i]; }
    [[nodiscard]] const double* header(std::size_t i) const noexcept { return cells_.data() + row_ptr_[i]; }
    [[nodiscard]] FeatureRow features(std::size_t i) const noexcept {
        return {cells_.data() + row_ptr_[i] + kHeaderCells, row_ptr_[i + 1] - row_ptr_[i] - kHeaderCells};
    }
    [[nodiscard]] double alpha(std::size_t i) const noexcept { return header(i)[kAlpha]; }
    [[nodiscard]] double gamma(std::size_t i) const noexcept { return header(i)[kGamma]; }
    [[nodiscard]] double label(std::size_t i) const noexcept { return header(i)[kLabel]; }

    /// Back to the initial optimizer state: alpha = 0, gamma = -y.
    void reset_state();

  private:
    std::vector<double> cells_;
    std::vector<std::size_t> row_ptr_;
    double c_ = 0.0;
};

/// Packs samples into a store with alpha = 0, gamma = -y. Throws
/// PreconditionError on an empty list and on labels outside {+1, -1}.
[[nodiscard]] PrototypeStore build_store(std::span<const SparseSample> samples, double c);

/// Per-sample <x_i, x_i>, computed once at load.
using SelfDotTable = std::vector<double>;
[[nodiscard]] SelfDotTable compute_self_dots(const PrototypeStore& store);

struct DensityReport {
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    double nonzero_fraction = 0.0;
    std::size_t dense_bytes = 0;
    std::size_t csr_bytes = 0;
    /// 1 - csr/dense, clamped at 0 (a fraction, not scaled by 100).
    double conserved = 0.0;
};

/// `dimension` of 0 means "use the largest feature id present".
[[nodiscard]] DensityReport density_report(std::span<const SparseSample> samples, std::size_t dimension = 0);

}  // namespace ssvm
