#include "ssvm/sparse_data.hpp"

#include "ssvm/errors.hpp"
#include "ssvm/index_set.hpp"
#include "ssvm/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

namespace ssvm {

namespace {

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\v' || ch == '\f'; }

template <typename T>
bool parse_number(std::string_view token, T& out) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    if (token.empty()) {
        return false;
    }
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

double map_label(double raw, LabelPolicy policy, std::size_t line_no, std::string_view token) {
    switch (policy) {
        case LabelPolicy::unlabeled:
            return 1.0;
        case LabelPolicy::zero_one:
            if (raw == 0.0) {
                return -1.0;
            }
            [[fallthrough]];
        case LabelPolicy::strict:
            if (raw == 1.0 || raw == -1.0) {
                return raw;
            }
            break;
    }
    throw LabelError(line_no, "label '" + std::string(token) + "' cannot be mapped to +1/-1");
}

}  // namespace

std::uint32_t Dataset::dimension() const noexcept {
    std::uint32_t d = 0;
    for (const auto& s : samples) {
        if (!s.indices.empty()) {
            d = std::max(d, s.indices.back());
        }
    }
    return d;
}

Dataset parse_svmlight(std::istream& in, LabelPolicy policy) {
    Dataset data;
    data.labeled = policy != LabelPolicy::unlabeled;

    std::string buffer;
    std::size_t line_no = 0;
    while (std::getline(in, buffer)) {
        ++line_no;
        std::string_view line(buffer);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }

        std::size_t pos = 0;
        auto next_token = [&]() -> std::string_view {
            while (pos < line.size() && is_space(line[pos])) {
                ++pos;
            }
            const std::size_t start = pos;
            while (pos < line.size() && !is_space(line[pos])) {
                ++pos;
            }
            return line.substr(start, pos - start);
        };

        const std::string_view label_token = next_token();
        if (label_token.empty()) {
            continue;
        }
        SparseSample sample;
        double raw_label = 0.0;
        if (!parse_number(label_token, raw_label)) {
            if (policy != LabelPolicy::unlabeled) {
                throw ParseError(line_no, "malformed label '" + std::string(label_token) + "'");
            }
        }
        sample.label = map_label(raw_label, policy, line_no, label_token);

        for (std::string_view token = next_token(); !token.empty(); token = next_token()) {
            const auto colon = token.find(':');
            if (colon == std::string_view::npos) {
                throw ParseError(line_no, "expected idx:val, got '" + std::string(token) + "'");
            }
            std::uint32_t index = 0;
            double value = 0.0;
            if (!parse_number(token.substr(0, colon), index) || !parse_number(token.substr(colon + 1), value)) {
                throw ParseError(line_no, "malformed feature '" + std::string(token) + "'");
            }
            if (index == 0) {
                throw ParseError(line_no, "feature ids are 1-based");
            }
            if (!sample.indices.empty() && index <= sample.indices.back()) {
                throw FormatError(line_no, "non-increasing feature id " + std::to_string(index));
            }
            sample.indices.push_back(index);
            sample.values.push_back(value);
        }
        data.samples.push_back(std::move(sample));
    }
    return data;
}

Dataset read_svmlight_file(const std::filesystem::path& path, LabelPolicy policy) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return parse_svmlight(in, policy);
}

std::vector<double> to_feature_cells(const SparseSample& sample) {
    std::vector<double> cells;
    cells.reserve(2 * sample.nnz());
    for (std::size_t k = 0; k < sample.nnz(); ++k) {
        cells.push_back(static_cast<double>(sample.indices[k]));
        cells.push_back(sample.values[k]);
    }
    return cells;
}

PrototypeStore::PrototypeStore(std::vector<double> cells, std::vector<std::size_t> row_ptr, double c)
    : cells_(std::move(cells)), row_ptr_(std::move(row_ptr)), c_(c) {}

SampleView PrototypeStore::view(std::size_t i) {
    if (i >= size()) {
        throw IndexError("sample " + std::to_string(i) + " out of range [0, " + std::to_string(size()) + ")");
    }
    return {SampleHeader(header(i), kHeaderCells), features(i)};
}

ConstSampleView PrototypeStore::view(std::size_t i) const {
    if (i >= size()) {
        throw IndexError("sample " + std::to_string(i) + " out of range [0, " + std::to_string(size()) + ")");
    }
    return {ConstSampleHeader(header(i), kHeaderCells), features(i)};
}

void PrototypeStore::reset_state() {
    for (std::size_t i = 0; i < size(); ++i) {
        double* h = header(i);
        h[kAlpha] = 0.0;
        h[kIndexSet] = to_cell(classify_index(0.0, h[kLabel], c_));
        h[kGamma] = -h[kLabel];
    }
}

PrototypeStore build_store(std::span<const SparseSample> samples, double c) {
    if (samples.empty()) {
        throw PreconditionError("cannot build a store from zero samples");
    }
    std::size_t total = 0;
    for (const auto& s : samples) {
        total += kHeaderCells + 2 * s.nnz();
    }

    std::vector<double> cells;
    cells.reserve(total);
    std::vector<std::size_t> row_ptr;
    row_ptr.reserve(samples.size() + 1);
    row_ptr.push_back(0);

    for (const auto& s : samples) {
        if (s.label != 1.0 && s.label != -1.0) {
            throw PreconditionError("labels must be +1 or -1");
        }
        cells.push_back(0.0);
        cells.push_back(to_cell(classify_index(0.0, s.label, c)));
        cells.push_back(-s.label);
        cells.push_back(s.label);
        for (std::size_t k = 0; k < s.nnz(); ++k) {
            cells.push_back(static_cast<double>(s.indices[k]));
            cells.push_back(s.values[k]);
        }
        row_ptr.push_back(cells.size());
    }
    return PrototypeStore(std::move(cells), std::move(row_ptr), c);
}

SelfDotTable compute_self_dots(const PrototypeStore& store) {
    SelfDotTable table(store.size());
    for (std::size_t i = 0; i < store.size(); ++i) {
        const auto row = store.features(i);
        table[i] = sparse_dot(row, row);
    }
    return table;
}

DensityReport density_report(std::span<const SparseSample> samples, std::size_t dimension) {
    DensityReport r;
    r.n_samples = samples.size();
    std::size_t nnz = 0;
    std::size_t max_id = 0;
    for (const auto& s : samples) {
        nnz += s.nnz();
        if (!s.indices.empty()) {
            max_id = std::max<std::size_t>(max_id, s.indices.back());
        }
    }
    r.n_features = dimension == 0 ? max_id : dimension;

    constexpr std::size_t cell = sizeof(double);
    r.dense_bytes = r.n_samples * r.n_features * cell;
    r.csr_bytes = (kHeaderCells * r.n_samples + 2 * nnz) * cell + (r.n_samples + 1) * cell;
    const double dense_cells = static_cast<double>(r.n_samples) * static_cast<double>(r.n_features);
    r.nonzero_fraction = dense_cells > 0 ? static_cast<double>(nnz) / dense_cells : 0.0;
    if (r.dense_bytes > 0) {
        r.conserved = std::max(0.0, 1.0 - static_cast<double>(r.csr_bytes) / static_cast<double>(r.dense_bytes));
    }
    return r;
}

}  // namespace ssvm
