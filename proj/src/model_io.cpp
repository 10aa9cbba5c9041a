#include "ssvm/model_io.hpp"

#include "ssvm/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace ssvm {

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_size(std::string_view s, std::size_t& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
}

class LineReader {
  public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::string next(const char* what) {
        std::string line;
        if (!std::getline(in_, line)) {
            throw ModelLoadError(std::string("truncated model: missing ") + what);
        }
        ++line_no_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        return line;
    }

    [[nodiscard]] std::size_t line_no() const noexcept { return line_no_; }

  private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

std::pair<std::string, std::string> split_key(const std::string& line) {
    const auto sp = line.find(' ');
    if (sp == std::string::npos) {
        return {line, {}};
    }
    return {line.substr(0, sp), line.substr(sp + 1)};
}

}  // namespace

SvmModel extract_model(const PrototypeStore& store, double beta, const TrainerConfig& config, std::size_t iterations) {
    SvmModel model;
    model.kernel.sigma2 = config.sigma2;
    model.beta = beta;
    model.metadata = {config.c, config.epsilon, std::string(heuristic_name(config.heuristic)), iterations};
    for (std::size_t i = 0; i < store.size(); ++i) {
        const double alpha = store.alpha(i);
        if (alpha > 0.0) {
            const auto row = store.features(i);
            model.support_vectors.push_back(
                {alpha * store.label(i), std::vector<double>(row.begin(), row.end()), sparse_dot(row, row)});
        }
    }
    if (model.support_vectors.empty()) {
        throw DegenerateModelError("solution has no support vectors");
    }
    return model;
}

double decision_value(const SvmModel& model, FeatureRow z) {
    const double z_self = sparse_dot(z, z);
    double sum = 0.0;
    for (const auto& sv : model.support_vectors) {
        sum += sv.coefficient * rbf(sv.features, sv.self_dot, z, z_self, model.kernel);
    }
    return sum - model.beta;
}

double decision_value(const SvmModel& model, const SparseSample& z) {
    const auto cells = to_feature_cells(z);
    return decision_value(model, FeatureRow(cells));
}

double predict(const SvmModel& model, const SparseSample& z) { return decision_value(model, z) >= 0.0 ? 1.0 : -1.0; }

double evaluate(const SvmModel& model, std::span<const SparseSample> testset) {
    if (testset.empty()) {
        throw PreconditionError("cannot evaluate on an empty test set");
    }
    std::size_t correct = 0;
    for (const auto& z : testset) {
        if (predict(model, z) == z.label) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(testset.size());
}

void save_model(const SvmModel& model, std::ostream& out) {
    out << "svm_model v1\n";
    out << "kernel rbf\n";
    out << "sigma2 " << format_double(model.kernel.sigma2) << '\n';
    out << "beta " << format_double(model.beta) << '\n';
    out << "c " << format_double(model.metadata.c) << '\n';
    out << "epsilon " << format_double(model.metadata.epsilon) << '\n';
    out << "heuristic " << model.metadata.heuristic << '\n';
    out << "iterations " << model.metadata.iterations << '\n';
    out << "nsv " << model.support_vectors.size() << '\n';
    for (const auto& sv : model.support_vectors) {
        out << format_double(sv.coefficient);
        for (std::size_t k = 0; k + 1 < sv.features.size(); k += 2) {
            out << ' ' << static_cast<std::uint64_t>(sv.features[k]) << ':' << format_double(sv.features[k + 1]);
        }
        out << '\n';
    }
}

void save_model(const SvmModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    save_model(model, out);
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

SvmModel load_model(std::istream& in) {
    LineReader reader(in);
    SvmModel model;

    if (reader.next("version line") != "svm_model v1") {
        throw ModelLoadError("unsupported model version (expected 'svm_model v1')");
    }
    if (reader.next("kernel line") != "kernel rbf") {
        throw ModelLoadError("unsupported kernel (expected 'kernel rbf')");
    }

    auto expect_double = [&](const char* key) {
        const auto [k, v] = split_key(reader.next(key));
        double out = 0.0;
        if (k != key || !parse_double(v, out)) {
            throw ModelLoadError("line " + std::to_string(reader.line_no()) + ": expected '" + key + " <number>'");
        }
        return out;
    };
    model.kernel.sigma2 = expect_double("sigma2");
    model.beta = expect_double("beta");
    if (!(model.kernel.sigma2 > 0.0) || !std::isfinite(model.beta)) {
        throw ModelLoadError("invalid sigma2 or beta");
    }

    std::size_t nsv = 0;
    for (;;) {
        const auto [k, v] = split_key(reader.next("nsv line"));
        bool ok = true;
        if (k == "c") {
            ok = parse_double(v, model.metadata.c);
        } else if (k == "epsilon") {
            ok = parse_double(v, model.metadata.epsilon);
        } else if (k == "heuristic") {
            model.metadata.heuristic = v;
        } else if (k == "iterations") {
            ok = parse_size(v, model.metadata.iterations);
        } else if (k == "nsv") {
            if (!parse_size(v, nsv)) {
                throw ModelLoadError("line " + std::to_string(reader.line_no()) + ": malformed nsv");
            }
            break;
        } else {
            throw ModelLoadError("line " + std::to_string(reader.line_no()) + ": unexpected header key '" + k + "'");
        }
        if (!ok) {
            throw ModelLoadError("line " + std::to_string(reader.line_no()) + ": malformed value for '" + k + "'");
        }
    }
    if (nsv == 0) {
        throw ModelLoadError("model has no support vectors");
    }

    model.support_vectors.reserve(nsv);
    for (std::size_t s = 0; s < nsv; ++s) {
        const std::string line = reader.next("support vector row");
        std::istringstream tokens(line);
        std::string token;
        SupportVector sv;
        if (!(tokens >> token) || !parse_double(token, sv.coefficient)) {
            throw ModelLoadError("line " + std::to_string(reader.line_no()) + ": malformed coefficient");
        }
        double last_id = 0.0;
        while (tokens >> token) {
            const auto colon = token.find(':');
            std::size_t id = 0;
            double value = 0.0;
            if (colon == std::string::npos || !parse_size(std::string_view(token).substr(0, colon), id) ||
                !parse_double(std::string_view(token).substr(colon + 1), value) || id == 0 ||
                static_cast<double>(id) <= last_id) {
                throw ModelLoadError("line " + std::to_string(reader.line_no()) + ": malformed feature '" + token + "'");
            }
            last_id = static_cast<double>(id);
            sv.features.push_back(last_id);
            sv.features.push_back(value);
        }
        sv.self_dot = sparse_dot(sv.features, sv.features);
        model.support_vectors.push_back(std::move(sv));
    }
    return model;
}

SvmModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ModelLoadError("cannot open " + path.string());
    }
    return load_model(in);
}

}  // namespace ssvm
