#include "ssvm/errors.hpp"
#include "ssvm/model_io.hpp"
#include "ssvm/smo_core.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

using namespace ssvm;

namespace {

std::vector<SparseSample> toy4() {
    return {
        {{1, 2}, {1.0, 1.0}, 1.0},
        {{1, 2}, {2.0, 2.5}, 1.0},
        {{1, 2}, {-1.0, -1.0}, -1.0},
        {{1, 2}, {-2.0, -1.5}, -1.0},
    };
}

struct Trained {
    std::vector<SparseSample> samples;
    PrototypeStore store;
    TrainResult result;
};

Trained train_clusters(std::size_t n, std::uint64_t seed) {
    testing::SyntheticSpec spec;
    spec.n = n;
    spec.dim = 5;
    spec.density = 0.6;
    spec.separation = 0.6;
    spec.label_flip = 0.05;
    spec.seed = seed;
    Trained t;
    t.samples = testing::make_clusters(spec);
    TrainerConfig cfg;
    cfg.c = 4.0;
    cfg.sigma2 = 5.0;
    cfg.epsilon = 1e-5;
    cfg.heuristic = Heuristic::multi10pc;
    t.store = build_store(t.samples, cfg.c);
    t.result = train(t.store, cfg);
    return t;
}

}  // namespace

TEST_CASE("extract_model") {
    const auto samples = toy4();
    auto store = build_store(samples, 1.0);
    TrainerConfig cfg;

    SUBCASE("no support vectors is an error") {
        CHECK_THROWS_AS((void)extract_model(store, 0.0, cfg), DegenerateModelError);
    }

    SUBCASE("one row per positive multiplier with coefficient alpha * y") {
        const auto r = train(store, cfg);
        std::size_t expected = 0;
        for (std::size_t i = 0; i < store.size(); ++i) {
            expected += store.alpha(i) > 0.0 ? 1 : 0;
        }
        REQUIRE(r.model.support_vectors.size() == expected);
        std::size_t k = 0;
        for (std::size_t i = 0; i < store.size(); ++i) {
            if (store.alpha(i) > 0.0) {
                CHECK(r.model.support_vectors[k].coefficient == store.alpha(i) * store.label(i));
                ++k;
            }
        }
        // The oracle's support set on this problem: the two inner points.
        const auto k4 = testing::kernel_matrix(samples, cfg.sigma2);
        const auto qp = testing::solve_dual_qp(k4, testing::labels_of(samples), cfg.c);
        std::size_t oracle_nsv = 0;
        for (const double a : qp.alpha) {
            oracle_nsv += a > 1e-6 ? 1 : 0;
        }
        CHECK(r.model.support_vectors.size() == oracle_nsv);
        CHECK(r.model.metadata.iterations == r.report.iterations);
    }
}

TEST_CASE("decision_value matches a dense evaluation") {
    const auto t = train_clusters(80, 12);
    const auto& model = t.result.model;
    const std::uint32_t dim = testing::max_dim(t.samples);

    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        SparseSample z;
        for (std::uint32_t f = 1; f <= dim + 1; ++f) {
            if (trial % 3 != 0 || f % 2 == 0) {
                z.indices.push_back(f);
                z.values.push_back(g(rng));
            }
        }
        double expected = -model.beta;
        const auto zd = testing::densify(z, dim + 1);
        for (std::size_t i = 0; i < t.store.size(); ++i) {
            if (t.store.alpha(i) > 0.0) {
                expected += t.store.alpha(i) * t.store.label(i) *
                            testing::dense_rbf(testing::densify(t.samples[i], dim + 1), zd, model.kernel.sigma2);
            }
        }
        CHECK(decision_value(model, z) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("predict and evaluate") {
    SvmModel m;
    m.kernel.sigma2 = 1.0;
    m.support_vectors.push_back({1.0, {1.0, 0.0}, 0.0});  // coefficient 1 at the origin
    const SparseSample origin{{}, {}, 1.0};

    m.beta = 0.5;  // f(0) = 1 - 0.5
    CHECK(predict(m, origin) == 1.0);
    m.beta = 1.5;
    CHECK(predict(m, origin) == -1.0);
    m.beta = 1.0;  // exactly zero maps to +1
    CHECK(decision_value(m, origin) == 0.0);
    CHECK(predict(m, origin) == 1.0);

    const std::vector<SparseSample> none;
    CHECK_THROWS_AS((void)evaluate(m, none), PreconditionError);

    const auto samples = toy4();
    auto store = build_store(samples, 1.0);
    const auto r = train(store, TrainerConfig{});
    CHECK(evaluate(r.model, samples) == 1.0);
}

TEST_CASE("save and load round trip") {
    const auto t = train_clusters(120, 5);
    std::stringstream buf;
    save_model(t.result.model, buf);
    const std::string text = buf.str();
    CHECK(text.rfind("svm_model v1\nkernel rbf\n", 0) == 0);

    const auto back = load_model(buf);
    CHECK(back == t.result.model);

    // Saving the reloaded model reproduces the file byte for byte.
    std::stringstream again;
    save_model(back, again);
    CHECK(again.str() == text);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.5);
    for (int i = 0; i < 100; ++i) {
        SparseSample z;
        for (std::uint32_t f = 1; f <= 5; ++f) {
            z.indices.push_back(f);
            z.values.push_back(g(rng));
        }
        CHECK(decision_value(back, z) == decision_value(t.result.model, z));
        CHECK(predict(back, z) == predict(t.result.model, z));
    }

    // The training metadata lines are optional.
    std::string bare;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        const auto key = line.substr(0, line.find(' '));
        if (key != "c" && key != "epsilon" && key != "heuristic" && key != "iterations") {
            bare += line + '\n';
        }
    }
    std::istringstream bare_in(bare);
    const auto minimal = load_model(bare_in);
    CHECK(minimal.beta == t.result.model.beta);
    CHECK(minimal.support_vectors == t.result.model.support_vectors);
    CHECK(minimal.metadata.iterations == 0);

    const auto path = std::filesystem::temp_directory_path() / "ssvm_test_roundtrip.model";
    save_model(t.result.model, path);
    CHECK(load_model(path) == t.result.model);
    std::filesystem::remove(path);
}

TEST_CASE("load_model rejects damaged files") {
    const auto t = train_clusters(60, 8);
    std::stringstream buf;
    save_model(t.result.model, buf);
    const std::string text = buf.str();

    auto load_text = [](const std::string& s) {
        std::istringstream in(s);
        return load_model(in);
    };

    SUBCASE("wrong version") {
        std::string bad = text;
        bad.replace(0, 12, "svm_model v9");
        CHECK_THROWS_AS((void)load_text(bad), ModelLoadError);
    }
    SUBCASE("unknown kernel") {
        std::string bad = text;
        bad.replace(bad.find("kernel rbf"), 10, "kernel lin");
        CHECK_THROWS_AS((void)load_text(bad), ModelLoadError);
    }
    SUBCASE("truncated support vector rows") {
        const std::string bad = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
        CHECK_THROWS_AS((void)load_text(bad), ModelLoadError);
    }
    SUBCASE("malformed feature token") {
        std::string bad = text;
        const auto pos = bad.find(':', bad.find("nsv"));
        bad[pos] = ';';
        CHECK_THROWS_AS((void)load_text(bad), ModelLoadError);
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS((void)load_text(""), ModelLoadError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)load_model(std::filesystem::path("/nonexistent/dir/x.model")), ModelLoadError);
    }
}
