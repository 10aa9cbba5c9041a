#include "ssvm/parallel_engine.hpp"
#include "ssvm/smo_core.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>

#include <atomic>
#include <cstring>
#include <numeric>
#include <random>
#include <stdexcept>

using namespace ssvm;

TEST_CASE("make_partitions") {
    const auto two = make_partitions(10, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == Partition{0, 0, 5});
    CHECK(two[1] == Partition{1, 5, 10});

    const auto three = make_partitions(10, 3);
    REQUIRE(three.size() == 3);
    CHECK(three[0] == Partition{0, 0, 4});
    CHECK(three[1] == Partition{1, 4, 7});
    CHECK(three[2] == Partition{2, 7, 10});

    const auto surplus = make_partitions(2, 4);
    REQUIRE(surplus.size() == 4);
    CHECK(surplus[0].size() == 1);
    CHECK(surplus[1].size() == 1);
    CHECK(surplus[2].empty());
    CHECK(surplus[3].empty());

    // Every id is owned exactly once.
    for (std::size_t n : {1u, 7u, 64u, 1001u}) {
        for (std::size_t w : {1u, 2u, 3u, 8u}) {
            std::vector<int> owners(n, 0);
            for (const auto& p : make_partitions(n, w)) {
                for (std::size_t i = p.begin; i < p.end; ++i) {
                    ++owners[i];
                }
            }
            CHECK(std::all_of(owners.begin(), owners.end(), [](int c) { return c == 1; }));
        }
    }
}

TEST_CASE("WorkerPool runs every worker and reuses its threads") {
    WorkerPool pool(4);
    CHECK(pool.size() == 4);
    for (int round = 0; round < 50; ++round) {
        std::vector<int> hits(4, 0);
        pool.run([&](std::size_t q) { ++hits[q]; });
        CHECK(hits == std::vector<int>{1, 1, 1, 1});
    }
}

TEST_CASE("WorkerPool propagates the lowest-worker exception") {
    WorkerPool pool(3);
    std::atomic<int> finished{0};
    try {
        pool.run([&](std::size_t q) {
            if (q >= 1) {
                throw std::runtime_error("worker " + std::to_string(q));
            }
            ++finished;
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "worker 1");
    }
    CHECK(finished == 1);
    // The pool stays usable.
    std::atomic<int> count{0};
    pool.run([&](std::size_t) { ++count; });
    CHECK(count == 3);
}

TEST_CASE("parallel_for_samples") {
    WorkerPool pool(4);
    const auto parts = make_partitions(3, 4);
    std::atomic<int> calls{0};
    const auto sums = parallel_for_samples<std::size_t>(pool, parts, [&](const Partition& p) {
        ++calls;
        std::size_t s = 0;
        for (std::size_t i = p.begin; i < p.end; ++i) {
            s += i + 1;
        }
        return s;
    });
    CHECK(calls == 3);  // the empty fourth partition is skipped
    CHECK(sums == std::vector<std::size_t>{1, 2, 3, 0});

    // More partitions than workers still visits each once.
    WorkerPool small(2);
    const auto many = make_partitions(100, 5);
    const auto sizes =
        parallel_for_samples<std::size_t>(small, many, [](const Partition& p) { return p.size(); });
    CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == 100);
}

TEST_CASE("reduce_extrema") {
    SUBCASE("ties across workers go to the lower id") {
        std::vector<LocalExtrema> locals(2);
        locals[0].offer_up(-1.0, 7);
        locals[1].offer_up(-1.0, 3);
        locals[0].offer_low(2.0, 9);
        locals[1].offer_low(2.0, 4);
        const auto g = reduce_extrema(locals);
        CHECK(g.up.id == 3);
        CHECK(g.low.id == 4);
        CHECK(g.complete());
    }
    SUBCASE("empty sides") {
        std::vector<LocalExtrema> locals(3);
        locals[1].offer_up(0.5, 2);
        const auto g = reduce_extrema(locals);
        CHECK(g.up.value == 0.5);
        CHECK_FALSE(g.low.valid());
        CHECK_FALSE(g.complete());
    }
    SUBCASE("matches a flat scan for any split") {
        std::mt19937_64 rng(9);
        std::uniform_int_distribution<int> pick(0, 20);
        std::vector<double> values(500);
        for (auto& v : values) {
            v = pick(rng) * 0.25;  // many exact ties
        }
        std::size_t flat_min = 0;
        std::size_t flat_max = 0;
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (values[i] < values[flat_min]) {
                flat_min = i;
            }
            if (values[i] > values[flat_max]) {
                flat_max = i;
            }
        }
        for (std::size_t w : {1u, 2u, 3u, 7u, 16u}) {
            std::vector<LocalExtrema> locals(w);
            for (const auto& p : make_partitions(values.size(), w)) {
                for (std::size_t i = p.begin; i < p.end; ++i) {
                    locals[p.worker].offer_up(values[i], i);
                    locals[p.worker].offer_low(values[i], i);
                }
            }
            const auto g = reduce_extrema(locals);
            CHECK(g.up.id == flat_min);
            CHECK(g.low.id == flat_max);
        }
    }
}

TEST_CASE("training is bitwise identical across worker counts") {
    testing::SyntheticSpec spec;
    spec.n = 600;
    spec.dim = 10;
    spec.density = 0.5;
    spec.separation = 0.5;
    spec.label_flip = 0.05;
    spec.seed = 42;
    const auto samples = testing::make_clusters(spec);

    for (const Heuristic h : {Heuristic::original, Heuristic::multi5pc, Heuristic::single2}) {
        CAPTURE(heuristic_name(h));
        TrainerConfig cfg;
        cfg.c = 4.0;
        cfg.sigma2 = 10.0;
        cfg.epsilon = 1e-4;
        cfg.heuristic = h;

        cfg.workers = 1;
        auto ref_store = build_store(samples, cfg.c);
        const auto ref = train(ref_store, cfg);

        for (std::size_t w : {2u, 3u, 8u}) {
            cfg.workers = w;
            auto store = build_store(samples, cfg.c);
            const auto r = train(store, cfg);
            CHECK(r.report.iterations == ref.report.iterations);
            CHECK(r.report.beta == ref.report.beta);
            CHECK(r.model == ref.model);
            REQUIRE(store.cells().size() == ref_store.cells().size());
            CHECK(std::memcmp(store.cells().data(), ref_store.cells().data(),
                              store.cells().size() * sizeof(double)) == 0);
        }
    }
}
