// Command-line front end: train, predict, bench.
//
// Exit codes: 0 success, 1 I/O or data error, 2 configuration error,
// 3 non-convergence, 4 heuristic results disagree (bench --check-equivalence).

#include "ssvm/config.hpp"
#include "ssvm/errors.hpp"
#include "ssvm/model_io.hpp"
#include "ssvm/shrinking.hpp"
#include "ssvm/smo_core.hpp"
#include "ssvm/sparse_data.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitMismatch = 4;

ssvm::LabelPolicy parse_policy(const std::string& name) {
    if (name == "strict") {
        return ssvm::LabelPolicy::strict;
    }
    if (name == "zero-one") {
        return ssvm::LabelPolicy::zero_one;
    }
    if (name == "unlabeled") {
        return ssvm::LabelPolicy::unlabeled;
    }
    throw ssvm::ConfigError("unknown label policy '" + name + "'");
}

ssvm::Heuristic heuristic_or_throw(const std::string& name) {
    const auto h = ssvm::parse_heuristic(name);
    if (!h) {
        throw ssvm::ConfigError("unknown heuristic '" + name + "'");
    }
    return *h;
}

nlohmann::ordered_json report_json(const ssvm::TrainReport& r, const ssvm::TrainerConfig& cfg, std::size_t n) {
    nlohmann::ordered_json j;
    j["heuristic"] = r.heuristic;
    j["workers"] = r.workers;
    j["n_samples"] = n;
    j["c"] = cfg.c;
    j["sigma2"] = cfg.sigma2;
    j["epsilon"] = cfg.epsilon;
    j["iterations"] = r.iterations;
    j["n_support"] = r.n_support;
    j["beta"] = r.beta;
    j["beta_up"] = r.beta_up;
    j["beta_low"] = r.beta_low;
    j["gap"] = r.gap();
    j["recon_count"] = r.recon_count;
    j["reactivations"] = r.reactivations;
    j["total_seconds"] = r.total_seconds;
    j["train_seconds"] = r.train_seconds;
    j["recon_seconds"] = r.recon_seconds;
    return j;
}

struct TrainOptions {
    std::string data;
    double c = 0.0;
    double sigma2 = 0.0;
    double eps = 1e-3;
    std::string heuristic = "original";
    std::size_t workers = 0;
    std::string model_out;
    std::string report;
    std::size_t max_iter = 10'000'000;
    std::string label_policy = "strict";
};

int cmd_train(const TrainOptions& o) {
    ssvm::TrainerConfig cfg;
    cfg.c = o.c;
    cfg.sigma2 = o.sigma2;
    cfg.epsilon = o.eps;
    cfg.heuristic = heuristic_or_throw(o.heuristic);
    cfg.workers = o.workers == 0 ? ssvm::default_workers() : o.workers;
    cfg.max_iterations = o.max_iter;
    cfg.validate();
    const auto policy = parse_policy(o.label_policy);
    if (policy == ssvm::LabelPolicy::unlabeled) {
        throw ssvm::ConfigError("training needs labels");
    }

    const auto data = ssvm::read_svmlight_file(o.data, policy);
    auto store = ssvm::build_store(data.samples, cfg.c);
    const auto result = ssvm::train(store, cfg);

    const std::string model_path = o.model_out.empty() ? o.data + ".model" : o.model_out;
    ssvm::save_model(result.model, model_path);

    const auto j = report_json(result.report, cfg, store.size());
    if (!o.report.empty()) {
        std::ofstream out(o.report);
        if (!out) {
            throw ssvm::Error("cannot write " + o.report);
        }
        out << j.dump(2) << '\n';
    }
    std::cout << "converged: " << result.report.iterations << " iterations, " << result.report.n_support
              << " support vectors, beta " << result.report.beta << ", " << result.report.total_seconds << " s\n"
              << "model written to " << model_path << '\n';
    return 0;
}

struct PredictOptions {
    std::string model;
    std::string data;
    std::string out;
    std::string label_policy = "strict";
};

int cmd_predict(const PredictOptions& o) {
    const auto policy = parse_policy(o.label_policy);
    const auto model = ssvm::load_model(std::filesystem::path(o.model));
    const auto data = ssvm::read_svmlight_file(o.data, policy);

    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) {
            throw ssvm::Error("cannot write " + o.out);
        }
    }
    std::ostream& sink = o.out.empty() ? std::cout : file;

    std::size_t correct = 0;
    for (const auto& z : data.samples) {
        const double label = ssvm::predict(model, z);
        sink << (label > 0 ? "+1" : "-1") << '\n';
        if (label == z.label) {
            ++correct;
        }
    }
    if (data.labeled && !data.samples.empty()) {
        const double acc = static_cast<double>(correct) / static_cast<double>(data.samples.size());
        std::cerr << "accuracy " << acc << " (" << correct << "/" << data.samples.size() << ")\n";
        if (!o.out.empty()) {
            std::cout << "accuracy " << acc << " (" << correct << "/" << data.samples.size() << ")\n";
        }
    }
    return 0;
}

struct BenchOptions {
    std::string data;
    double c = 0.0;
    double sigma2 = 0.0;
    double eps = 1e-3;
    std::string heuristics = "all";
    std::string workers = "1";
    std::size_t max_iter = 10'000'000;
    std::string label_policy = "strict";
    bool check_equivalence = false;
    double equivalence_tol = 1e-6;
    bool keep_going = false;
    std::string json;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

int cmd_bench(const BenchOptions& o) {
    std::vector<ssvm::Heuristic> heuristics;
    if (o.heuristics == "all") {
        heuristics.assign(ssvm::kAllHeuristics.begin(), ssvm::kAllHeuristics.end());
    } else {
        for (const auto& name : split_list(o.heuristics)) {
            heuristics.push_back(heuristic_or_throw(name));
        }
    }
    std::vector<std::size_t> workers;
    for (const auto& w : split_list(o.workers)) {
        std::size_t v = 0;
        try {
            v = std::stoul(w);
        } catch (const std::exception&) {
            throw ssvm::ConfigError("bad worker count '" + w + "'");
        }
        workers.push_back(v);
    }
    if (heuristics.empty() || workers.empty()) {
        throw ssvm::ConfigError("need at least one heuristic and one worker count");
    }
    const auto policy = parse_policy(o.label_policy);
    const auto data = ssvm::read_svmlight_file(o.data, policy);

    std::printf("%-11s %7s %10s %9s %9s %9s %6s %7s %14s %10s %s\n", "heuristic", "workers", "iterations", "total_s",
                "train_s", "recon_s", "recons", "n_sv", "beta", "gap", "status");

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    bool any_failed = false;
    bool mismatch = false;
    bool have_reference = false;
    std::set<std::size_t> ref_ids;
    double ref_beta = 0.0;

    for (const auto h : heuristics) {
        for (const auto w : workers) {
            ssvm::TrainerConfig cfg;
            cfg.c = o.c;
            cfg.sigma2 = o.sigma2;
            cfg.epsilon = o.eps;
            cfg.heuristic = h;
            cfg.workers = w;
            cfg.max_iterations = o.max_iter;
            cfg.validate();

            auto store = ssvm::build_store(data.samples, cfg.c);
            try {
                const auto result = ssvm::train(store, cfg);
                std::set<std::size_t> ids;
                for (std::size_t i = 0; i < store.size(); ++i) {
                    if (store.alpha(i) > 0.0) {
                        ids.insert(i);
                    }
                }
                std::string status = "ok";
                if (o.check_equivalence) {
                    if (!have_reference) {
                        ref_ids = ids;
                        ref_beta = result.report.beta;
                        have_reference = true;
                    } else if (ids != ref_ids || std::abs(result.report.beta - ref_beta) > o.equivalence_tol) {
                        status = "MISMATCH";
                        mismatch = true;
                    }
                }
                const auto& r = result.report;
                std::printf("%-11s %7zu %10zu %9.3f %9.3f %9.3f %6zu %7zu %14.8g %10.3g %s\n", r.heuristic.c_str(),
                            r.workers, r.iterations, r.total_seconds, r.train_seconds, r.recon_seconds, r.recon_count,
                            r.n_support, r.beta, r.gap(), status.c_str());
                auto j = report_json(r, cfg, store.size());
                j["status"] = status;
                rows.push_back(std::move(j));
            } catch (const ssvm::NonConvergenceError& e) {
                any_failed = true;
                std::printf("%-11s %7zu %10zu %9s %9s %9s %6s %7s %14s %10s %s\n",
                            std::string(ssvm::heuristic_name(h)).c_str(), w, e.iterations(), "-", "-", "-", "-", "-",
                            "-", "-", "NONCONVERGED");
                rows.push_back({{"heuristic", ssvm::heuristic_name(h)}, {"workers", w}, {"status", "nonconverged"}});
                if (!o.keep_going) {
                    return kExitNonConvergence;
                }
            }
        }
    }
    if (!o.json.empty()) {
        std::ofstream out(o.json);
        out << rows.dump(2) << '\n';
    }
    if (any_failed) {
        return kExitNonConvergence;
    }
    return mismatch ? kExitMismatch : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel SMO trainer for Gaussian-kernel SVMs with shrinking heuristics"};
    app.require_subcommand(1);

    TrainOptions train;
    auto* tr = app.add_subcommand("train", "train a model on an svmlight dataset");
    tr->add_option("--data", train.data, "training data (svmlight)")->required();
    tr->add_option("--c", train.c, "regularization C")->required();
    tr->add_option("--sigma2", train.sigma2, "Gaussian kernel width sigma^2")->required();
    tr->add_option("--eps", train.eps, "KKT tolerance")->capture_default_str();
    tr->add_option("--heuristic", train.heuristic, "original | single2 ... multi50pc")->capture_default_str();
    tr->add_option("--workers", train.workers, "worker threads (0 = hardware concurrency)")->capture_default_str();
    tr->add_option("--model-out", train.model_out, "model file (default <data>.model)");
    tr->add_option("--report", train.report, "JSON report file");
    tr->add_option("--max-iter", train.max_iter, "iteration cap")->capture_default_str();
    tr->add_option("--label-policy", train.label_policy, "strict | zero-one")->capture_default_str();

    PredictOptions pred;
    auto* pr = app.add_subcommand("predict", "classify an svmlight dataset with a saved model");
    pr->add_option("--model", pred.model, "model file")->required();
    pr->add_option("--data", pred.data, "data to classify (svmlight)")->required();
    pr->add_option("--out", pred.out, "predictions file (default stdout)");
    pr->add_option("--label-policy", pred.label_policy, "strict | zero-one | unlabeled")->capture_default_str();

    BenchOptions bench;
    auto* be = app.add_subcommand("bench", "compare heuristics and worker counts on one dataset");
    be->add_option("--data", bench.data, "training data (svmlight)")->required();
    be->add_option("--c", bench.c, "regularization C")->required();
    be->add_option("--sigma2", bench.sigma2, "Gaussian kernel width sigma^2")->required();
    be->add_option("--eps", bench.eps, "KKT tolerance")->capture_default_str();
    be->add_option("--heuristics", bench.heuristics, "comma-separated list or 'all'")->capture_default_str();
    be->add_option("--workers", bench.workers, "comma-separated worker counts")->capture_default_str();
    be->add_option("--max-iter", bench.max_iter, "iteration cap")->capture_default_str();
    be->add_option("--label-policy", bench.label_policy, "strict | zero-one")->capture_default_str();
    be->add_flag("--check-equivalence", bench.check_equivalence, "require identical SV sets and beta across cells");
    be->add_option("--equivalence-tol", bench.equivalence_tol, "beta tolerance for --check-equivalence")
        ->capture_default_str();
    be->add_flag("--keep-going", bench.keep_going, "continue after a non-converged cell");
    be->add_option("--json", bench.json, "write rows as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*tr) {
            return cmd_train(train);
        }
        if (*pr) {
            return cmd_predict(pred);
        }
        return cmd_bench(bench);
    } catch (const ssvm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ssvm::NonConvergenceError& e) {
        std::cerr << "not converged: " << e.what() << '\n';
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
