#include "binabc/harness/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "binabc/harness/reports.hpp"
#include "binabc/problems/binnn.hpp"
#include "binabc/problems/nas.hpp"
#include "binabc/problems/qmr.hpp"

namespace binabc {

namespace {

std::uint64_t double_label(double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    return bits;
}

}  // namespace

std::vector<RunPoint> expand_runs(const ExperimentConfig& config) {
    std::vector<RunPoint> points;
    points.reserve(config.kernels.size() * config.populations.size() *
                   config.flip_probs.size());
    for (const KernelKind kernel : config.kernels)
        for (const int population : config.populations)
            for (const double flip_prob : config.flip_probs)
                points.push_back(RunPoint{kernel, population, flip_prob});
    return points;
}

RngStream instance_stream(std::uint64_t seed, int repeat) {
    return RngStream(seed).substream("instance").substream(
        static_cast<std::uint64_t>(repeat));
}

RngStream dataset_stream(std::uint64_t seed) {
    return RngStream(seed).substream("dataset");
}

RngStream init_stream(std::uint64_t seed, int repeat) {
    return RngStream(seed).substream("init").substream(static_cast<std::uint64_t>(repeat));
}

RngStream sweep_stream(std::uint64_t seed, const RunPoint& point, int repeat) {
    return RngStream(seed)
        .substream("sweeps")
        .substream(static_cast<std::uint64_t>(point.kernel))
        .substream(static_cast<std::uint64_t>(point.population))
        .substream(double_label(point.flip_prob))
        .substream(static_cast<std::uint64_t>(repeat));
}

namespace {

std::shared_ptr<const Problem> build_shared_problem(const ExperimentConfig& config) {
    if (config.problem == ProblemKind::Binnn) {
        const auto& b = config.binnn;
        BinNetShape shape{b.input_dim, b.hidden};
        LabeledDataset train, test;
        if (b.source == "synthetic") {
            RngStream rng = dataset_stream(config.seed);
            // One generating hyperplane for both splits.
            LabeledDataset all =
                binnn_synthetic_dataset(b.input_dim, b.train_size + b.test_size, rng);
            train.input_dim = test.input_dim = b.input_dim;
            train.inputs.assign(all.inputs.begin(),
                                all.inputs.begin() + static_cast<std::ptrdiff_t>(b.train_size));
            train.labels.assign(all.labels.begin(),
                                all.labels.begin() + static_cast<std::ptrdiff_t>(b.train_size));
            test.inputs.assign(all.inputs.begin() + static_cast<std::ptrdiff_t>(b.train_size),
                               all.inputs.end());
            test.labels.assign(all.labels.begin() + static_cast<std::ptrdiff_t>(b.train_size),
                               all.labels.end());
        } else {
            train = binnn_digit_dataset(b.train_images, b.train_labels, b.digit_a, b.digit_b);
            test = binnn_digit_dataset(b.test_images, b.test_labels, b.digit_a, b.digit_b);
            if (train.input_dim != shape.input_dim)
                throw ConfigError("binnn.input_dim: digit images decode to " +
                                  std::to_string(train.input_dim) + " inputs");
        }
        return std::make_shared<BinnnProblem>(shape, std::move(train), std::move(test));
    }
    if (config.problem == ProblemKind::Nas) {
        NasTable table = config.nas.table_path.empty()
                             ? nas_synth_table(config.nas.table_seed)
                             : NasTable::load_file(config.nas.table_path);
        return std::make_shared<NasProblem>(std::move(table));
    }
    return nullptr;  // qmr instances are per repeat
}

std::shared_ptr<const Problem> build_qmr_problem(const ExperimentConfig& config,
                                                 int repeat) {
    RngStream rng = instance_stream(config.seed, repeat);
    const auto& q = config.qmr;
    return std::make_shared<QmrProblem>(qmr_sample_instance(
        q.diseases, q.findings, q.beta_a, q.beta_b, q.n_obs, q.prior_on, rng));
}

RepeatResult run_one_repeat(const ExperimentConfig& config, const RunPoint& point,
                            int repeat, const Problem& problem) {
    RepeatResult result;
    result.repeat = repeat;

    RngStream init_rng = init_stream(config.seed, repeat);
    std::vector<BitVector> chains;
    chains.reserve(static_cast<std::size_t>(point.population));
    for (int i = 0; i < point.population; ++i)
        chains.push_back(problem.sample_prior(init_rng));
    Population pop(std::move(chains));

    const KernelSpec spec = kernel_spec_for(config, point.kernel, point.flip_prob);
    RngStream sweep_rng = sweep_stream(config.seed, point, repeat);

    const bool keep_tail = config.problem == ProblemKind::Binnn;
    const std::size_t tail_len = config.binnn.ensemble_last;
    std::deque<Population> tail;

    const double epsilon_param =
        config.mode == RunMode::Abc ? config.epsilon.param() : 0.0;
    const ChainErrorFn chain_error = [&problem](const BitVector& x) {
        return problem.chain_error(x);
    };

    RunOptions opt;
    opt.iterations = config.iterations;
    opt.on_sweep = [&](const SweepStats& stats, const Population& p) {
        result.proposals += stats.proposals;
        result.within_tolerance += stats.within_tolerance;
        result.accepted += stats.accepted;
        if (keep_tail) {
            tail.push_back(p);
            if (tail.size() > tail_len)
                tail.pop_front();
        }
        if (stats.iteration % config.stride == 0) {
            const ErrorSummary errors = error_metrics(p, chain_error);
            MetricsRow row;
            row.repeat = repeat;
            row.iteration = stats.iteration;
            row.kernel = point.kernel;
            row.population = point.population;
            row.flip_prob = point.flip_prob;
            row.avg_error = errors.avg;
            row.min_error = errors.min;
            row.proposals = result.proposals;
            row.within_tolerance = result.within_tolerance;
            row.accepted = result.accepted;
            row.epsilon_param = epsilon_param;
            result.rows.push_back(row);
        }
        return true;
    };

    const auto started = std::chrono::steady_clock::now();
    if (config.mode == RunMode::Likelihood) {
        const LikelihoodTarget* target = problem.likelihood_target();
        if (target == nullptr)
            throw std::invalid_argument("run: problem has no tractable likelihood");
        result.final_pop =
            run_likelihood(*target, spec, std::move(pop), sweep_rng, opt);
    } else {
        result.final_pop =
            run_abc(problem, spec, config.epsilon, std::move(pop), sweep_rng, opt);
    }
    result.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    result.ensemble_tail.assign(tail.begin(), tail.end());
    return result;
}

}  // namespace

std::shared_ptr<const Problem> build_problem(const ExperimentConfig& config, int repeat) {
    if (config.problem == ProblemKind::Qmr)
        return build_qmr_problem(config, repeat);
    return build_shared_problem(config);
}

ExperimentOutput execute_experiment(const ExperimentConfig& config) {
    validate_config(config);
    ExperimentOutput output;
    output.config = config;

    const std::shared_ptr<const Problem> shared = build_shared_problem(config);
    const std::vector<RunPoint> points = expand_runs(config);

    for (const RunPoint& point : points) {
        PointResult point_result;
        point_result.point = point;
        point_result.repeats.resize(static_cast<std::size_t>(config.repeats));

        const auto run_repeat = [&](int repeat) {
            std::shared_ptr<const Problem> problem =
                shared ? shared : build_qmr_problem(config, repeat);
            RepeatResult res = run_one_repeat(config, point, repeat, *problem);
            res.problem = std::move(problem);
            point_result.repeats[static_cast<std::size_t>(repeat)] = std::move(res);
        };

        const int threads = std::min(config.workers, config.repeats);
        if (threads <= 1) {
            for (int repeat = 0; repeat < config.repeats; ++repeat)
                run_repeat(repeat);
        } else {
            std::atomic<int> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(threads));
            for (int t = 0; t < threads; ++t)
                pool.emplace_back([&]() {
                    for (;;) {
                        const int repeat = next.fetch_add(1);
                        if (repeat >= config.repeats)
                            return;
                        try {
                            run_repeat(repeat);
                        } catch (...) {
                            const std::lock_guard<std::mutex> lock(failure_mutex);
                            if (!failure)
                                failure = std::current_exception();
                            return;
                        }
                    }
                });
            for (auto& th : pool)
                th.join();
            if (failure)
                std::rethrow_exception(failure);
        }

        output.points.push_back(std::move(point_result));
    }
    return output;
}

namespace {

std::string sanitize_for_filename(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (const char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        out += ok ? c : '_';
    }
    return out;
}

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double safe_ratio(std::int64_t num, std::int64_t den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

nlohmann::ordered_json mean_se_json(const MeanSe& ms) {
    return {{"mean", ms.mean}, {"se", ms.se}};
}

}  // namespace

void write_experiment_outputs(const ExperimentOutput& output) {
    const ExperimentConfig& config = output.config;
    namespace fs = std::filesystem;
    const fs::path dir = config.out_dir.empty() ? fs::path(".") : fs::path(config.out_dir);
    fs::create_directories(dir);

    const std::string hash = hash_hex(config_hash(config));

    for (const KernelKind kernel : config.kernels) {
        const fs::path csv_path =
            dir / (sanitize_for_filename(config.name) + "_" +
                   sanitize_for_filename(kernel_kind_name(kernel)) + ".csv");
        std::ofstream csv(csv_path);
        if (!csv)
            throw std::runtime_error("cannot write " + csv_path.string());
        csv << "# config_hash=" << hash << "\n";
        csv << "# seed=" << config.seed << "\n";
        csv << "# kernel=" << kernel_kind_name(kernel) << "\n";
        csv << metrics_csv_header() << "\n";
        for (const PointResult& point : output.points) {
            if (point.point.kernel != kernel)
                continue;
            for (const RepeatResult& repeat : point.repeats)
                for (const MetricsRow& row : repeat.rows)
                    csv << metrics_csv_row(row) << "\n";
        }
        if (!csv)
            throw std::runtime_error("write failed for " + csv_path.string());
    }

    nlohmann::ordered_json summary;
    summary["name"] = config.name;
    summary["config_hash"] = hash;
    summary["seed"] = config.seed;
    summary["mode"] = std::string(run_mode_name(config.mode));
    summary["problem"] = std::string(problem_kind_name(config.problem));
    summary["iterations"] = config.iterations;
    summary["repeats"] = config.repeats;
    summary["runs"] = nlohmann::ordered_json::array();

    for (const PointResult& point : output.points) {
        nlohmann::ordered_json run;
        run["kernel"] = std::string(kernel_kind_name(point.point.kernel));
        run["population"] = point.point.population;
        run["p_flip"] = point.point.flip_prob;

        std::vector<double> final_avg, final_min, acc_prop, acc_within, burn_avg;
        double wall_ms = 0.0;
        const double burn_edge =
            config.burn_in * static_cast<double>(config.iterations);
        for (const RepeatResult& repeat : point.repeats) {
            const ChainErrorFn err = [&repeat](const BitVector& x) {
                return repeat.problem->chain_error(x);
            };
            if (repeat.final_pop.size() > 0) {
                const ErrorSummary es = error_metrics(repeat.final_pop, err);
                final_avg.push_back(es.avg);
                final_min.push_back(es.min);
            }
            acc_prop.push_back(safe_ratio(repeat.accepted, repeat.proposals));
            acc_within.push_back(safe_ratio(repeat.accepted, repeat.within_tolerance));
            wall_ms += repeat.wall_ms;

            double sum = 0.0;
            std::size_t count = 0;
            for (const MetricsRow& row : repeat.rows)
                if (static_cast<double>(row.iteration) > burn_edge) {
                    sum += row.avg_error;
                    ++count;
                }
            if (count > 0)
                burn_avg.push_back(sum / static_cast<double>(count));
        }

        if (!final_avg.empty()) {
            run["final_avg_error"] = mean_se_json(mean_se(final_avg));
            run["final_min_error"] = mean_se_json(mean_se(final_min));
        }
        if (!burn_avg.empty())
            run["post_burn_in_avg_error"] = mean_se_json(mean_se(burn_avg));
        if (!acc_prop.empty()) {
            run["accepted_over_proposals"] = mean_se_json(mean_se(acc_prop));
            run["accepted_over_within"] = mean_se_json(mean_se(acc_within));
        }
        run["wall_ms"] = wall_ms;

        if (config.problem == ProblemKind::Binnn && !point.repeats.empty() &&
            point.repeats.front().problem) {
            const auto* binnn =
                dynamic_cast<const BinnnProblem*>(point.repeats.front().problem.get());
            if (binnn != nullptr && !point.repeats.front().ensemble_tail.empty()) {
                const EnsembleReport report = ensemble_report(*binnn, point);
                nlohmann::ordered_json ens;
                ens["model_count"] = report.model_count;
                ens["pooled_vote_error"] = report.pooled_vote_error;
                ens["best_single_error"] = report.best_single_error;
                ens["per_repeat_vote_error"] = mean_se_json(report.per_repeat_vote);
                run["ensemble"] = ens;
            }
        }

        summary["runs"].push_back(run);
    }

    const fs::path json_path = dir / (sanitize_for_filename(config.name) + "_summary.json");
    std::ofstream js(json_path);
    if (!js)
        throw std::runtime_error("cannot write " + json_path.string());
    js << summary.dump(2) << "\n";
    if (!js)
        throw std::runtime_error("write failed for " + json_path.string());
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    ExperimentOutput output = execute_experiment(config);
    write_experiment_outputs(output);
    return output;
}

}  // namespace binabc
