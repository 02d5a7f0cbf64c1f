#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "binabc/harness/config.hpp"
#include "binabc/harness/experiment.hpp"
#include "binabc/harness/metrics.hpp"
#include "binabc/harness/reports.hpp"
#include "binabc/problems/binnn.hpp"
#include "binabc/problems/qmr.hpp"

using namespace binabc;

namespace {

ExperimentConfig tiny_qmr_config() {
    ExperimentConfig c;
    c.name = "tiny-qmr";
    c.mode = RunMode::Abc;
    c.problem = ProblemKind::Qmr;
    c.repeats = 2;
    c.iterations = 50;
    c.stride = 10;
    c.seed = 11;
    c.populations = {4};
    c.kernels = {KernelKind::DdeMc};
    c.flip_probs = {0.1};
    c.epsilon = EpsilonSchedule::exp_mean(2.0);
    c.qmr.diseases = 5;
    c.qmr.findings = 8;
    c.qmr.n_obs = 3;
    return c;
}

ExperimentConfig tiny_binnn_config() {
    ExperimentConfig c;
    c.name = "tiny-binnn";
    c.mode = RunMode::Abc;
    c.problem = ProblemKind::Binnn;
    c.repeats = 2;
    c.iterations = 6;
    c.stride = 3;
    c.seed = 12;
    c.populations = {4};
    c.kernels = {KernelKind::Mut};
    c.flip_probs = {0.05};
    c.epsilon = EpsilonSchedule::exp_mean(0.5);
    c.binnn.input_dim = 8;
    c.binnn.hidden = 2;
    c.binnn.train_size = 30;
    c.binnn.test_size = 30;
    c.binnn.ensemble_last = 3;
    return c;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

std::string rows_fingerprint(const ExperimentOutput& output) {
    std::string out;
    for (const PointResult& point : output.points)
        for (const RepeatResult& repeat : point.repeats)
            for (const MetricsRow& row : repeat.rows) {
                out += metrics_csv_row(row);
                out += "\n";
            }
    return out;
}

}  // namespace

TEST_CASE("grid expansion is kernel-major") {
    ExperimentConfig c;
    c.kernels = {KernelKind::DdeMc, KernelKind::Mut};
    c.populations = {8, 24};
    c.flip_probs = {0.1, 0.01};
    const std::vector<RunPoint> points = expand_runs(c);
    REQUIRE(points.size() == 8);
    CHECK(points[0] == RunPoint{KernelKind::DdeMc, 8, 0.1});
    CHECK(points[1] == RunPoint{KernelKind::DdeMc, 8, 0.01});
    CHECK(points[2] == RunPoint{KernelKind::DdeMc, 24, 0.1});
    CHECK(points[3] == RunPoint{KernelKind::DdeMc, 24, 0.01});
    CHECK(points[4] == RunPoint{KernelKind::Mut, 8, 0.1});
    CHECK(points[7] == RunPoint{KernelKind::Mut, 24, 0.01});
}

TEST_CASE("the shipped sweep grid expands to sixty cells") {
    const ExperimentConfig c = load_config_file(CONFIG_DIR "/qmr_cross_eval.cfg");
    validate_config(c);
    CHECK(expand_runs(c).size() == 60);
    CHECK(c.kernels.size() == 3);
    CHECK(c.populations.size() == 5);
    CHECK(c.flip_probs.size() == 4);
    CHECK(c.mode == RunMode::Likelihood);
}

TEST_CASE("a small run records strided cumulative metrics") {
    const ExperimentConfig c = tiny_qmr_config();
    const ExperimentOutput output = execute_experiment(c);
    REQUIRE(output.points.size() == 1);
    REQUIRE(output.points[0].repeats.size() == 2);

    for (const RepeatResult& repeat : output.points[0].repeats) {
        REQUIRE(repeat.rows.size() == 5);
        std::int64_t prev_proposals = 0, prev_within = 0, prev_accepted = 0;
        for (std::size_t k = 0; k < repeat.rows.size(); ++k) {
            const MetricsRow& row = repeat.rows[k];
            CHECK(row.iteration == static_cast<std::int64_t>(10 * (k + 1)));
            CHECK(row.proposals == row.iteration * 4);
            CHECK(row.within_tolerance <= row.proposals);
            CHECK(row.accepted <= row.within_tolerance);
            CHECK(row.proposals >= prev_proposals);
            CHECK(row.within_tolerance >= prev_within);
            CHECK(row.accepted >= prev_accepted);
            prev_proposals = row.proposals;
            prev_within = row.within_tolerance;
            prev_accepted = row.accepted;
            CHECK(row.min_error <= row.avg_error);
            CHECK(row.kernel == KernelKind::DdeMc);
            CHECK(row.population == 4);
            CHECK(row.flip_prob == 0.1);
            CHECK(row.epsilon_param == 2.0);
        }
        CHECK(repeat.final_pop.size() == 4);
        CHECK(repeat.proposals == 50 * 4);
        REQUIRE(repeat.problem != nullptr);
    }
}

TEST_CASE("a stride that does not divide the budget drops the remainder") {
    ExperimentConfig c = tiny_qmr_config();
    c.iterations = 55;
    c.repeats = 1;
    const ExperimentOutput output = execute_experiment(c);
    REQUIRE(output.points[0].repeats.size() == 1);
    CHECK(output.points[0].repeats[0].rows.size() == 5);
    CHECK(output.points[0].repeats[0].rows.back().iteration == 50);
}

TEST_CASE("zero repeats still writes well-formed headers") {
    ExperimentConfig c = tiny_qmr_config();
    c.repeats = 0;
    c.name = "no-repeats";
    const auto dir = fresh_dir("binabc_exp_zero");
    c.out_dir = dir.string();
    run_experiment(c);

    const std::string csv = read_file(dir / "no-repeats_dde-mc.csv");
    std::size_t lines = 0;
    for (const char ch : csv)
        lines += ch == '\n';
    CHECK(lines == 4);  // three comment lines plus the header
    CHECK(csv.find("# config_hash=0x") == 0);
    CHECK(csv.find(metrics_csv_header()) != std::string::npos);

    const auto summary = nlohmann::json::parse(read_file(dir / "no-repeats_summary.json"));
    CHECK(summary["name"] == "no-repeats");
    CHECK(summary["repeats"] == 0);
    CHECK(summary["runs"].size() == 1);
    CHECK_FALSE(summary["runs"][0].contains("final_avg_error"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("identical configurations replay to identical bytes") {
    ExperimentConfig c = tiny_qmr_config();
    c.name = "replay";
    const auto dir = fresh_dir("binabc_exp_replay");
    c.out_dir = dir.string();

    run_experiment(c);
    const std::string csv_first = read_file(dir / "replay_dde-mc.csv");
    const std::string json_first = read_file(dir / "replay_summary.json");

    run_experiment(c);
    CHECK(read_file(dir / "replay_dde-mc.csv") == csv_first);

    // The JSON embeds wall-clock times, so compare it with the timing fields
    // stripped rather than byte-for-byte.
    auto scrub = [](const std::string& text) {
        auto j = nlohmann::json::parse(text);
        for (auto& run : j["runs"])
            run.erase("wall_ms");
        return j.dump(2);
    };
    CHECK(scrub(read_file(dir / "replay_summary.json")) == scrub(json_first));
    CHECK(csv_first.find("0,10,dde-mc,4,0.1,") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("worker threads do not change the results") {
    ExperimentConfig serial = tiny_qmr_config();
    serial.repeats = 4;
    ExperimentConfig threaded = serial;
    threaded.workers = 2;

    const ExperimentOutput a = execute_experiment(serial);
    const ExperimentOutput b = execute_experiment(threaded);
    CHECK(rows_fingerprint(a) == rows_fingerprint(b));
    REQUIRE(a.points[0].repeats.size() == b.points[0].repeats.size());
    for (std::size_t r = 0; r < a.points[0].repeats.size(); ++r)
        CHECK(a.points[0].repeats[r].final_pop == b.points[0].repeats[r].final_pop);
}

TEST_CASE("repeats see the same instance regardless of the kernel grid") {
    ExperimentConfig first = tiny_qmr_config();
    first.kernels = {KernelKind::DdeMc};
    ExperimentConfig second = tiny_qmr_config();
    second.kernels = {KernelKind::Mut};

    const ExperimentOutput a = execute_experiment(first);
    const ExperimentOutput b = execute_experiment(second);
    for (std::size_t r = 0; r < 2; ++r) {
        const auto* qa =
            dynamic_cast<const QmrProblem*>(a.points[0].repeats[r].problem.get());
        const auto* qb =
            dynamic_cast<const QmrProblem*>(b.points[0].repeats[r].problem.get());
        REQUIRE(qa != nullptr);
        REQUIRE(qb != nullptr);
        CHECK(qa->instance().x_true == qb->instance().x_true);
        CHECK(qa->instance().observed == qb->instance().observed);
    }
    // Different repeats draw different instances.
    const auto* q0 = dynamic_cast<const QmrProblem*>(a.points[0].repeats[0].problem.get());
    const auto* q1 = dynamic_cast<const QmrProblem*>(a.points[0].repeats[1].problem.get());
    CHECK(q0->instance().observed != q1->instance().observed);
}

TEST_CASE("the ensemble tail holds the last populations in order") {
    const ExperimentConfig c = tiny_binnn_config();
    const ExperimentOutput output = execute_experiment(c);
    REQUIRE(output.points.size() == 1);
    for (const RepeatResult& repeat : output.points[0].repeats) {
        REQUIRE(repeat.ensemble_tail.size() == 3);
        CHECK(repeat.ensemble_tail.back() == repeat.final_pop);
    }

    const auto* problem =
        dynamic_cast<const BinnnProblem*>(output.points[0].repeats[0].problem.get());
    REQUIRE(problem != nullptr);
    const EnsembleReport report = ensemble_report(*problem, output.points[0]);
    CHECK(report.model_count == 2u * 3u * 4u);  // repeats x tail x chains
    CHECK(report.pooled_vote_error >= 0.0);
    CHECK(report.pooled_vote_error <= 1.0);
    CHECK(report.best_single_error <= report.pooled_vote_error + 1.0);  // both defined
}

TEST_CASE("a single-model ensemble degenerates to that model") {
    ExperimentConfig c = tiny_binnn_config();
    c.repeats = 1;
    c.populations = {1};
    c.binnn.ensemble_last = 1;
    const ExperimentOutput output = execute_experiment(c);
    const RepeatResult& repeat = output.points[0].repeats[0];
    const auto* problem = dynamic_cast<const BinnnProblem*>(repeat.problem.get());
    REQUIRE(problem != nullptr);

    const EnsembleReport report = ensemble_report(*problem, output.points[0]);
    CHECK(report.model_count == 1);
    const double single = binnn_error(problem->shape(), repeat.final_pop[0], problem->test());
    CHECK(report.pooled_vote_error == single);
    CHECK(report.best_single_error == single);
    CHECK(report.per_repeat_vote.mean == single);
    CHECK(report.per_repeat_vote.se == 0.0);
}

TEST_CASE("posterior reports bound the chains by the enumerated optimum") {
    ExperimentConfig c = tiny_qmr_config();
    c.mode = RunMode::Likelihood;
    c.qmr.diseases = 3;
    c.qmr.findings = 4;
    const ExperimentOutput output = execute_experiment(c);

    const auto reports = posterior_report(output.points[0]);
    REQUIRE(reports.size() == 2);
    for (const PosteriorRepeatReport& rep : reports) {
        CHECK(rep.chain_neg_log_posterior.size() == 4);
        REQUIRE(rep.exact_map_neg_log.has_value());
        for (const double neg_log : rep.chain_neg_log_posterior)
            CHECK(neg_log >= *rep.exact_map_neg_log - 1e-9);
    }

    // Enumeration bows out when the space is too large for the cap.
    const auto capped = posterior_report(output.points[0], 2);
    for (const PosteriorRepeatReport& rep : capped)
        CHECK_FALSE(rep.exact_map_neg_log.has_value());
}

TEST_CASE("posterior reports need a tractable likelihood") {
    const ExperimentConfig c = tiny_binnn_config();
    const ExperimentOutput output = execute_experiment(c);
    CHECK_THROWS_AS(posterior_report(output.points[0]), std::invalid_argument);
}

TEST_CASE("summary statistics are the sample mean and its standard error") {
    const MeanSe three = mean_se({1.0, 2.0, 3.0});
    CHECK(three.mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(three.se == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    const MeanSe one = mean_se({5.0});
    CHECK(one.mean == 5.0);
    CHECK(one.se == 0.0);
    CHECK_THROWS_AS(mean_se({}), std::invalid_argument);
}

TEST_CASE("csv encoding of one row is stable") {
    MetricsRow row;
    row.repeat = 1;
    row.iteration = 200;
    row.kernel = KernelKind::MutXor;
    row.population = 24;
    row.flip_prob = 0.005;
    row.avg_error = 1.25;
    row.min_error = 0.5;
    row.proposals = 4800;
    row.within_tolerance = 1200;
    row.accepted = 600;
    row.epsilon_param = 0.2;
    CHECK(metrics_csv_row(row) == "1,200,mut+xor,24,0.005,1.25,0.5,4800,1200,600,0.2");
    CHECK(metrics_csv_header() ==
          "repeat,iteration,kernel,population,p_flip,avg_error,min_error,"
          "proposals,within_tolerance,accepted,epsilon");
}

TEST_CASE("error metrics require a metric") {
    const Population pop(std::vector<BitVector>{BitVector::ones(3)});
    CHECK_THROWS_AS(error_metrics(pop, ChainErrorFn{}), std::invalid_argument);
    const ErrorSummary s = error_metrics(pop, [](const BitVector& x) {
        return static_cast<double>(x.popcount());
    });
    CHECK(s.avg == 3.0);
    CHECK(s.min == 3.0);
}

TEST_CASE("the json summary aggregates every grid cell") {
    ExperimentConfig c = tiny_qmr_config();
    c.name = "summary-check";
    c.kernels = {KernelKind::DdeMc, KernelKind::IndSamp};
    c.populations = {3, 4};
    const auto dir = fresh_dir("binabc_exp_json");
    c.out_dir = dir.string();
    run_experiment(c);

    const auto summary = nlohmann::json::parse(read_file(dir / "summary-check_summary.json"));
    CHECK(summary["name"] == "summary-check");
    CHECK(summary["seed"] == 11);
    CHECK(summary["mode"] == "abc");
    CHECK(summary["problem"] == "qmr");
    REQUIRE(summary["runs"].size() == 4);
    for (const auto& run : summary["runs"]) {
        CHECK(run.contains("kernel"));
        CHECK(run.contains("population"));
        CHECK(run.contains("p_flip"));
        CHECK(run["final_avg_error"].contains("mean"));
        CHECK(run["final_avg_error"].contains("se"));
        CHECK(run["post_burn_in_avg_error"].contains("mean"));
        CHECK(run["accepted_over_proposals"]["mean"].get<double>() <=
              run["accepted_over_within"]["mean"].get<double>() + 1e-12);
        CHECK(run["wall_ms"].get<double>() >= 0.0);
    }
    // Both kernel CSVs exist and carry only their own rows.
    const std::string dde = read_file(dir / "summary-check_dde-mc.csv");
    CHECK(dde.find("dde-mc") != std::string::npos);
    CHECK(dde.find("ind-samp,") == std::string::npos);
    const std::string ind = read_file(dir / "summary-check_ind-samp.csv");
    CHECK(ind.find(",ind-samp,") != std::string::npos);
    std::filesystem::remove_all(dir);
}
