#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "binabc/harness/config.hpp"
#include "binabc/harness/experiment.hpp"
#include "binabc/harness/reports.hpp"
#include "binabc/problems/nas.hpp"

namespace {

using namespace binabc;

struct RunOverrides {
    std::uint64_t seed = 0;
    std::string out_dir;
    int repeats = 0;
    std::int64_t iterations = 0;
    std::int64_t stride = 0;
    int workers = 0;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* out_dir_opt = nullptr;
    CLI::Option* repeats_opt = nullptr;
    CLI::Option* iterations_opt = nullptr;
    CLI::Option* stride_opt = nullptr;
    CLI::Option* workers_opt = nullptr;

    void attach(CLI::App* cmd) {
        seed_opt = cmd->add_option("--seed", seed, "Override the experiment seed");
        out_dir_opt = cmd->add_option("--out-dir", out_dir, "Override the output directory");
        repeats_opt = cmd->add_option("--repeats", repeats, "Override the repeat count");
        iterations_opt =
            cmd->add_option("--iterations", iterations, "Override the iteration budget");
        stride_opt = cmd->add_option("--stride", stride, "Override the recording stride");
        workers_opt = cmd->add_option("--workers", workers, "Override the worker count");
    }

    void apply(ExperimentConfig& config) const {
        if (seed_opt->count() > 0) config.seed = seed;
        if (out_dir_opt->count() > 0) config.out_dir = out_dir;
        if (repeats_opt->count() > 0) config.repeats = repeats;
        if (iterations_opt->count() > 0) config.iterations = iterations;
        if (stride_opt->count() > 0) config.stride = stride;
        if (workers_opt->count() > 0) config.workers = workers;
    }
};

int do_run(const std::string& config_path, const RunOverrides& overrides) {
    ExperimentConfig config = load_config_file(config_path);
    overrides.apply(config);
    validate_config(config);
    run_experiment(config);
    std::printf("wrote results for '%s' to %s\n", config.name.c_str(),
                config.out_dir.c_str());
    return 0;
}

int do_posterior(const std::string& config_path, const RunOverrides& overrides) {
    ExperimentConfig config = load_config_file(config_path);
    overrides.apply(config);
    validate_config(config);
    if (config.problem != ProblemKind::Qmr)
        throw ConfigError("posterior: problem has no tractable likelihood");

    const ExperimentOutput output = execute_experiment(config);
    write_experiment_outputs(output);

    namespace fs = std::filesystem;
    const fs::path dir = config.out_dir.empty() ? fs::path(".") : fs::path(config.out_dir);
    fs::create_directories(dir);
    const fs::path path = dir / (config.name + "_posterior.csv");
    std::ofstream csv(path);
    if (!csv)
        throw std::runtime_error("cannot write " + path.string());
    char hash[24];
    std::snprintf(hash, sizeof hash, "0x%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    csv << "# config_hash=" << hash << "\n# seed=" << config.seed << "\n";
    csv << "kernel,population,p_flip,repeat,chain,neg_log_posterior,exact_map_neg_log\n";
    for (const PointResult& point : output.points) {
        const auto reports = posterior_report(point);
        for (const auto& report : reports) {
            for (std::size_t chain = 0; chain < report.chain_neg_log_posterior.size();
                 ++chain) {
                char row[256];
                std::snprintf(row, sizeof row, "%s,%d,%.10g,%d,%zu,%.10g",
                              std::string(kernel_kind_name(point.point.kernel)).c_str(),
                              point.point.population, point.point.flip_prob, report.repeat,
                              chain, report.chain_neg_log_posterior[chain]);
                csv << row;
                if (report.exact_map_neg_log) {
                    char ref[48];
                    std::snprintf(ref, sizeof ref, ",%.10g", *report.exact_map_neg_log);
                    csv << ref;
                } else {
                    csv << ",";
                }
                csv << "\n";
            }
        }
    }
    if (!csv)
        throw std::runtime_error("write failed for " + path.string());
    std::printf("wrote %s\n", path.string().c_str());
    return 0;
}

int do_table_gen(std::uint64_t seed, const std::string& out_path) {
    const NasTable table = nas_synth_table(seed);
    table.save_file(out_path);
    const BitVector best = nas_decode(NasArchitecture{table.min_validation_bits()});
    std::printf("wrote %zu architectures to %s\n", table.size(), out_path.c_str());
    std::printf("min validation error %.9f at %s\n", table.min_validation_error(),
                best.to_string().c_str());
    return 0;
}

int do_validate(const std::string& config_path) {
    const ExperimentConfig config = load_config_file(config_path);
    validate_config(config);
    const auto points = expand_runs(config);
    char hash[24];
    std::snprintf(hash, sizeof hash, "0x%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    std::printf("config ok: name=%s problem=%s mode=%s\n", config.name.c_str(),
                std::string(problem_kind_name(config.problem)).c_str(),
                std::string(run_mode_name(config.mode)).c_str());
    std::printf("  %zu grid cells x %d repeats, %lld iterations, hash %s\n", points.size(),
                config.repeats, static_cast<long long>(config.iterations), hash);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Population MCMC and likelihood-free inference over binary spaces"};
    app.require_subcommand(1);

    std::string run_config;
    RunOverrides run_overrides;
    CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment from a config file");
    run_cmd->add_option("config", run_config, "Experiment config file")->required();
    run_overrides.attach(run_cmd);

    std::string posterior_config;
    RunOverrides posterior_overrides;
    CLI::App* posterior_cmd = app.add_subcommand(
        "posterior", "Run an experiment and score final chains against the exact target");
    posterior_cmd->add_option("config", posterior_config, "Experiment config file")
        ->required();
    posterior_overrides.attach(posterior_cmd);

    std::uint64_t table_seed = 7;
    std::string table_out;
    CLI::App* table_cmd =
        app.add_subcommand("table-gen", "Generate a synthetic architecture table");
    table_cmd->add_option("output", table_out, "Output table path")->required();
    table_cmd->add_option("--seed", table_seed, "Table landscape seed");

    std::string validate_config_path;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Parse and check a config file");
    validate_cmd->add_option("config", validate_config_path, "Experiment config file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed())
            return do_run(run_config, run_overrides);
        if (posterior_cmd->parsed())
            return do_posterior(posterior_config, posterior_overrides);
        if (table_cmd->parsed())
            return do_table_gen(table_seed, table_out);
        if (validate_cmd->parsed())
            return do_validate(validate_config_path);
    } catch (const binabc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
