#include "binabc/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace binabc {

std::string_view run_mode_name(RunMode mode) {
    return mode == RunMode::Likelihood ? "likelihood" : "abc";
}

RunMode run_mode_from_name(std::string_view name) {
    if (name == "likelihood")
        return RunMode::Likelihood;
    if (name == "abc")
        return RunMode::Abc;
    throw ConfigError("experiment.mode: unknown mode '" + std::string(name) + "'");
}

std::string_view problem_kind_name(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::Qmr:   return "qmr";
    case ProblemKind::Binnn: return "binnn";
    case ProblemKind::Nas:   return "nas";
    }
    throw ConfigError("experiment.problem: unknown kind");
}

ProblemKind problem_kind_from_name(std::string_view name) {
    if (name == "qmr")
        return ProblemKind::Qmr;
    if (name == "binnn")
        return ProblemKind::Binnn;
    if (name == "nas")
        return ProblemKind::Nas;
    throw ConfigError("experiment.problem: unknown kind '" + std::string(name) + "'");
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? s.size() : comma;
        const std::string item = trim(s.substr(start, end - start));
        if (!item.empty())
            out.push_back(item);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& where, const std::string& value) {
    throw ConfigError(where + ": cannot parse value '" + value + "'");
}

double parse_double(const std::string& where, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            bad_value(where, value);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_value(where, value);
    }
}

std::int64_t parse_i64(const std::string& where, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size())
            bad_value(where, value);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_value(where, value);
    }
}

std::uint64_t parse_u64(const std::string& where, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size() || value.find('-') != std::string::npos)
            bad_value(where, value);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_value(where, value);
    }
}

int parse_int(const std::string& where, const std::string& value) {
    const std::int64_t v = parse_i64(where, value);
    if (v < INT32_MIN || v > INT32_MAX)
        bad_value(where, value);
    return static_cast<int>(v);
}

std::size_t parse_size(const std::string& where, const std::string& value) {
    const std::int64_t v = parse_i64(where, value);
    if (v < 0)
        bad_value(where, value);
    return static_cast<std::size_t>(v);
}

struct EpsilonKeys {
    bool saw_mean = false;
    bool saw_rate = false;
    double mean = 1.0;
    double rate = 1.0;
    bool saw_mode = false;
    std::string mode;
    bool saw_value = false;
    double value = 1.0;
};

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    EpsilonKeys eps;

    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
        std::string line = trim(text.substr(start, end - start));
        ++line_no;
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos)
            line = trim(std::string_view(line).substr(0, comment));
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "experiment" && section != "kernel" && section != "epsilon" &&
                section != "qmr" && section != "binnn" && section != "nas")
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                              "' outside any section");
        const std::string where = section + "." + key;

        if (section == "experiment") {
            if (key == "name") config.name = value;
            else if (key == "mode") config.mode = run_mode_from_name(value);
            else if (key == "problem") config.problem = problem_kind_from_name(value);
            else if (key == "repeats") config.repeats = parse_int(where, value);
            else if (key == "iterations") config.iterations = parse_i64(where, value);
            else if (key == "stride") config.stride = parse_i64(where, value);
            else if (key == "seed") config.seed = parse_u64(where, value);
            else if (key == "burn_in") config.burn_in = parse_double(where, value);
            else if (key == "out_dir") config.out_dir = value;
            else if (key == "workers") config.workers = parse_int(where, value);
            else if (key == "population") {
                config.populations.clear();
                for (const auto& item : split_list(value))
                    config.populations.push_back(parse_int(where, item));
            } else
                throw ConfigError(where + ": unknown key");
        } else if (section == "kernel") {
            if (key == "kind") {
                config.kernels.clear();
                for (const auto& item : split_list(value)) {
                    try {
                        config.kernels.push_back(kernel_kind_from_name(item));
                    } catch (const std::exception& e) {
                        throw ConfigError(where + ": " + e.what());
                    }
                }
            } else if (key == "p_flip") {
                config.flip_probs.clear();
                for (const auto& item : split_list(value))
                    config.flip_probs.push_back(parse_double(where, item));
            } else if (key == "pi")
                config.mix_weight = parse_double(where, value);
            else if (key == "theta")
                config.theta = parse_double(where, value);
            else
                throw ConfigError(where + ": unknown key");
        } else if (section == "epsilon") {
            if (key == "mode") {
                eps.saw_mode = true;
                eps.mode = value;
            } else if (key == "value") {
                eps.saw_value = true;
                eps.value = parse_double(where, value);
            } else if (key == "mean") {
                eps.saw_mean = true;
                eps.mean = parse_double(where, value);
            } else if (key == "rate") {
                eps.saw_rate = true;
                eps.rate = parse_double(where, value);
            } else
                throw ConfigError(where + ": unknown key");
        } else if (section == "qmr") {
            if (key == "diseases") config.qmr.diseases = parse_size(where, value);
            else if (key == "findings") config.qmr.findings = parse_size(where, value);
            else if (key == "beta_a") config.qmr.beta_a = parse_double(where, value);
            else if (key == "beta_b") config.qmr.beta_b = parse_double(where, value);
            else if (key == "n_obs") config.qmr.n_obs = parse_size(where, value);
            else if (key == "prior_on") config.qmr.prior_on = parse_double(where, value);
            else
                throw ConfigError(where + ": unknown key");
        } else if (section == "binnn") {
            if (key == "input_dim") config.binnn.input_dim = parse_size(where, value);
            else if (key == "hidden") config.binnn.hidden = parse_size(where, value);
            else if (key == "source") config.binnn.source = value;
            else if (key == "train_size") config.binnn.train_size = parse_size(where, value);
            else if (key == "test_size") config.binnn.test_size = parse_size(where, value);
            else if (key == "train_images") config.binnn.train_images = value;
            else if (key == "train_labels") config.binnn.train_labels = value;
            else if (key == "test_images") config.binnn.test_images = value;
            else if (key == "test_labels") config.binnn.test_labels = value;
            else if (key == "digit_a") config.binnn.digit_a = parse_int(where, value);
            else if (key == "digit_b") config.binnn.digit_b = parse_int(where, value);
            else if (key == "ensemble_last")
                config.binnn.ensemble_last = parse_size(where, value);
            else
                throw ConfigError(where + ": unknown key");
        } else {  // nas
            if (key == "table_path") config.nas.table_path = value;
            else if (key == "table_seed") config.nas.table_seed = parse_u64(where, value);
            else
                throw ConfigError(where + ": unknown key");
        }
    }

    if (eps.saw_mean && eps.saw_rate)
        throw ConfigError("epsilon: give mean or rate, not both");
    const std::string mode = eps.saw_mode ? eps.mode : "fixed";
    try {
        if (mode == "fixed") {
            config.epsilon = EpsilonSchedule::fixed(eps.saw_value ? eps.value : 1.0);
        } else if (mode == "exp") {
            if (eps.saw_rate)
                config.epsilon = EpsilonSchedule::exp_rate(eps.rate);
            else
                config.epsilon = EpsilonSchedule::exp_mean(eps.saw_mean ? eps.mean : 1.0);
        } else {
            throw ConfigError("epsilon.mode: unknown mode '" + mode + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("epsilon: ") + e.what());
    }

    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T, typename Fn>
std::string join(const std::vector<T>& items, Fn&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0)
            out += ",";
        out += fmt(items[i]);
    }
    return out;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "name = " << c.name << "\n";
    out << "mode = " << run_mode_name(c.mode) << "\n";
    out << "problem = " << problem_kind_name(c.problem) << "\n";
    out << "repeats = " << c.repeats << "\n";
    out << "iterations = " << c.iterations << "\n";
    out << "stride = " << c.stride << "\n";
    out << "seed = " << c.seed << "\n";
    out << "burn_in = " << fmt_double(c.burn_in) << "\n";
    out << "out_dir = " << c.out_dir << "\n";
    out << "workers = " << c.workers << "\n";
    out << "population = "
        << join(c.populations, [](int v) { return std::to_string(v); }) << "\n";
    out << "\n[kernel]\n";
    out << "kind = "
        << join(c.kernels,
                [](KernelKind k) { return std::string(kernel_kind_name(k)); })
        << "\n";
    out << "p_flip = " << join(c.flip_probs, fmt_double) << "\n";
    out << "pi = " << fmt_double(c.mix_weight) << "\n";
    out << "theta = " << fmt_double(c.theta) << "\n";
    out << "\n[epsilon]\n";
    if (c.epsilon.mode == EpsilonSchedule::Mode::Fixed) {
        out << "mode = fixed\n";
        out << "value = " << fmt_double(c.epsilon.value) << "\n";
    } else {
        out << "mode = exp\n";
        out << "mean = " << fmt_double(c.epsilon.mean) << "\n";
    }
    out << "\n[qmr]\n";
    out << "diseases = " << c.qmr.diseases << "\n";
    out << "findings = " << c.qmr.findings << "\n";
    out << "beta_a = " << fmt_double(c.qmr.beta_a) << "\n";
    out << "beta_b = " << fmt_double(c.qmr.beta_b) << "\n";
    out << "n_obs = " << c.qmr.n_obs << "\n";
    out << "prior_on = " << fmt_double(c.qmr.prior_on) << "\n";
    out << "\n[binnn]\n";
    out << "input_dim = " << c.binnn.input_dim << "\n";
    out << "hidden = " << c.binnn.hidden << "\n";
    out << "source = " << c.binnn.source << "\n";
    out << "train_size = " << c.binnn.train_size << "\n";
    out << "test_size = " << c.binnn.test_size << "\n";
    out << "train_images = " << c.binnn.train_images << "\n";
    out << "train_labels = " << c.binnn.train_labels << "\n";
    out << "test_images = " << c.binnn.test_images << "\n";
    out << "test_labels = " << c.binnn.test_labels << "\n";
    out << "digit_a = " << c.binnn.digit_a << "\n";
    out << "digit_b = " << c.binnn.digit_b << "\n";
    out << "ensemble_last = " << c.binnn.ensemble_last << "\n";
    out << "\n[nas]\n";
    out << "table_path = " << c.nas.table_path << "\n";
    out << "table_seed = " << c.nas.table_seed << "\n";
    return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    return fnv1a64(serialize_config(config));
}

void validate_config(const ExperimentConfig& c) {
    if (c.name.empty())
        throw ConfigError("experiment.name: must not be empty");
    if (c.repeats < 0)
        throw ConfigError("experiment.repeats: must be non-negative");
    if (c.iterations < 0)
        throw ConfigError("experiment.iterations: must be non-negative");
    if (c.stride < 1)
        throw ConfigError("experiment.stride: must be at least 1");
    if (!(c.burn_in >= 0.0 && c.burn_in < 1.0))
        throw ConfigError("experiment.burn_in: must lie in [0, 1)");
    if (c.workers < 1)
        throw ConfigError("experiment.workers: must be at least 1");
    if (c.populations.empty())
        throw ConfigError("experiment.population: must list at least one size");
    for (const int p : c.populations)
        if (p < 1)
            throw ConfigError("experiment.population: sizes must be positive");
    if (c.kernels.empty())
        throw ConfigError("kernel.kind: must list at least one kernel");
    if (c.flip_probs.empty())
        throw ConfigError("kernel.p_flip: must list at least one value");
    for (const double p : c.flip_probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError("kernel.p_flip: values must lie in [0, 1]");
    if (!(c.mix_weight >= 0.0 && c.mix_weight <= 1.0))
        throw ConfigError("kernel.pi: must lie in [0, 1]");
    if (!(c.theta >= 0.0 && c.theta <= 1.0))
        throw ConfigError("kernel.theta: must lie in [0, 1]");
    try {
        c.epsilon.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    const bool needs_differences =
        std::any_of(c.kernels.begin(), c.kernels.end(), [](KernelKind k) {
            return k == KernelKind::Xor || k == KernelKind::MutXor ||
                   k == KernelKind::DdeMc || k == KernelKind::DdeMc1 ||
                   k == KernelKind::DdeMc2;
        });
    if (needs_differences)
        for (const int p : c.populations)
            if (p < 3)
                throw ConfigError(
                    "experiment.population: difference kernels need at least 3 chains");

    if (c.mode == RunMode::Likelihood && c.problem != ProblemKind::Qmr)
        throw ConfigError(
            "experiment.mode: likelihood mode needs a tractable likelihood (qmr only)");

    if (c.problem == ProblemKind::Qmr) {
        if (c.qmr.diseases == 0 || c.qmr.findings == 0)
            throw ConfigError("qmr: diseases and findings must be positive");
        if (c.qmr.n_obs == 0)
            throw ConfigError("qmr.n_obs: must be positive");
        if (!(c.qmr.beta_a > 0.0) || !(c.qmr.beta_b > 0.0))
            throw ConfigError("qmr: beta shape parameters must be positive");
        if (!(c.qmr.prior_on > 0.0 && c.qmr.prior_on < 1.0))
            throw ConfigError("qmr.prior_on: must lie in (0, 1)");
    } else if (c.problem == ProblemKind::Binnn) {
        if (c.binnn.input_dim == 0 || c.binnn.hidden == 0)
            throw ConfigError("binnn: input_dim and hidden must be positive");
        if (c.binnn.ensemble_last == 0)
            throw ConfigError("binnn.ensemble_last: must be positive");
        if (c.binnn.source == "synthetic") {
            if (c.binnn.train_size == 0 || c.binnn.test_size == 0)
                throw ConfigError("binnn: synthetic sets must be non-empty");
        } else if (c.binnn.source == "idx") {
            if (c.binnn.train_images.empty() || c.binnn.train_labels.empty() ||
                c.binnn.test_images.empty() || c.binnn.test_labels.empty())
                throw ConfigError("binnn: idx source needs all four dataset paths");
            if (c.binnn.digit_a == c.binnn.digit_b)
                throw ConfigError("binnn: digit classes must differ");
        } else {
            throw ConfigError("binnn.source: unknown source '" + c.binnn.source + "'");
        }
    }
}

KernelSpec kernel_spec_for(const ExperimentConfig& config, KernelKind kind,
                           double flip_prob) {
    KernelSpec spec;
    spec.kind = kind;
    spec.flip_prob = flip_prob;
    spec.mix_weight = config.mix_weight;
    spec.theta = config.theta;
    spec.validate();
    return spec;
}

}  // namespace binabc
