#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "modspec/estimator.hpp"
#include "modspec/experiments.hpp"
#include "modspec/io.hpp"
#include "modspec/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitEstimationFailed = 3;

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::vector<std::string> overrides;
    bool verbose = false;
};

json load_config(const std::string& path) {
    if (path.empty()) throw std::invalid_argument("--config is required for this subcommand");
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return json::parse(in);
}

/// Applies a dotted-path override; every path segment must already exist.
void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must have the form key=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json* node = &config;
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto dot = path.find('.', start);
        const std::string token =
            path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (node->is_array()) {
            std::size_t index = 0;
            try {
                index = std::stoul(token);
            } catch (...) {
                throw std::invalid_argument("expected array index in override path: " + token);
            }
            if (index >= node->size()) throw std::invalid_argument("override index out of range: " + token);
            node = &(*node)[index];
        } else {
            if (!node->contains(token)) throw std::invalid_argument("unknown override key: " + path);
            node = &(*node)[token];
        }
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (...) {
        parsed = value;  // keep raw string
    }
    *node = std::move(parsed);
}

json prepare_config(const CliOptions& options) {
    json config = load_config(options.config_path);
    for (const auto& assignment : options.overrides) apply_override(config, assignment);
    if (options.seed && config.contains("sampling")) config["sampling"]["seed"] = *options.seed;
    if (options.trials && config.contains("sweep")) config["sweep"]["trials"] = *options.trials;
    return config;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << text;
}

void emit_json(const CliOptions& options, const json& payload, const char* suffix = ".json") {
    if (options.out_path.empty())
        std::cout << payload.dump(2) << "\n";
    else
        write_text(options.out_path + suffix, payload.dump(2) + "\n");
}

int cmd_simulate(const CliOptions& options) {
    const json config = prepare_config(options);
    const auto params = modspec::sos_params_from_json(config.at("signal"));
    const auto sampling = modspec::sampling_config_from_json(config.at("sampling"));
    const auto trace = modspec::acquire(params, sampling);
    if (options.out_path.empty()) {
        std::cout << modspec::trace_to_csv(trace);
    } else {
        write_text(options.out_path + ".csv", modspec::trace_to_csv(trace));
        write_text(options.out_path + ".json", modspec::to_json(trace).dump(2) + "\n");
    }
    if (options.verbose)
        std::cerr << "simulated " << trace.samples.size() << " samples, sigma=" << sampling.noise_sigma
                  << "\n";
    return kExitOk;
}

int cmd_crb(const CliOptions& options) {
    const json config = prepare_config(options);
    const auto params = modspec::sos_params_from_json(config.at("signal"));
    auto sampling = modspec::sampling_config_from_json(config.at("sampling"));
    if (!(sampling.noise_sigma > 0.0))
        throw std::invalid_argument("crb: sampling.noise_sigma must be positive");

    json report;
    json prov_config = {{"signal", config.at("signal")}, {"sampling", config.at("sampling")}};
    report["provenance"] = {{"tool_version", modspec::kToolVersion},
                            {"config_hash", modspec::config_hash(prov_config)},
                            {"seed", sampling.seed}};
    const auto [matrices, fim_report] = modspec::crb_fim(params, sampling);
    report["fim_finite_n"] = modspec::to_json(fim_report);
    report["conventional_gaussian"] = modspec::to_json(
        modspec::crb_conventional(params, sampling.noise_sigma, sampling.step, sampling.count));
    if (params.components.size() == 1) {
        report["closed_form_asymptotic"] = modspec::to_json(modspec::crb_closed_form(
            params.components[0].amplitude, params.components[0].omega * sampling.step,
            sampling.noise_sigma, sampling.count));
    } else {
        report["note"] = "closed-form bounds are single-sinusoid only; FIM report covers all components";
    }
    emit_json(options, report);
    return kExitOk;
}

int cmd_estimate(const CliOptions& options, const std::string& trace_path) {
    const json config = prepare_config(options);
    std::ifstream in(trace_path);
    if (!in) throw std::invalid_argument("cannot open trace file: " + trace_path);

    modspec::FoldedTrace trace;
    if (trace_path.size() > 4 && trace_path.substr(trace_path.size() - 4) == ".csv") {
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        trace.samples = modspec::trace_samples_from_csv(text);
        trace.config = modspec::sampling_config_from_json(config.at("sampling"));
    } else {
        trace = modspec::folded_trace_from_json(json::parse(in));
    }
    const int order = config.contains("sweep") ? config["sweep"].value("model_order", 1) : 1;
    const auto result = modspec::estimate(trace, order);
    emit_json(options, modspec::to_json(result));
    return result.rank_deficient ? kExitEstimationFailed : kExitOk;
}

int cmd_sweep(const CliOptions& options, int threads) {
    const json config = prepare_config(options);
    auto sweep_config = modspec::sweep_config_from_json(config);
    sweep_config.threads = threads;
    const auto result = modspec::run_sweep(sweep_config);
    if (options.out_path.empty()) {
        std::cout << modspec::sweep_to_csv(result);
    } else {
        write_text(options.out_path + ".csv", modspec::sweep_to_csv(result));
        write_text(options.out_path + ".json", modspec::to_json(result).dump(2) + "\n");
    }
    if (options.verbose) {
        const auto regions = modspec::classify_regions(result);
        std::cerr << "threshold_low: "
                  << (regions.threshold_low ? std::to_string(*regions.threshold_low) : "absent")
                  << " dB, threshold_high: "
                  << (regions.threshold_high ? std::to_string(*regions.threshold_high) : "absent")
                  << " dB\n";
    }
    return kExitOk;
}

int cmd_verify(const CliOptions& options, bool inject_fault) {
    const auto checks = modspec::run_oracle_suite(inject_fault);
    bool all_passed = true;
    for (const auto& check : checks) {
        std::printf("%-45s %s", check.name.c_str(), check.passed ? "PASS" : "FAIL");
        if (options.verbose)
            std::printf("  (margin %.3e, tolerance %.3e)", check.margin, check.tolerance);
        std::printf("\n");
        all_passed = all_passed && check.passed;
    }
    return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modulo-folded sampling simulator, CRB calculator, and matrix-pencil estimator"};
    app.require_subcommand(1);

    CliOptions options;
    int threads = 1;
    bool inject_fault = false;
    std::string trace_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", options.config_path, "JSON config file");
        sub->add_option("--out", options.out_path, "output path prefix (stdout if omitted)");
        sub->add_option("--seed", options.seed, "override sampling.seed");
        sub->add_option("--trials", options.trials, "override sweep.trials");
        sub->add_option("--set", options.overrides, "override a config field, key=value")
            ->take_all();
        sub->add_flag("--verbose", options.verbose, "print diagnostics");
    };

    auto* simulate = app.add_subcommand("simulate", "write a folded noisy trace (CSV + JSON)");
    add_common(simulate);
    auto* crb = app.add_subcommand("crb", "compute CRB reports for a configuration");
    add_common(crb);
    auto* estimate = app.add_subcommand("estimate", "run the matrix-pencil estimator on a trace");
    estimate->add_option("trace", trace_path, "FoldedTrace JSON or CSV file")->required();
    add_common(estimate);
    auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo PSNR sweep");
    sweep->add_option("--threads", threads, "worker threads for trials");
    add_common(sweep);
    auto* verify = app.add_subcommand("verify", "run the numerical oracle suite");
    verify->add_flag("--inject-fault", inject_fault, "corrupt one check (CI self-test)");
    add_common(verify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(options);
        if (crb->parsed()) return cmd_crb(options);
        if (estimate->parsed()) return cmd_estimate(options, trace_path);
        if (sweep->parsed()) return cmd_sweep(options, threads);
        if (verify->parsed()) return cmd_verify(options, inject_fault);
    } catch (const modspec::OrderTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimationFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
