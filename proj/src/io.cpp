#include "modspec/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace modspec {

namespace {

using nlohmann::json;

const char* mode_name(CrbMode mode) {
    switch (mode) {
        case CrbMode::closed_form_asymptotic: return "closed_form_asymptotic";
        case CrbMode::fim_finite_n: return "fim_finite_n";
        default: return "conventional_gaussian";
    }
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{}) throw std::invalid_argument("failed to parse number: " + text);
    (void)ptr;
    return value;
}

json provenance(const json& config) {
    return {{"tool_version", kToolVersion}, {"config_hash", config_hash(config)}};
}

std::string csv_provenance(const json& config, std::uint64_t seed) {
    std::ostringstream out;
    out << "# tool_version: " << kToolVersion << "\n";
    out << "# config_hash: " << config_hash(config) << "\n";
    out << "# seed: " << seed << "\n";
    return out.str();
}

json vector_json(const std::vector<double>& values) {
    json array = json::array();
    for (double v : values) array.push_back(v);
    return array;
}

}  // namespace

std::string format_full(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string config_hash(const json& j) {
    const std::string dump = j.dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[20];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

json to_json(const SoSParams& params) {
    json components = json::array();
    for (const auto& c : params.components)
        components.push_back({{"amplitude", c.amplitude}, {"omega", c.omega}, {"phase", c.phase}});
    return {{"components", components}};
}

SoSParams sos_params_from_json(const json& j) {
    SoSParams params;
    for (const auto& c : j.at("components")) {
        params.components.push_back(
            {c.at("amplitude").get<double>(), c.at("omega").get<double>(), c.at("phase").get<double>()});
    }
    params.validate();
    return params;
}

json to_json(const SamplingConfig& config) {
    json j = {{"threshold", config.threshold},
              {"step", config.step},
              {"count", config.count},
              {"noise_sigma", config.noise_sigma},
              {"seed", config.seed}};
    if (std::isinf(config.threshold)) j["threshold"] = "inf";
    return j;
}

SamplingConfig sampling_config_from_json(const json& j) {
    SamplingConfig config;
    if (j.at("threshold").is_string())
        config.threshold = std::numeric_limits<double>::infinity();
    else
        config.threshold = j.at("threshold").get<double>();
    config.step = j.at("step").get<double>();
    config.count = j.at("count").get<int>();
    config.noise_sigma = j.value("noise_sigma", 0.0);
    config.seed = j.value("seed", std::uint64_t{0});
    config.validate();
    return config;
}

json to_json(const FoldedTrace& trace) {
    json config = to_json(trace.config);
    json j = {{"provenance", provenance(config)}, {"config", config}};
    j["provenance"]["seed"] = trace.config.seed;
    if (trace.truth) j["truth"] = to_json(*trace.truth);
    // Samples as strings with 17 significant digits for a lossless round trip.
    json samples = json::array();
    for (double y : trace.samples) samples.push_back(format_full(y));
    j["samples"] = samples;
    return j;
}

FoldedTrace folded_trace_from_json(const json& j) {
    FoldedTrace trace;
    trace.config = sampling_config_from_json(j.at("config"));
    if (j.contains("truth")) trace.truth = sos_params_from_json(j.at("truth"));
    for (const auto& y : j.at("samples"))
        trace.samples.push_back(y.is_string() ? parse_double(y.get<std::string>()) : y.get<double>());
    return trace;
}

std::string trace_to_csv(const FoldedTrace& trace) {
    std::ostringstream out;
    out << csv_provenance(to_json(trace.config), trace.config.seed);
    out << "n,y_w\n";
    for (std::size_t i = 0; i < trace.samples.size(); ++i)
        out << (i + 1) << "," << format_full(trace.samples[i]) << "\n";
    return out.str();
}

std::vector<double> trace_samples_from_csv(const std::string& csv) {
    std::vector<double> samples;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("trace CSV: malformed row");
        samples.push_back(parse_double(line.substr(comma + 1)));
    }
    return samples;
}

json to_json(const CrbReport& report) {
    return {{"mode", mode_name(report.mode)},
            {"gamma", vector_json(report.gamma)},
            {"psnr", report.psnr},
            {"bounds",
             {{"a", vector_json(report.bound_amplitude)},
              {"omegaT", vector_json(report.bound_omega_t)},
              {"phi", vector_json(report.bound_phase)}}}};
}

std::string crb_csv_row(const CrbReport& report) {
    std::ostringstream out;
    out << mode_name(report.mode) << "," << format_full(report.psnr);
    for (std::size_t i = 0; i < report.bound_amplitude.size(); ++i) {
        out << "," << format_full(report.gamma[i]) << "," << format_full(report.bound_amplitude[i])
            << "," << format_full(report.bound_omega_t[i]) << ","
            << format_full(report.bound_phase[i]);
    }
    return out.str();
}

json to_json(const EstimateResult& result) {
    json components = json::array();
    for (const auto& c : result.components) {
        components.push_back({{"omega_t", c.omega_t},
                              {"amplitude", c.amplitude},
                              {"phase", c.phase},
                              {"amplitude_diff", c.amplitude_diff},
                              {"phase_diff", c.phase_diff}});
    }
    return {{"components", components},
            {"model_order", result.model_order},
            {"singular_values", vector_json(result.singular_values)},
            {"rank_deficient", result.rank_deficient}};
}

json to_json(const SweepConfig& config) {
    return {{"signal", to_json(config.params)},
            {"sampling", to_json(config.base)},
            {"sweep",
             {{"psnr_grid_db", vector_json(config.psnr_grid_db)},
              {"trials", config.trials},
              {"model_order", config.model_order},
              {"keep_trial_frequencies", config.keep_trial_frequencies}}}};
}

SweepConfig sweep_config_from_json(const json& j) {
    SweepConfig config;
    config.params = sos_params_from_json(j.at("signal"));
    config.base = sampling_config_from_json(j.at("sampling"));
    const json& sweep = j.at("sweep");
    for (const auto& v : sweep.at("psnr_grid_db")) config.psnr_grid_db.push_back(v.get<double>());
    config.trials = sweep.value("trials", 1000);
    config.model_order = sweep.value("model_order", 1);
    config.keep_trial_frequencies = sweep.value("keep_trial_frequencies", false);
    config.validate();
    return config;
}

json to_json(const SweepResult& result) {
    const json config = to_json(result.config);
    json points = json::array();
    for (const auto& point : result.points) {
        json p = {{"psnr_db", point.psnr_db},
                  {"sigma", point.sigma},
                  {"mse_a", vector_json(point.mse_amplitude)},
                  {"mse_omegaT", vector_json(point.mse_omega_t)},
                  {"mse_phi", vector_json(point.mse_phase)},
                  {"crb_fim_a", vector_json(point.crb_fim_amplitude)},
                  {"crb_fim_omegaT", vector_json(point.crb_fim_omega_t)},
                  {"crb_fim_phi", vector_json(point.crb_fim_phase)},
                  {"mean_M", point.mean_fold_count},
                  {"failures", point.failures}};
        if (!point.crb_closed_omega_t.empty())
            p["crb_closed_omegaT"] = vector_json(point.crb_closed_omega_t);
        if (!point.trial_omega_t.empty()) p["trial_omegaT"] = vector_json(point.trial_omega_t);
        points.push_back(std::move(p));
    }
    json j = {{"provenance", provenance(config)}, {"config", config}, {"points", points}};
    j["provenance"]["seed"] = result.config.base.seed;
    return j;
}

std::string sweep_to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << csv_provenance(to_json(result.config), result.config.base.seed);
    const std::size_t k = result.config.params.components.size();
    out << "psnr_db";
    for (std::size_t c = 0; c < k; ++c)
        out << ",mse_a_" << (c + 1) << ",mse_omegaT_" << (c + 1) << ",mse_phi_" << (c + 1);
    if (k == 1) out << ",crb_closed_omegaT_1";
    for (std::size_t c = 0; c < k; ++c)
        out << ",crb_fim_a_" << (c + 1) << ",crb_fim_omegaT_" << (c + 1) << ",crb_fim_phi_"
            << (c + 1);
    out << ",mean_M,failures\n";
    for (const auto& point : result.points) {
        out << format_full(point.psnr_db);
        for (std::size_t c = 0; c < k; ++c)
            out << "," << format_full(point.mse_amplitude[c]) << ","
                << format_full(point.mse_omega_t[c]) << "," << format_full(point.mse_phase[c]);
        if (k == 1) out << "," << format_full(point.crb_closed_omega_t.front());
        for (std::size_t c = 0; c < k; ++c)
            out << "," << format_full(point.crb_fim_amplitude[c]) << ","
                << format_full(point.crb_fim_omega_t[c]) << ","
                << format_full(point.crb_fim_phase[c]);
        out << "," << format_full(point.mean_fold_count) << "," << point.failures << "\n";
    }
    return out.str();
}

}  // namespace modspec
