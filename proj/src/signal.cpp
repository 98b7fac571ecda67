#include "modspec/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modspec/rng.hpp"

namespace modspec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

[[noreturn]] void fail(const char* message) { throw std::invalid_argument(message); }

}  // namespace

void SoSParams::validate() const {
    if (components.empty()) fail("SoSParams: at least one component required");
    for (const auto& c : components) {
        if (!(c.amplitude > 0.0)) fail("SoSParams: amplitudes must be positive");
        if (!(c.omega > 0.0)) fail("SoSParams: frequencies must be positive");
        if (!(c.phase >= -kPi && c.phase < kPi)) fail("SoSParams: phase must lie in [-pi, pi)");
    }
    for (std::size_t i = 0; i < components.size(); ++i)
        for (std::size_t j = i + 1; j < components.size(); ++j)
            if (components[i].omega == components[j].omega)
                fail("SoSParams: frequencies must be pairwise distinct");
}

double SoSParams::l1_amplitude() const {
    double sum = 0.0;
    for (const auto& c : components) sum += std::abs(c.amplitude);
    return sum;
}

double SoSParams::max_omega() const {
    double max = 0.0;
    for (const auto& c : components) max = std::max(max, std::abs(c.omega));
    return max;
}

void SamplingConfig::validate() const {
    if (!(threshold > 0.0)) fail("SamplingConfig: threshold must be positive");
    if (!(step > 0.0) || !std::isfinite(step)) fail("SamplingConfig: step must be positive");
    if (count < 2) fail("SamplingConfig: count must be at least 2");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        fail("SamplingConfig: noise_sigma must be nonnegative");
}

double fold(double value, double lambda) {
    if (!(lambda > 0.0)) fail("fold: lambda must be positive");
    if (std::isnan(value)) fail("fold: value must be finite");
    if (std::isinf(lambda)) return value;
    if (std::isinf(value)) fail("fold: value must be finite");
    const double two_lambda = 2.0 * lambda;
    double frac = (value + lambda) / two_lambda;
    frac -= std::floor(frac);
    double folded = two_lambda * (frac - 0.5);
    // Rounding can push frac to 1.0 for values just below a fold boundary;
    // clamp back into [-lambda, lambda).
    if (folded >= lambda) folded = -lambda;
    return folded;
}

std::vector<double> synthesize(const SoSParams& params, const SamplingConfig& config) {
    params.validate();
    config.validate();
    std::vector<double> out(static_cast<std::size_t>(config.count), 0.0);
    for (int i = 0; i < config.count; ++i) {
        const double t = static_cast<double>(i + 1) * config.step;  // n = i+1
        double value = 0.0;
        for (const auto& c : params.components) value += c.amplitude * std::sin(c.omega * t + c.phase);
        out[static_cast<std::size_t>(i)] = value;
    }
    return out;
}

FoldedTrace acquire(const SoSParams& params, const SamplingConfig& config) {
    FoldedTrace trace;
    trace.samples = synthesize(params, config);
    for (double& y : trace.samples) y = fold(y, config.threshold);
    if (config.noise_sigma > 0.0) {
        GaussianStream noise(config.seed);
        for (double& y : trace.samples) y += config.noise_sigma * noise.next();
    }
    trace.config = config;
    trace.truth = params;
    return trace;
}

ResidueSpec residue(const SoSParams& params, const SamplingConfig& config) {
    const std::vector<double> g = synthesize(params, config);
    const double lambda = config.threshold;
    std::vector<double> eps(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) eps[i] = g[i] - fold(g[i], lambda);

    ResidueSpec spec;
    if (std::isinf(lambda)) return spec;
    const double two_lambda = 2.0 * lambda;
    const double tolerance = lambda * 1e-6;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        const double jump = eps[i + 1] - eps[i];
        const double multiple = std::round(jump / two_lambda);
        if (std::abs(jump - multiple * two_lambda) >= tolerance)
            throw SnapError("residue: jump is not a multiple of 2*lambda within tolerance");
        if (multiple != 0.0)
            spec.spikes.push_back({static_cast<int>(i) + 1, multiple * two_lambda});
    }
    return spec;
}

std::vector<double> finite_difference(std::span<const double> x, int order) {
    if (order < 1) fail("finite_difference: order must be positive");
    if (static_cast<std::size_t>(order) >= x.size())
        fail("finite_difference: order must be smaller than the input length");
    std::vector<double> work(x.begin(), x.end());
    for (int pass = 0; pass < order; ++pass) {
        for (std::size_t i = 0; i + 1 < work.size(); ++i) work[i] = work[i + 1] - work[i];
        work.pop_back();
    }
    return work;
}

double max_step(const SoSParams& params, double kappa, int order) {
    params.validate();
    if (!(kappa > 0.0)) fail("max_step: kappa must be positive");
    if (order < 1) fail("max_step: order must be positive");
    const double ratio = kappa / params.l1_amplitude();
    const double arg = 0.5 * std::pow(ratio, 1.0 / static_cast<double>(order));
    if (arg >= 1.0) return std::numeric_limits<double>::infinity();
    return (2.0 / params.max_omega()) * std::asin(arg);
}

double diff_norm_bound(const SoSParams& params, double step, int order) {
    params.validate();
    if (!(step > 0.0)) fail("diff_norm_bound: step must be positive");
    if (order < 1) fail("diff_norm_bound: order must be positive");
    const double s = 2.0 * std::sin(params.max_omega() * step / 2.0);
    return std::pow(s, static_cast<double>(order)) * params.l1_amplitude();
}

}  // namespace modspec
