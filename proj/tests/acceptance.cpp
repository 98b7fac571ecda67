// Acceptance harness: one pass/fail line per criterion, exit code = number of
// failures. Run with --full-trials to restore the 10000-trial sweeps.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "modspec/bounds.hpp"
#include "modspec/estimator.hpp"
#include "modspec/experiments.hpp"
#include "modspec/rng.hpp"
#include "modspec/signal.hpp"
#include "modspec/verify.hpp"

using namespace modspec;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

const SoSParams kFig1Params{{{1.0, 1.0481975511965977, 1.473564034166293}}};
constexpr double kFig1Threshold = 0.99999017;
const SoSParams kFig2Params{
    {{1.0, 0.63, 1.4867228626928295}, {1.0, 1.0, 1.8362787842315882}}};
constexpr double kFig2Threshold = 1.999749;

int failures = 0;

void report(int criterion, const char* title, bool passed, double seconds,
            const std::string& detail) {
    std::printf("%s criterion %d: %s (%.2f s)%s%s\n", passed ? "PASS" : "FAIL", criterion, title,
                seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!passed) ++failures;
}

template <typename Fn>
void timed(int criterion, const char* title, double budget_s, Fn&& body) {
    const auto start = std::chrono::steady_clock::now();
    bool passed = false;
    std::string detail;
    try {
        passed = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    if (seconds > budget_s) {
        passed = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over runtime budget");
    }
    report(criterion, title, passed, seconds, detail);
}

SweepConfig fig1_sweep(int trials) {
    SweepConfig config;
    config.params = kFig1Params;
    config.base.threshold = kFig1Threshold;
    config.base.count = 100;
    config.base.seed = 20250101;
    for (int db = 0; db <= 30; db += 2) config.psnr_grid_db.push_back(db);
    config.trials = trials;
    config.model_order = 1;
    config.threads = std::max(1u, std::thread::hardware_concurrency());
    return config;
}

SweepConfig fig2_sweep(int trials) {
    SweepConfig config;
    config.params = kFig2Params;
    config.base.threshold = kFig2Threshold;
    config.base.count = 100;
    config.base.seed = 20250202;
    config.psnr_grid_db = {14.0};
    config.trials = trials;
    config.model_order = 2;
    config.threads = std::max(1u, std::thread::hardware_concurrency());
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    int trials = 1000;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--full-trials") == 0) trials = 10000;

    // 1. Fold-count reproduction: M = 6 and M = 2, exact.
    timed(1, "fold-count reproduction", 1.0, [&](std::string& detail) {
        SamplingConfig c1;
        c1.threshold = kFig1Threshold;
        c1.count = 100;
        SamplingConfig c2 = c1;
        c2.threshold = kFig2Threshold;
        const int m1 = residue(kFig1Params, c1).fold_count();
        const int m2 = residue(kFig2Params, c2).fold_count();
        detail = "M1=" + std::to_string(m1) + " M2=" + std::to_string(m2);
        return m1 == 6 && m2 == 2;
    });

    // 2. Theorem 2 convergence of the folded/conventional CRB ratio to gamma.
    timed(2, "Theorem 2 ratio convergence", 10.0, [&](std::string& detail) {
        bool ok = true;
        char buffer[64];
        for (double omega_t : {0.63, 1.00, 1.05, kPi / 2.0}) {
            const double gamma = gamma_factor(omega_t);
            double previous = std::numeric_limits<double>::infinity();
            double final_dev = 0.0;
            for (int count : {200, 500, 1000, 2000}) {
                SamplingConfig config;
                config.count = count;
                config.noise_sigma = 0.1;
                SoSParams params{{{1.0, omega_t, 0.4}}};
                const auto [matrices, folded] = crb_fim(params, config);
                const auto conventional = crb_conventional_asymptotic(1.0, 0.1, count);
                double dev = 0.0;
                const double ratios[3] = {
                    folded.bound_amplitude[0] / conventional.bound_amplitude[0],
                    folded.bound_omega_t[0] / conventional.bound_omega_t[0],
                    folded.bound_phase[0] / conventional.bound_phase[0]};
                for (double r : ratios) dev = std::max(dev, std::abs(r - gamma) / gamma);
                if (dev >= previous) ok = false;
                previous = dev;
                final_dev = dev;
            }
            if (final_dev >= 0.02) ok = false;
            std::snprintf(buffer, sizeof(buffer), "wT=%.4g dev=%.2e ", omega_t, final_dev);
            detail += buffer;
        }
        return ok;
    });

    // 3. Closed form equals the leading-order gram inversion.
    timed(3, "closed form vs leading-order inversion", 5.0, [&](std::string& detail) {
        SplitMix64 gen(0xacce97);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double a1 = 0.2 + 2.0 * gen.next_unit();
            const double omega_t = 0.1 + (kPi - 0.2) * gen.next_unit();
            const double sigma = 0.01 + gen.next_unit();
            const int count = 50 + static_cast<int>(gen.next_u64() % 2000);
            const auto closed = crb_closed_form(a1, omega_t, sigma, count);
            const auto gram = r_matrix_asymptotic(a1, omega_t, 1.0, count).leading;
            const double det = gram.determinant();
            const double variance = 2.0 * sigma * sigma;
            const double inv_a =
                variance * (gram(1, 1) * gram(2, 2) - gram(1, 2) * gram(1, 2)) / det;
            const double inv_w = variance * gram(0, 0) * gram(2, 2) / det;
            const double inv_p = variance * gram(0, 0) * gram(1, 1) / det;
            worst = std::max({worst,
                              std::abs(closed.bound_amplitude[0] - inv_a) / inv_a,
                              std::abs(closed.bound_omega_t[0] - inv_w) / inv_w,
                              std::abs(closed.bound_phase[0] - inv_p) / inv_p});
        }
        char buffer[48];
        std::snprintf(buffer, sizeof(buffer), "max rel err %.2e", worst);
        detail = buffer;
        return worst < 1e-12;
    });

    // 4. Independent-oracle suite.
    timed(4, "oracle suite", 30.0, [&](std::string& detail) {
        bool ok = true;
        for (const auto& check : run_oracle_suite(false)) {
            char buffer[128];
            std::snprintf(buffer, sizeof(buffer), "[%s margin=%.2e] ", check.name.c_str(),
                          check.margin);
            detail += buffer;
            ok = ok && check.passed;
        }
        return ok;
    });

    // 5. Single-sinusoid sweep: CRB tracking in [8,14] dB, saturation in [14,22] dB.
    timed(5, "single-sinusoid Monte Carlo vs CRB", 300.0, [&](std::string& detail) {
        const auto result = run_sweep(fig1_sweep(trials));
        bool tracking = true;
        double worst_gap = 0.0;
        for (const auto& point : result.points) {
            if (point.psnr_db < 8.0 || point.psnr_db > 14.0) continue;
            const double gap =
                10.0 * std::log10(point.mse_omega_t[0] / point.crb_closed_omega_t[0]);
            worst_gap = std::max(worst_gap, std::abs(gap));
            if (std::abs(gap) > 3.0) tracking = false;
        }
        bool saturates = false;
        double best_slope = -1e9;
        for (std::size_t i = 1; i < result.points.size(); ++i) {
            const auto& prev = result.points[i - 1];
            const auto& cur = result.points[i];
            if (cur.psnr_db < 14.0 || cur.psnr_db > 22.0) continue;
            const double slope = (10.0 * std::log10(cur.mse_omega_t[0]) -
                                  10.0 * std::log10(prev.mse_omega_t[0])) /
                                 (cur.psnr_db - prev.psnr_db);
            best_slope = std::max(best_slope, slope);
            if (slope > -0.3) saturates = true;
        }
        char buffer[96];
        std::snprintf(buffer, sizeof(buffer), "max |gap| %.2f dB, max slope %.2f dB/dB",
                      worst_gap, best_slope);
        detail = buffer;
        return tracking && saturates;
    });

    // 6. Two-sinusoid sweep at 14 dB vs the gamma_k-scaled conventional bounds.
    timed(6, "two-sinusoid Monte Carlo vs CRB", 300.0, [&](std::string& detail) {
        const auto result = run_sweep(fig2_sweep(trials));
        const auto& point = result.points.front();
        const auto conventional = crb_conventional_asymptotic(1.0, point.sigma, 100);
        bool ok = true;
        for (std::size_t k = 0; k < 2; ++k) {
            const double gamma = gamma_factor(kFig2Params.components[k].omega);
            const double bound = gamma * conventional.bound_omega_t[0];
            const double gap = 10.0 * std::log10(point.mse_omega_t[k] / bound);
            char buffer[48];
            std::snprintf(buffer, sizeof(buffer), "gap_%zu=%.2f dB ", k + 1, gap);
            detail += buffer;
            if (std::abs(gap) > 3.0) ok = false;
        }
        detail += "failures=" + std::to_string(point.failures);
        return ok;
    });

    // 7. Bit-identical sweeps across thread counts.
    timed(7, "thread-count determinism", 120.0, [&](std::string& detail) {
        auto config = fig1_sweep(64);
        config.psnr_grid_db = {6.0, 14.0, 22.0};
        config.threads = 1;
        const auto serial = run_sweep(config);
        for (int threads : {2, 5}) {
            config.threads = threads;
            const auto parallel = run_sweep(config);
            for (std::size_t i = 0; i < serial.points.size(); ++i) {
                if (parallel.points[i].mse_amplitude != serial.points[i].mse_amplitude ||
                    parallel.points[i].mse_omega_t != serial.points[i].mse_omega_t ||
                    parallel.points[i].mse_phase != serial.points[i].mse_phase ||
                    parallel.points[i].failures != serial.points[i].failures) {
                    detail = "mismatch at " + std::to_string(threads) + " threads";
                    return false;
                }
            }
        }
        detail = "identical at 1, 2, 5 threads";
        return true;
    });

    std::printf("%d of 7 criteria failed\n", failures);
    return failures;
}
