#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "modspec/bounds.hpp"
#include "modspec/experiments.hpp"

using namespace modspec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SweepConfig base_sweep() {
    SweepConfig config;
    config.params = SoSParams{{{1.0, 1.0481975511965977, 1.473564034166293}}};
    config.base.threshold = 0.99999017;
    config.base.count = 100;
    config.base.seed = 20250101;
    config.psnr_grid_db = {14.0};
    config.trials = 8;
    return config;
}

/// Hand-built sweep result with a constant CRB column, for region tests.
SweepResult synthetic_result(const std::vector<double>& mse_db) {
    SweepResult result;
    for (std::size_t i = 0; i < mse_db.size(); ++i) {
        SweepPoint point;
        point.psnr_db = 2.0 * static_cast<double>(i);
        point.mse_omega_t = {std::pow(10.0, mse_db[i] / 10.0)};
        point.crb_closed_omega_t = {1.0};  // 0 dB reference
        result.points.push_back(point);
    }
    return result;
}

}  // namespace

TEST_CASE("single trial at very high PSNR reproduces the truth") {
    auto config = base_sweep();
    config.base.threshold = kInf;
    config.psnr_grid_db = {200.0};
    config.trials = 1;
    auto result = run_sweep(config);
    REQUIRE(result.points.size() == 1);
    const auto& point = result.points.front();
    CHECK(point.failures == 0);
    CHECK(point.mse_omega_t.front() < 1e-12);
    CHECK(point.mse_amplitude.front() < 1e-12);
    CHECK(point.mse_phase.front() < 1e-12);
    CHECK(point.mean_fold_count == 0.0);
}

TEST_CASE("sigma follows the PSNR definition") {
    auto config = base_sweep();
    config.params.components[0].amplitude = 2.5;
    config.base.threshold = 2.5;
    config.psnr_grid_db = {0.0, 20.0};
    config.trials = 2;
    auto result = run_sweep(config);
    CHECK(result.points[0].sigma == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(result.points[1].sigma == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("attached bounds match direct calls to the bounds module") {
    auto config = base_sweep();
    config.psnr_grid_db = {12.0};
    config.trials = 4;
    auto result = run_sweep(config);
    const auto& point = result.points.front();

    SamplingConfig sampling = config.base;
    sampling.noise_sigma = point.sigma;
    auto [matrices, fim_report] = crb_fim(config.params, sampling);
    CHECK(point.crb_fim_omega_t == fim_report.bound_omega_t);
    CHECK(point.crb_fim_amplitude == fim_report.bound_amplitude);
    CHECK(point.crb_fim_phase == fim_report.bound_phase);

    const auto& comp = config.params.components[0];
    auto closed = crb_closed_form(comp.amplitude, comp.omega * sampling.step, point.sigma,
                                  sampling.count);
    REQUIRE(point.crb_closed_omega_t.size() == 1);
    CHECK(point.crb_closed_omega_t == closed.bound_omega_t);

    CHECK(point.mean_fold_count ==
          static_cast<double>(residue(config.params, sampling).fold_count()));
}

TEST_CASE("closed-form column is only attached for a single component") {
    SweepConfig config;
    config.params = SoSParams{{{1.0, 0.63, 0.4}, {1.0, 1.0, -0.7}}};
    config.base.threshold = kInf;
    config.base.count = 100;
    config.psnr_grid_db = {30.0};
    config.trials = 2;
    config.model_order = 2;
    auto result = run_sweep(config);
    CHECK(result.points.front().crb_closed_omega_t.empty());
    CHECK(result.points.front().crb_fim_omega_t.size() == 2);
    CHECK(result.points.front().mse_omega_t.size() == 2);
}

TEST_CASE("sweep output is bit-identical across thread counts") {
    auto config = base_sweep();
    config.psnr_grid_db = {6.0, 14.0, 22.0};
    config.trials = 30;
    config.keep_trial_frequencies = true;

    config.threads = 1;
    auto serial = run_sweep(config);
    for (int threads : {2, 3, 7}) {
        config.threads = threads;
        auto parallel = run_sweep(config);
        REQUIRE(parallel.points.size() == serial.points.size());
        for (std::size_t i = 0; i < serial.points.size(); ++i) {
            CHECK(parallel.points[i].mse_amplitude == serial.points[i].mse_amplitude);
            CHECK(parallel.points[i].mse_omega_t == serial.points[i].mse_omega_t);
            CHECK(parallel.points[i].mse_phase == serial.points[i].mse_phase);
            CHECK(parallel.points[i].failures == serial.points[i].failures);
            CHECK(parallel.points[i].trial_omega_t == serial.points[i].trial_omega_t);
        }
    }
}

TEST_CASE("sweep is reproducible from the seed alone") {
    auto config = base_sweep();
    config.psnr_grid_db = {10.0};
    config.trials = 16;
    auto a = run_sweep(config);
    auto b = run_sweep(config);
    CHECK(a.points[0].mse_omega_t == b.points[0].mse_omega_t);
    config.base.seed += 1;
    auto c = run_sweep(config);
    CHECK(a.points[0].mse_omega_t != c.points[0].mse_omega_t);
}

TEST_CASE("trial frequencies are only kept when requested") {
    auto config = base_sweep();
    config.trials = 5;
    auto result = run_sweep(config);
    CHECK(result.points.front().trial_omega_t.empty());
    config.keep_trial_frequencies = true;
    result = run_sweep(config);
    const auto& point = result.points.front();
    CHECK(point.trial_omega_t.size() ==
          static_cast<std::size_t>(config.trials - point.failures));
}

TEST_CASE("classify_regions on a clean CRB-following curve") {
    // MSE on the CRB from the start, monotone decline, no floor.
    auto result = synthetic_result({20, 10, 1, -4, -9, -14, -19});
    auto regions = classify_regions(result);
    REQUIRE(regions.threshold_low.has_value());
    CHECK(*regions.threshold_low == doctest::Approx(4.0));
    CHECK_FALSE(regions.threshold_high.has_value());
}

TEST_CASE("classify_regions detects the saturation onset") {
    // Follows the bound from 2 dB PSNR, flattens after 8 dB PSNR.
    auto result = synthetic_result({30, 4, 0, -4, -4.1, -4.15, -4.2});
    auto regions = classify_regions(result);
    REQUIRE(regions.threshold_low.has_value());
    CHECK(*regions.threshold_low == doctest::Approx(2.0));
    REQUIRE(regions.threshold_high.has_value());
    CHECK(*regions.threshold_high == doctest::Approx(8.0));
}

TEST_CASE("classify_regions with no CRB acquisition") {
    auto result = synthetic_result({40, 38, 36, 34, 32});
    auto regions = classify_regions(result);
    CHECK_FALSE(regions.threshold_low.has_value());
    CHECK_FALSE(regions.threshold_high.has_value());
}

TEST_CASE("classify_regions requires at least five grid points") {
    auto result = synthetic_result({10, 5, 0, -5});
    CHECK_THROWS_AS(classify_regions(result), std::invalid_argument);
}

TEST_CASE("sweep config validation") {
    auto config = base_sweep();
    config.psnr_grid_db = {};
    CHECK_THROWS_AS(run_sweep(config), std::invalid_argument);
    config.psnr_grid_db = {10.0, 10.0};
    CHECK_THROWS_AS(run_sweep(config), std::invalid_argument);
    config.psnr_grid_db = {10.0, 12.0};
    config.trials = 0;
    CHECK_THROWS_AS(run_sweep(config), std::invalid_argument);
    config.trials = 2;
    config.threads = 0;
    CHECK_THROWS_AS(run_sweep(config), std::invalid_argument);
}

TEST_CASE("estimator errors are counted as failures, not sweep errors") {
    // N = 9 cannot support K = 2 (needs N-1 >= 4K+1), so every trial fails;
    // the sweep still completes and reports the count.
    SweepConfig config;
    config.params = SoSParams{{{1.0, 0.63, 0.4}, {1.0, 1.0, -0.7}}};
    config.base.threshold = 1.999749;
    config.base.count = 9;
    config.base.seed = 20250202;
    config.psnr_grid_db = {14.0};
    config.trials = 10;
    config.model_order = 2;
    auto result = run_sweep(config);
    CHECK(result.points.front().failures == 10);
    CHECK(result.points.front().mse_omega_t == std::vector<double>{0.0, 0.0});
}
