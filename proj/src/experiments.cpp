#include "modspec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "modspec/estimator.hpp"
#include "modspec/rng.hpp"

namespace modspec {

namespace {

/// Pairwise reduction; the result does not depend on how trials were
/// scheduled, only on their index order.
double pairwise_sum(const std::vector<double>& values, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double sum = 0.0;
        for (std::size_t i = lo; i < hi; ++i) sum += values[i];
        return sum;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(values, lo, mid) + pairwise_sum(values, mid, hi);
}

double pairwise_mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    return pairwise_sum(values, 0, values.size()) / static_cast<double>(values.size());
}

struct TrialOutcome {
    bool failed = true;
    std::vector<double> err_amplitude;
    std::vector<double> err_omega_t;
    std::vector<double> err_phase;
    std::vector<double> omega_t;
};

/// Greedy nearest-frequency association; fails the trial when two estimates
/// collide on one ground-truth component.
bool associate(const std::vector<EstimatedComponent>& estimates, const SoSParams& truth,
               double step, std::vector<int>& assignment) {
    const std::size_t k = truth.components.size();
    assignment.assign(estimates.size(), -1);
    std::vector<bool> taken(k, false);
    std::vector<bool> used(estimates.size(), false);
    for (std::size_t round = 0; round < estimates.size(); ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_e = 0, best_t = 0;
        for (std::size_t e = 0; e < estimates.size(); ++e) {
            if (used[e]) continue;
            for (std::size_t t = 0; t < k; ++t) {
                if (taken[t]) continue;
                const double d = std::abs(estimates[e].omega_t - truth.components[t].omega * step);
                if (d < best) {
                    best = d;
                    best_e = e;
                    best_t = t;
                }
            }
        }
        if (!std::isfinite(best)) return false;
        assignment[best_e] = static_cast<int>(best_t);
        used[best_e] = true;
        taken[best_t] = true;
    }
    return true;
}

TrialOutcome run_trial(const SweepConfig& config, const SamplingConfig& sampling) {
    TrialOutcome outcome;
    const std::size_t k = config.params.components.size();
    EstimateResult est;
    try {
        est = estimate(acquire(config.params, sampling), config.model_order);
    } catch (const std::exception&) {
        return outcome;
    }
    if (est.rank_deficient || est.components.size() != k) return outcome;

    std::vector<int> assignment;
    if (!associate(est.components, config.params, sampling.step, assignment)) return outcome;

    outcome.err_amplitude.assign(k, 0.0);
    outcome.err_omega_t.assign(k, 0.0);
    outcome.err_phase.assign(k, 0.0);
    outcome.omega_t.assign(k, 0.0);
    for (std::size_t e = 0; e < est.components.size(); ++e) {
        const auto& truth = config.params.components[static_cast<std::size_t>(assignment[e])];
        const auto& comp = est.components[e];
        const double da = comp.amplitude - truth.amplitude;
        const double dw = comp.omega_t - truth.omega * sampling.step;
        const double dp = wrap_angle(comp.phase - truth.phase);
        const std::size_t t = static_cast<std::size_t>(assignment[e]);
        outcome.err_amplitude[t] = da * da;
        outcome.err_omega_t[t] = dw * dw;
        outcome.err_phase[t] = dp * dp;
        outcome.omega_t[t] = comp.omega_t;
    }
    outcome.failed = false;
    return outcome;
}

}  // namespace

void SweepConfig::validate() const {
    params.validate();
    base.validate();
    if (psnr_grid_db.empty()) throw std::invalid_argument("SweepConfig: empty PSNR grid");
    for (std::size_t i = 1; i < psnr_grid_db.size(); ++i)
        if (!(psnr_grid_db[i] > psnr_grid_db[i - 1]))
            throw std::invalid_argument("SweepConfig: PSNR grid must be strictly increasing");
    if (trials < 1) throw std::invalid_argument("SweepConfig: trials must be positive");
    if (model_order < 1) throw std::invalid_argument("SweepConfig: model order must be positive");
    if (threads < 1) throw std::invalid_argument("SweepConfig: threads must be positive");
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();
    SweepResult result;
    result.config = config;
    const std::size_t k = config.params.components.size();
    const double a1 = config.params.components.front().amplitude;
    const std::size_t trials = static_cast<std::size_t>(config.trials);

    for (std::size_t point_index = 0; point_index < config.psnr_grid_db.size(); ++point_index) {
        SweepPoint point;
        point.psnr_db = config.psnr_grid_db[point_index];
        point.sigma = a1 * std::pow(10.0, -point.psnr_db / 20.0);

        SamplingConfig sampling = config.base;
        sampling.noise_sigma = point.sigma;

        // CRB columns attached from the bounds module, exactly as a direct call.
        auto [matrices, fim_report] = crb_fim(config.params, sampling);
        point.crb_fim_amplitude = fim_report.bound_amplitude;
        point.crb_fim_omega_t = fim_report.bound_omega_t;
        point.crb_fim_phase = fim_report.bound_phase;
        if (k == 1) {
            const auto closed = crb_closed_form(a1, config.params.components[0].omega * sampling.step,
                                                point.sigma, sampling.count);
            point.crb_closed_omega_t = closed.bound_omega_t;
        }
        point.mean_fold_count = residue(config.params, sampling).fold_count();

        std::vector<TrialOutcome> outcomes(trials);
        auto worker = [&](std::size_t begin, std::size_t end) {
            for (std::size_t t = begin; t < end; ++t) {
                SamplingConfig trial_config = sampling;
                trial_config.seed =
                    substream_seed(config.base.seed, point_index * trials + t);
                outcomes[t] = run_trial(config, trial_config);
            }
        };
        const std::size_t n_threads = std::min<std::size_t>(
            static_cast<std::size_t>(config.threads), std::max<std::size_t>(trials, 1));
        if (n_threads <= 1) {
            worker(0, trials);
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (trials + n_threads - 1) / n_threads;
            for (std::size_t i = 0; i < n_threads; ++i)
                pool.emplace_back(worker, i * chunk, std::min(trials, (i + 1) * chunk));
            for (auto& thread : pool) thread.join();
        }

        point.mse_amplitude.assign(k, 0.0);
        point.mse_omega_t.assign(k, 0.0);
        point.mse_phase.assign(k, 0.0);
        std::vector<double> scratch;
        scratch.reserve(trials);
        for (std::size_t c = 0; c < k; ++c) {
            for (auto field : {&TrialOutcome::err_amplitude, &TrialOutcome::err_omega_t,
                               &TrialOutcome::err_phase}) {
                scratch.clear();
                for (const auto& outcome : outcomes)
                    if (!outcome.failed) scratch.push_back((outcome.*field)[c]);
                const double mse = pairwise_mean(scratch);
                if (field == &TrialOutcome::err_amplitude)
                    point.mse_amplitude[c] = mse;
                else if (field == &TrialOutcome::err_omega_t)
                    point.mse_omega_t[c] = mse;
                else
                    point.mse_phase[c] = mse;
            }
        }
        for (const auto& outcome : outcomes) {
            if (outcome.failed) {
                ++point.failures;
            } else if (config.keep_trial_frequencies) {
                point.trial_omega_t.insert(point.trial_omega_t.end(), outcome.omega_t.begin(),
                                           outcome.omega_t.end());
            }
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

RegionBoundaries classify_regions(const SweepResult& result) {
    if (result.points.size() < 5)
        throw std::invalid_argument("classify_regions: need at least 5 grid points");
    RegionBoundaries boundaries;
    std::vector<double> gap_db, mse_db, psnr_db;
    for (const auto& point : result.points) {
        const double crb = point.crb_closed_omega_t.empty() ? point.crb_fim_omega_t.front()
                                                            : point.crb_closed_omega_t.front();
        const double mse = point.mse_omega_t.front();
        psnr_db.push_back(point.psnr_db);
        mse_db.push_back(10.0 * std::log10(mse));
        gap_db.push_back(10.0 * std::log10(mse / crb));
    }
    std::size_t low_index = result.points.size();
    for (std::size_t i = 0; i < gap_db.size(); ++i) {
        if (gap_db[i] < 6.0) {
            boundaries.threshold_low = psnr_db[i];
            low_index = i;
            break;
        }
    }
    for (std::size_t i = low_index + 1; i < mse_db.size(); ++i) {
        const double slope = (mse_db[i] - mse_db[i - 1]) / (psnr_db[i] - psnr_db[i - 1]);
        if (slope > -0.3) {
            boundaries.threshold_high = psnr_db[i];
            break;
        }
    }
    return boundaries;
}

}  // namespace modspec
