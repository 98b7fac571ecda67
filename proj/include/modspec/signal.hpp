#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace modspec {

/// Residue coefficient not within tolerance of a multiple of 2*lambda.
class SnapError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Sinusoid {
    double amplitude = 1.0;  // a_k > 0
    double omega = 1.0;      // rad/s, > 0
    double phase = 0.0;      // rad, in [-pi, pi)
};

/// Ground-truth sum-of-sinusoids parameters.
struct SoSParams {
    std::vector<Sinusoid> components;

    void validate() const;
    double l1_amplitude() const;  // ||a||_1
    double max_omega() const;     // Omega = max_k omega_k
};

struct SamplingConfig {
    double threshold = 1.0;    // folding threshold lambda > 0 (+inf = no folding)
    double step = 1.0;         // sampling step T, seconds
    int count = 100;           // number of samples N >= 2
    double noise_sigma = 0.0;  // Gaussian noise std dev, >= 0
    std::uint64_t seed = 0;

    void validate() const;
};

/// Noisy folded samples y_w[n], n = 1..N. samples[i] holds y_w[i+1]: the
/// paper indexes from 1, internal storage is 0-based.
struct FoldedTrace {
    std::vector<double> samples;
    SamplingConfig config;
    std::optional<SoSParams> truth;
};

struct ResidueSpike {
    int index = 0;             // n_m in [1, N-1]
    double coefficient = 0.0;  // c_m, exact multiple of 2*lambda
};

/// Sparse first difference of the residue g - fold(g) on the sample grid.
struct ResidueSpec {
    std::vector<ResidueSpike> spikes;

    int fold_count() const { return static_cast<int>(spikes.size()); }
};

/// Centered modulo map: 2*lambda*(frac((v+lambda)/(2*lambda)) - 1/2),
/// range [-lambda, lambda). Identity when lambda is +inf.
double fold(double value, double lambda);

/// Noiseless unfolded samples g[n] = sum_k a_k sin(omega_k nT + phi_k), n = 1..N.
std::vector<double> synthesize(const SoSParams& params, const SamplingConfig& config);

/// Folds and adds seeded Gaussian noise; pure function of (params, config).
FoldedTrace acquire(const SoSParams& params, const SamplingConfig& config);

/// Ground-truth residue spikes: nonzero entries of Delta(g - fold(g)), each
/// coefficient snapped to the nearest multiple of 2*lambda (tolerance
/// lambda*1e-6, SnapError beyond that).
ResidueSpec residue(const SoSParams& params, const SamplingConfig& config);

/// L-th order forward difference; output is L shorter than the input.
std::vector<double> finite_difference(std::span<const double> x, int order);

/// Largest sampling step such that ||Delta^L g||_inf <= kappa:
/// (2/Omega) * asin(0.5 * (kappa/||a||_1)^(1/L)); +inf when the bound is inactive.
double max_step(const SoSParams& params, double kappa, int order);

/// Upper bound 2^L sin^L(Omega*T/2) * ||a||_1 on ||Delta^L g||_inf.
double diff_norm_bound(const SoSParams& params, double step, int order);

}  // namespace modspec
