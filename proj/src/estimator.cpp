#include "modspec/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "modspec/bounds.hpp"

namespace modspec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Candidate {
    double omega_t;
    double energy;  // data energy explained by a single-tone LS fit
};

/// Energy of the best single-tone fit at omega_t; used to rank pencil poles so
/// that spurious near-unit-circle poles lose to the actual signal frequencies.
double explained_energy(const std::vector<double>& diff, double omega_t) {
    const int n = static_cast<int>(diff.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs(i) = diff[static_cast<std::size_t>(i)];
        design(i, 0) = std::cos(omega_t * (i + 1));
        design(i, 1) = std::sin(omega_t * (i + 1));
    }
    const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(rhs);
    return (design * coeffs).squaredNorm();
}

}  // namespace

double wrap_angle(double angle) {
    double wrapped = std::fmod(angle + kPi, 2.0 * kPi);
    if (wrapped < 0.0) wrapped += 2.0 * kPi;
    return wrapped - kPi;
}

std::pair<double, double> back_out_difference_model(double amplitude_diff, double phase_diff,
                                                    double omega_t) {
    const double half_sin = std::sin(omega_t / 2.0);
    if (!(half_sin >= 1e-9))
        throw DegenerateFrequency("back_out_difference_model: omega*T too close to 0 or 2*pi");
    return {amplitude_diff / (2.0 * half_sin), wrap_angle(phase_diff - omega_t / 2.0 - kPi / 2.0)};
}

EstimateResult estimate(const FoldedTrace& trace, int model_order,
                        std::optional<int> pencil_param, const PencilOptions& options) {
    const int n = static_cast<int>(trace.samples.size());
    const int k = model_order;
    if (k < 1) throw std::invalid_argument("estimate: model order must be positive");
    const int diff_len = n - 1;
    if (diff_len < 2 * (2 * k) + 1)
        throw OrderTooLarge("estimate: need N-1 >= 4K+1 samples");
    const int pencil = pencil_param.value_or(diff_len / 3);
    if (pencil < 2 * k || pencil > diff_len - 2 * k)
        throw OrderTooLarge("estimate: pencil parameter outside [2K, N-1-2K]");

    const std::vector<double> diff = finite_difference(trace.samples, 1);

    // Hankel matrix of the differenced samples.
    const int rows = diff_len - pencil;
    const int cols = pencil + 1;
    Eigen::MatrixXd hankel(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) hankel(i, j) = diff[static_cast<std::size_t>(i + j)];

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(hankel, Eigen::ComputeThinU | Eigen::ComputeThinV);

    EstimateResult result;
    result.singular_values.assign(svd.singularValues().data(),
                                  svd.singularValues().data() + svd.singularValues().size());

    // Shifted pencil on the truncated signal subspace: V1 X = V2. The
    // subspace is over-modeled beyond 2K so spikes and noise get their own
    // poles instead of perturbing the signal ones.
    const int subspace_dim = std::min({2 * k + std::max(0, options.subspace_extra),
                                       cols - 1, rows});
    const Eigen::MatrixXd subspace = svd.matrixV().leftCols(subspace_dim);
    const Eigen::MatrixXd v1 = subspace.topRows(cols - 1);
    const Eigen::MatrixXd v2 = subspace.bottomRows(cols - 1);
    const Eigen::MatrixXd pencil_op = v1.colPivHouseholderQr().solve(v2);

    Eigen::EigenSolver<Eigen::MatrixXd> eigen(pencil_op);
    std::vector<Candidate> candidates;
    for (int i = 0; i < eigen.eigenvalues().size(); ++i) {
        const std::complex<double> z = eigen.eigenvalues()(i);
        result.poles.push_back(z);
        const double magnitude = std::abs(z);
        const double angle = std::arg(z);
        if (z.imag() <= 0.0 || angle <= 0.0 || angle >= kPi) continue;
        if (magnitude < options.min_magnitude || magnitude > options.max_magnitude) continue;
        candidates.push_back({angle, explained_energy(diff, angle)});
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.energy > b.energy; });
    if (static_cast<int>(candidates.size()) > k) candidates.resize(static_cast<std::size_t>(k));
    result.rank_deficient = static_cast<int>(candidates.size()) < k;
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.omega_t < b.omega_t; });

    const int found = static_cast<int>(candidates.size());
    result.model_order = found;
    if (found == 0) return result;

    // Least-squares amplitudes/phases of the differenced model, with a few
    // variable-projection Gauss-Newton steps on the frequencies: the pencil
    // output seeds a nonlinear fit that closes the gap to the CRB.
    Eigen::VectorXd omegas(found);
    for (int c = 0; c < found; ++c) omegas(c) = candidates[static_cast<std::size_t>(c)].omega_t;

    Eigen::MatrixXd design(diff_len, 2 * found);
    Eigen::VectorXd rhs(diff_len);
    for (int i = 0; i < diff_len; ++i) rhs(i) = diff[static_cast<std::size_t>(i)];
    auto fill_design = [&]() {
        for (int i = 0; i < diff_len; ++i) {
            for (int c = 0; c < found; ++c) {
                const double arg = omegas(c) * (i + 1);
                design(i, 2 * c) = std::cos(arg);
                design(i, 2 * c + 1) = std::sin(arg);
            }
        }
    };
    fill_design();
    Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(rhs);

    for (int iteration = 0; iteration < options.refine_iterations; ++iteration) {
        const Eigen::VectorXd residual = rhs - design * coeffs;
        Eigen::MatrixXd jacobian(diff_len, found);
        for (int i = 0; i < diff_len; ++i) {
            for (int c = 0; c < found; ++c) {
                const double n = i + 1;
                const double arg = omegas(c) * n;
                jacobian(i, c) =
                    n * (-coeffs(2 * c) * std::sin(arg) + coeffs(2 * c + 1) * std::cos(arg));
            }
        }
        const Eigen::VectorXd step = jacobian.colPivHouseholderQr().solve(residual);
        if (!step.allFinite()) break;
        const Eigen::VectorXd proposal = omegas + step;
        bool valid = true;
        for (int c = 0; c < found; ++c)
            if (!(proposal(c) > 0.0 && proposal(c) < kPi)) valid = false;
        if (!valid) break;
        omegas = proposal;
        fill_design();
        coeffs = design.colPivHouseholderQr().solve(rhs);
        if (step.lpNorm<Eigen::Infinity>() < 1e-12) break;
    }

    for (int c = 0; c < found; ++c)
        candidates[static_cast<std::size_t>(c)].omega_t = omegas(c);
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.omega_t < b.omega_t; });
    for (int i = 0; i < diff_len; ++i)
        for (int c = 0; c < found; ++c) {
            const double arg = candidates[static_cast<std::size_t>(c)].omega_t * (i + 1);
            design(i, 2 * c) = std::cos(arg);
            design(i, 2 * c + 1) = std::sin(arg);
        }
    coeffs = design.colPivHouseholderQr().solve(rhs);

    for (int c = 0; c < found; ++c) {
        EstimatedComponent comp;
        comp.omega_t = candidates[static_cast<std::size_t>(c)].omega_t;
        const double cos_coeff = coeffs(2 * c);
        const double sin_coeff = coeffs(2 * c + 1);
        // a_d sin(w n + phi_d) = a_d sin(phi_d) cos(w n) + a_d cos(phi_d) sin(w n)
        comp.amplitude_diff = std::hypot(cos_coeff, sin_coeff);
        comp.phase_diff = std::atan2(cos_coeff, sin_coeff);
        const auto [amplitude, phase] =
            back_out_difference_model(comp.amplitude_diff, comp.phase_diff, comp.omega_t);
        comp.amplitude = amplitude;
        comp.phase = phase;
        result.components.push_back(comp);
    }
    return result;
}

}  // namespace modspec
