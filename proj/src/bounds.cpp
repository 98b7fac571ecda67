#include "modspec/bounds.hpp"

#include <cmath>
#include <complex>

namespace modspec {

namespace {

constexpr double kDegenerateTol = 1e-12;
constexpr double kMaxCondition = 1e12;
constexpr double kSqrt2Pi = 2.506628274631000502415765284811;

using Complex = std::complex<double>;

[[noreturn]] void fail(const char* message) { throw std::invalid_argument(message); }

/// Jacobian of the first-differenced model, parameterized by (a_k, omega_k,
/// phi_k); rows index n = 1..N-1.
Eigen::MatrixXd differenced_jacobian(const SoSParams& params, double step, int count) {
    const int rows = count - 1;
    const int k = static_cast<int>(params.components.size());
    Eigen::MatrixXd z(rows, 3 * k);
    for (int c = 0; c < k; ++c) {
        const auto& comp = params.components[static_cast<std::size_t>(c)];
        for (int i = 0; i < rows; ++i) {
            const double n = static_cast<double>(i + 1);
            const double theta0 = comp.omega * step * n + comp.phase;
            const double theta1 = comp.omega * step * (n + 1.0) + comp.phase;
            z(i, 3 * c) = std::sin(theta1) - std::sin(theta0);
            z(i, 3 * c + 1) = comp.amplitude * step * ((n + 1.0) * std::cos(theta1) - n * std::cos(theta0));
            z(i, 3 * c + 2) = comp.amplitude * (std::cos(theta1) - std::cos(theta0));
        }
    }
    return z;
}

/// Jacobian of the plain (unfolded, undifferenced) model; rows n = 1..N.
Eigen::MatrixXd plain_jacobian(const SoSParams& params, double step, int count) {
    const int k = static_cast<int>(params.components.size());
    Eigen::MatrixXd z(count, 3 * k);
    for (int c = 0; c < k; ++c) {
        const auto& comp = params.components[static_cast<std::size_t>(c)];
        for (int i = 0; i < count; ++i) {
            const double n = static_cast<double>(i + 1);
            const double theta = comp.omega * step * n + comp.phase;
            z(i, 3 * c) = std::sin(theta);
            z(i, 3 * c + 1) = comp.amplitude * step * n * std::cos(theta);
            z(i, 3 * c + 2) = comp.amplitude * std::cos(theta);
        }
    }
    return z;
}

CrbReport report_from_inverse(const SoSParams& params, const Eigen::MatrixXd& inverse,
                              double noise_variance, double step, double sigma, CrbMode mode) {
    CrbReport report;
    report.mode = mode;
    const double a1 = params.components.front().amplitude;
    report.psnr = a1 * a1 / (sigma * sigma);
    const int k = static_cast<int>(params.components.size());
    for (int c = 0; c < k; ++c) {
        const auto& comp = params.components[static_cast<std::size_t>(c)];
        report.gamma.push_back(gamma_factor(comp.omega * step));
        report.bound_amplitude.push_back(noise_variance * inverse(3 * c, 3 * c));
        report.bound_omega_t.push_back(noise_variance * step * step * inverse(3 * c + 1, 3 * c + 1));
        report.bound_phase.push_back(noise_variance * inverse(3 * c + 2, 3 * c + 2));
    }
    return report;
}

}  // namespace

double gamma_factor(double omega_t) {
    const double denom = 1.0 - std::cos(omega_t);
    if (std::abs(denom) < kDegenerateTol)
        throw DegenerateFrequency("gamma_factor: omega*T is a multiple of 2*pi");
    return 1.0 / denom;
}

CrbReport crb_closed_form(double a1, double omega_t, double sigma, int count) {
    if (!(a1 > 0.0)) fail("crb_closed_form: amplitude must be positive");
    if (!(sigma > 0.0)) fail("crb_closed_form: sigma must be positive");
    if (count < 4) fail("crb_closed_form: count must be at least 4");
    const double gamma = gamma_factor(omega_t);
    const double n = static_cast<double>(count);
    const double sigma2 = sigma * sigma;
    CrbReport report;
    report.mode = CrbMode::closed_form_asymptotic;
    report.gamma = {gamma};
    report.psnr = a1 * a1 / sigma2;
    report.bound_amplitude = {2.0 * gamma * sigma2 / n};
    report.bound_omega_t = {24.0 * gamma * sigma2 / (a1 * a1 * n * n * n)};
    report.bound_phase = {8.0 * gamma * sigma2 / (a1 * a1 * n)};
    return report;
}

CrbReport crb_conventional_asymptotic(double a1, double sigma, int count) {
    if (!(a1 > 0.0)) fail("crb_conventional_asymptotic: amplitude must be positive");
    if (!(sigma > 0.0)) fail("crb_conventional_asymptotic: sigma must be positive");
    if (count < 4) fail("crb_conventional_asymptotic: count must be at least 4");
    const double n = static_cast<double>(count);
    const double sigma2 = sigma * sigma;
    CrbReport report;
    report.mode = CrbMode::conventional_gaussian;
    report.psnr = a1 * a1 / sigma2;
    report.bound_amplitude = {2.0 * sigma2 / n};
    report.bound_omega_t = {24.0 * sigma2 / (a1 * a1 * n * n * n)};
    report.bound_phase = {8.0 * sigma2 / (a1 * a1 * n)};
    return report;
}

CrbReport crb_conventional(const SoSParams& params, double sigma, double step, int count) {
    params.validate();
    if (!(sigma > 0.0)) fail("crb_conventional: sigma must be positive");
    if (!(step > 0.0)) fail("crb_conventional: step must be positive");
    if (count < 3 * static_cast<int>(params.components.size()))
        fail("crb_conventional: too few samples for the parameter count");
    const Eigen::MatrixXd z = plain_jacobian(params, step, count);
    const Eigen::MatrixXd inverse = detail::guarded_inverse(z.transpose() * z);
    return report_from_inverse(params, inverse, sigma * sigma, step, sigma,
                               CrbMode::conventional_gaussian);
}

std::pair<FimMatrices, CrbReport> crb_fim(const SoSParams& params, const SamplingConfig& config) {
    params.validate();
    config.validate();
    const double sigma = config.noise_sigma;
    if (!(sigma > 0.0)) fail("crb_fim: noise_sigma must be positive");
    if (config.count - 1 < 3 * static_cast<int>(params.components.size()))
        fail("crb_fim: too few samples for the parameter count");

    FimMatrices matrices;
    matrices.jacobian = differenced_jacobian(params, config.step, config.count);
    matrices.gram = matrices.jacobian.transpose() * matrices.jacobian;
    matrices.fim = matrices.gram / (2.0 * sigma * sigma);  // differenced noise x ~ N(0, 2 sigma^2)

    const Eigen::MatrixXd inverse = detail::guarded_inverse(matrices.gram);
    CrbReport report = report_from_inverse(params, inverse, 2.0 * sigma * sigma, config.step,
                                           sigma, CrbMode::fim_finite_n);
    return {std::move(matrices), std::move(report)};
}

AsymptoticGram r_matrix_asymptotic(double a1, double omega_t, double step, int count) {
    if (!(a1 > 0.0)) fail("r_matrix_asymptotic: amplitude must be positive");
    if (!(step > 0.0)) fail("r_matrix_asymptotic: step must be positive");
    const double inv_gamma = 1.0 / gamma_factor(omega_t);
    const double n = static_cast<double>(count);
    const double a2 = a1 * a1;
    AsymptoticGram gram;
    gram.leading.setZero();
    gram.leading(0, 0) = inv_gamma * n;
    gram.leading(1, 1) = inv_gamma * a2 * step * step * n * n * n / 3.0;
    gram.leading(1, 2) = inv_gamma * a2 * step * n * n / 2.0;
    gram.leading(2, 1) = gram.leading(1, 2);
    gram.leading(2, 2) = inv_gamma * a2 * n;
    gram.r12_bound = (2.0 + std::abs(1.0 / std::tan(omega_t))) * a1 * step * n / 2.0;
    return gram;
}

std::pair<double, double> trig_power_sum(int count, double omega, double phi, int order) {
    if (count < 1) fail("trig_power_sum: count must be positive");
    if (order < 0) fail("trig_power_sum: order must be nonnegative");

    const bool degenerate = std::abs(1.0 - std::cos(omega)) < kDegenerateTol;
    if (degenerate || order > 2) {
        double cos_sum = 0.0, sin_sum = 0.0;
        for (int n = 1; n <= count; ++n) {
            const double weight = std::pow(static_cast<double>(n), order);
            cos_sum += weight * std::cos(n * omega + phi);
            sin_sum += weight * std::sin(n * omega + phi);
        }
        return {cos_sum, sin_sum};
    }

    // f(omega) = e^{j(omega+phi)} (1 - e^{jN omega}) / (1 - e^{j omega});
    // sum n^L e^{j(n omega + phi)} = (-j)^L d^L f / d omega^L.
    const Complex j(0.0, 1.0);
    const double big_n = static_cast<double>(count);
    const Complex e = std::exp(j * omega);
    const Complex en1 = std::exp(j * (big_n + 1.0) * omega);
    const Complex u = e - en1;
    const Complex du = j * (e - (big_n + 1.0) * en1);
    const Complex ddu = -e + (big_n + 1.0) * (big_n + 1.0) * en1;
    const Complex v = 1.0 - e;
    const Complex dv = -j * e;
    const Complex ddv = e;
    const Complex phase = std::exp(j * phi);

    Complex sum;
    switch (order) {
        case 0:
            sum = phase * u / v;
            break;
        case 1:
            sum = -j * phase * (du * v - u * dv) / (v * v);
            break;
        default:  // order == 2
            sum = -phase * (ddu / v - (2.0 * du * dv + u * ddv) / (v * v) + 2.0 * u * dv * dv / (v * v * v));
            break;
    }
    return {sum.real(), sum.imag()};
}

NoiseModelReport bernoulli_residue_stats(const ResidueSpec& spec, int count, double lambda,
                                         double sigma) {
    if (count < 1) fail("bernoulli_residue_stats: count must be positive");
    if (spec.fold_count() > count) fail("bernoulli_residue_stats: fold count exceeds sample count");
    NoiseModelReport report;
    report.p = report.q = static_cast<double>(spec.fold_count()) / (2.0 * count);
    if (lambda > 0.0 && sigma > 0.0) report.e2 = pdf_approx_error(report.p, lambda, sigma);
    return report;
}

double pdf_approx_error(double p, double lambda, double sigma) {
    if (!(p >= 0.0 && p <= 0.5)) fail("pdf_approx_error: p must be a probability <= 1/2");
    if (!(lambda > 0.0)) fail("pdf_approx_error: lambda must be positive");
    if (!(sigma > 0.0)) fail("pdf_approx_error: sigma must be positive");
    const double l2s2 = lambda * lambda / (2.0 * sigma * sigma);
    return p * p / (2.0 * kSqrt2Pi * sigma) * (6.0 + 2.0 * std::exp(-4.0 * l2s2) - 8.0 * std::exp(-l2s2));
}

namespace detail {

Eigen::MatrixXd guarded_inverse(const Eigen::MatrixXd& gram) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& values = svd.singularValues();
    const double largest = values(0);
    const double smallest = values(values.size() - 1);
    if (!(smallest > 0.0) || largest / smallest > kMaxCondition)
        throw SingularFim("guarded_inverse: gram matrix condition number exceeds 1e12");
    return svd.matrixV() * values.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

}  // namespace detail

}  // namespace modspec
