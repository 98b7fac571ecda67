#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modspec/signal.hpp"

namespace modspec {

class DegenerateFrequency : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SingularFim : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CrbMode {
    closed_form_asymptotic,
    fim_finite_n,
    conventional_gaussian,
};

/// Per-parameter CRBs. Entry k of each vector refers to component k; the
/// frequency bound is expressed for the discrete frequency omega_k*T.
struct CrbReport {
    CrbMode mode = CrbMode::fim_finite_n;
    std::vector<double> gamma;  // (1 - cos(omega_k T))^-1
    double psnr = 0.0;          // a_1^2 / sigma^2
    std::vector<double> bound_amplitude;
    std::vector<double> bound_omega_t;
    std::vector<double> bound_phase;
};

/// Bernoulli residue statistics and the Gaussian-approximation L2 error.
struct NoiseModelReport {
    double p = 0.0;
    double q = 0.0;
    double e2 = 0.0;
};

/// Jacobian of the differenced model and the resulting information matrix.
/// Parameter order: (a_1, omega_1, phi_1, a_2, ...). The omega column carries
/// the nT factors, so gram entries follow the T-dependent asymptotics.
struct FimMatrices {
    Eigen::MatrixXd jacobian;  // Z, (N-1) x 3K
    Eigen::MatrixXd gram;      // R = Z^T Z
    Eigen::MatrixXd fim;       // R / (2 sigma^2)
};

/// Leading-order entries of the single-sinusoid gram matrix. The (1,2) entry
/// has no closed leading term, only a magnitude bound; it is reported
/// separately and the matrix carries 0 there.
struct AsymptoticGram {
    Eigen::Matrix3d leading;
    double r12_bound = 0.0;  // (2 + |cot(omega T)|) * a * T * N / 2
};

/// gamma = 1 / (1 - cos(omega_t)); throws DegenerateFrequency near
/// omega_t = 0 mod 2pi.
double gamma_factor(double omega_t);

/// Asymptotic single-sinusoid CRBs for folded-then-differenced samples:
/// gamma times the conventional bounds.
CrbReport crb_closed_form(double a1, double omega_t, double sigma, int count);

/// Conventional asymptotic single-sinusoid CRBs for unfolded samples
/// (2 sigma^2/N * {a1^2, 12/(a1^2 N^2), 4/a1^2} in psnr form).
CrbReport crb_conventional_asymptotic(double a1, double sigma, int count);

/// Finite-N Gaussian CRB for unfolded samples y[n] = g(nT) + w[n]; Jacobian
/// of g itself, noise variance sigma^2.
CrbReport crb_conventional(const SoSParams& params, double sigma, double step, int count);

/// Finite-N CRB from the differenced folded model: Z from the derivative of
/// Delta g, noise variance 2 sigma^2, CRB = diag(FIM^-1).
std::pair<FimMatrices, CrbReport> crb_fim(const SoSParams& params, const SamplingConfig& config);

AsymptoticGram r_matrix_asymptotic(double a1, double omega_t, double step, int count);

/// (sum_{n=1..N} n^L cos(n*omega+phi), sum n^L sin(n*omega+phi)).
/// Closed form via derivatives of the geometric kernel for L <= 2, direct
/// summation otherwise and in the degenerate branch omega = 0 mod 2pi.
std::pair<double, double> trig_power_sum(int count, double omega, double phi, int order);

/// p = q = M/(2N); e2 evaluated at the trace's (lambda, sigma) when sigma > 0,
/// else 0.
NoiseModelReport bernoulli_residue_stats(const ResidueSpec& spec, int count,
                                         double lambda = 0.0, double sigma = 0.0);

/// L2 distance between the Gaussian-Bernoulli mixture density and the pure
/// Gaussian: p^2/(2 sqrt(2 pi) sigma) * (6 + 2 exp(-4 lambda^2 / (2 sigma^2))
/// - 8 exp(-lambda^2 / (2 sigma^2))).
double pdf_approx_error(double p, double lambda, double sigma);

namespace detail {
/// Inverts a symmetric PSD gram matrix with a condition guard at 1e12.
Eigen::MatrixXd guarded_inverse(const Eigen::MatrixXd& gram);
}  // namespace detail

}  // namespace modspec
