#include "modspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modspec/bounds.hpp"
#include "modspec/rng.hpp"
#include "modspec/signal.hpp"

namespace modspec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double gaussian_pdf(double v, double variance) {
    return std::exp(-v * v / (2.0 * variance)) / std::sqrt(2.0 * kPi * variance);
}

/// Composite Simpson quadrature of the squared density mismatch.
double e2_quadrature(double p, double lambda, double sigma) {
    const double variance = 2.0 * sigma * sigma;  // differenced noise
    const double half_width = 2.0 * lambda + 12.0 * std::sqrt(variance);
    const int intervals = 1 << 20;  // even
    const double h = 2.0 * half_width / intervals;
    auto integrand = [&](double v) {
        const double mixture = p * gaussian_pdf(v + 2.0 * lambda, variance) +
                               (1.0 - 2.0 * p) * gaussian_pdf(v, variance) +
                               p * gaussian_pdf(v - 2.0 * lambda, variance);
        const double diff = mixture - gaussian_pdf(v, variance);
        return diff * diff;
    };
    double sum = integrand(-half_width) + integrand(half_width);
    for (int i = 1; i < intervals; ++i)
        sum += integrand(-half_width + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

OracleCheck trig_sum_check() {
    OracleCheck check{"trig_power_sum vs brute force", 0.0, 1e-9, false};
    SplitMix64 gen(0x7457u);
    for (int draw = 0; draw < 200; ++draw) {
        const int count = 1 + static_cast<int>(gen.next_u64() % 500);
        const double omega = 0.1 + gen.next_unit() * (kPi - 0.2);
        const double phi = -kPi + gen.next_unit() * 2.0 * kPi;
        const int order = static_cast<int>(gen.next_u64() % 3);
        double cos_ref = 0.0, sin_ref = 0.0;
        for (int n = 1; n <= count; ++n) {
            const double weight = std::pow(static_cast<double>(n), order);
            cos_ref += weight * std::cos(n * omega + phi);
            sin_ref += weight * std::sin(n * omega + phi);
        }
        const auto [cos_sum, sin_sum] = trig_power_sum(count, omega, phi, order);
        const double scale = std::max({1.0, std::abs(cos_ref), std::abs(sin_ref)});
        check.margin = std::max(check.margin,
                                std::max(std::abs(cos_sum - cos_ref), std::abs(sin_sum - sin_ref)) / scale);
    }
    check.passed = check.margin < check.tolerance;
    return check;
}

OracleCheck e2_check() {
    OracleCheck check{"pdf_approx_error vs quadrature", 0.0, 1e-8, false};
    const double cases[][3] = {{0.03, 1.0, 0.1}, {0.01, 2.0, 0.5}, {0.1, 1.0, 1.0}};
    for (const auto& c : cases) {
        const double formula = pdf_approx_error(c[0], c[1], c[2]);
        const double reference = e2_quadrature(c[0], c[1], c[2]);
        check.margin = std::max(check.margin, std::abs(formula - reference));
    }
    check.passed = check.margin < check.tolerance;
    return check;
}

OracleCheck jacobian_check() {
    OracleCheck check{"differenced Jacobian vs finite differences", 0.0, 1e-6, false};
    SoSParams params{{{1.0, 0.63, 0.3}, {0.7, 1.0, -0.5}}};
    SamplingConfig config;
    config.count = 50;
    config.noise_sigma = 0.1;
    const auto [matrices, report] = crb_fim(params, config);

    const double h = 1e-6;
    auto diff_model = [&](const SoSParams& p) {
        return finite_difference(synthesize(p, config), 1);
    };
    for (std::size_t c = 0; c < params.components.size(); ++c) {
        for (int field = 0; field < 3; ++field) {
            SoSParams plus = params, minus = params;
            auto& comp_plus = plus.components[c];
            auto& comp_minus = minus.components[c];
            if (field == 0) {
                comp_plus.amplitude += h;
                comp_minus.amplitude -= h;
            } else if (field == 1) {
                comp_plus.omega += h;
                comp_minus.omega -= h;
            } else {
                comp_plus.phase += h;
                comp_minus.phase -= h;
            }
            const auto forward = diff_model(plus);
            const auto backward = diff_model(minus);
            for (std::size_t i = 0; i < forward.size(); ++i) {
                const double numeric = (forward[i] - backward[i]) / (2.0 * h);
                const double analytic =
                    matrices.jacobian(static_cast<int>(i), static_cast<int>(3 * c) + field);
                check.margin = std::max(check.margin, std::abs(numeric - analytic));
            }
        }
    }
    check.passed = check.margin < check.tolerance;
    return check;
}

OracleCheck gram_convergence_check() {
    OracleCheck check{"leading-order gram convergence", 0.0, 1e-2, false};
    const double a1 = 1.0, omega_t = 1.05, sigma = 0.1;
    const double inv_gamma = 1.0 / gamma_factor(omega_t);
    double first = std::numeric_limits<double>::infinity();
    double previous = first;
    bool shrinking = true;
    bool have_first = false;
    for (int count : {100, 1000, 10000}) {
        SamplingConfig config;
        config.count = count;
        config.noise_sigma = sigma;
        SoSParams params{{{a1, omega_t, 0.0}}};
        const auto [matrices, report] = crb_fim(params, config);
        const double n = static_cast<double>(count);
        const double d11 = std::abs(matrices.gram(0, 0) / n - inv_gamma) / inv_gamma;
        const double d22 = std::abs(matrices.gram(1, 1) / (n * n * n) - inv_gamma / 3.0) /
                           (inv_gamma / 3.0);
        const double ddet = std::abs(matrices.gram.determinant() / (n * n * n * n * n) -
                                     inv_gamma * inv_gamma * inv_gamma / 12.0) /
                            (inv_gamma * inv_gamma * inv_gamma / 12.0);
        const double worst = std::max({d11, d22, ddet});
        if (!have_first) {
            first = worst;
            have_first = true;
        }
        previous = worst;
    }
    if (previous >= first) shrinking = false;
    check.margin = previous;
    check.passed = shrinking && check.margin < check.tolerance;
    return check;
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(bool inject_fault) {
    std::vector<OracleCheck> checks;
    checks.push_back(trig_sum_check());
    checks.push_back(e2_check());
    checks.push_back(jacobian_check());
    checks.push_back(gram_convergence_check());
    if (inject_fault && !checks.empty()) {
        checks.front().margin = checks.front().tolerance * 10.0;
        checks.front().passed = false;
        checks.front().name += " (fault injected)";
    }
    return checks;
}

}  // namespace modspec
