#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "modspec/signal.hpp"

namespace modspec {

class OrderTooLarge : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EstimatedComponent {
    double omega_t = 0.0;    // rad, in (0, pi)
    double amplitude = 0.0;  // backed out of the differenced model
    double phase = 0.0;      // rad, in [-pi, pi)
    double amplitude_diff = 0.0;  // as fitted in the differenced domain
    double phase_diff = 0.0;
};

/// Matrix-pencil estimate; components sorted by ascending frequency.
/// rank_deficient marks a partial result (fewer than K usable pole pairs).
struct EstimateResult {
    std::vector<EstimatedComponent> components;
    int model_order = 0;
    std::vector<double> singular_values;
    std::vector<std::complex<double>> poles;  // all pencil eigenvalues, diagnostics
    bool rank_deficient = false;
};

/// Eigenvalue hygiene thresholds for pole selection.
struct PencilOptions {
    double min_magnitude = 0.5;  // poles with |z| outside [min, max] are noise
    double max_magnitude = 2.0;
    // Extra signal-subspace dimensions beyond 2K; the surplus poles absorb
    // residue spikes and heavy noise, and lose the energy ranking.
    int subspace_extra = 4;
    // Gauss-Newton polish steps on the pencil frequencies (0 = raw pencil).
    int refine_iterations = 3;
};

/// Matrix-pencil estimation from first-differenced folded samples.
/// Pencil parameter defaults to floor((N-1)/3); valid range is
/// 2K <= P <= N-1-2K (OrderTooLarge otherwise).
EstimateResult estimate(const FoldedTrace& trace, int model_order,
                        std::optional<int> pencil_param = std::nullopt,
                        const PencilOptions& options = {});

/// Maps differenced-domain amplitude/phase back to the original sinusoid:
/// a = a_diff / (2 sin(omega_t/2)), phi = wrap(phi_diff - omega_t/2 - pi/2).
std::pair<double, double> back_out_difference_model(double amplitude_diff, double phase_diff,
                                                    double omega_t);

/// Wraps an angle into [-pi, pi).
double wrap_angle(double angle);

}  // namespace modspec
