#pragma once

#include <cstddef>
#include <vector>

#include "mft/grid_function.hpp"
#include "mft/problem.hpp"
#include "mft/quadrature.hpp"
#include "mft/spectral_basis.hpp"

namespace mft {

struct QuadratureSpec {
    double lambda_min = 1e-4;
    double lambda_max = 40.0;
    int lambda_steps = 2000;  // lower bound on the number of lambda nodes
    std::vector<double> tau_schedule{1e-2, 5e-3, 2.5e-3};
    double x_max = 12.0;
    int xi_quadrature_order = 8;  // Gauss-Legendre nodes per xi panel
    // Largest accepted relative spread between the damped integrals for the
    // first and last tau before the inverse reports NonConvergentTail.
    double tail_tolerance = 0.25;

    void validate() const;
};

// Composite Gauss-Legendre rule on [lambda_min, lambda_max], six nodes per
// panel. The panel width never exceeds pi / (4 x_max max||A^{-1}||) so the
// fastest kernel oscillation inside the truncated domain is resolved.
QuadratureRule lambda_rule(const ProblemConfig& config, const QuadratureSpec& spec);

// Per-layer xi rules for the direct transform. The unbounded layers are cut
// at +-x_max; panel width is at most min(pi / k_max, 0.25) with k_max the
// largest wavenumber norm at lambda_max.
std::vector<QuadratureRule> xi_rules(const ProblemConfig& config, const QuadratureSpec& spec);

// Boundary term gamma0 f(l0) + delta0 f'(l0) plus the interface sum
// Y_k (N_k2 F_{k+1} - N_k1 F_k), with Y_k = (phi0, psi0) Omega_k^{-1}(l_k) M_k1^{-1},
// N_ks = [[gamma_1s, delta_1s], [gamma_2s, delta_2s]] and F = (f; f').
// Exactly zero when every gamma and delta block vanishes.
ComplexVector correction_terms(const ProblemConfig& config, const SpectralBasisAtLambda& basis,
                               const PiecewiseGridFunction& f);

// Semi-axis direct transform. Grid points where the boundary functionals are
// singular are flagged invalid; a singular conjugation matrix throws
// RegularityViolation.
SpectralImage forward_transform(const ProblemConfig& config, const PiecewiseGridFunction& f,
                                const QuadratureSpec& spec);

struct InverseResult {
    PiecewiseGridFunction function;
    double extrapolation_error = 0.0;  // max |tau-extrapolant - lower-order extrapolant|
    double tau_spread = 0.0;           // max |I(tau_first) - I(tau_last)|
};

// f(x) = -(1 / (pi i)) int lambda u(x, lambda) f~(lambda) e^{-tau lambda} d lambda,
// extrapolated to tau = 0 over the schedule.
InverseResult inverse_transform(const ProblemConfig& config, const SpectralImage& image,
                                const std::vector<double>& x_points, const QuadratureSpec& spec);
// Same, with the evaluation points already assigned to layers (so interface
// points may be evaluated as left limits).
InverseResult inverse_transform_layers(const ProblemConfig& config, const SpectralImage& image,
                                       const std::vector<std::vector<double>>& layer_points,
                                       const QuadratureSpec& spec);

// Scalar full axis: two-channel image sum_m int u*_m f_m over m = 1..n+1, and
// f(x) = (1 / (pi i)) int lambda u(x, lambda) f^(lambda) d lambda.
SpectralImage scalar_axis_forward(const ProblemConfig& config, const PiecewiseGridFunction& f,
                                  const QuadratureSpec& spec);
InverseResult scalar_axis_inverse(const ProblemConfig& config, const SpectralImage& image,
                                  const std::vector<double>& x_points, const QuadratureSpec& spec);
InverseResult scalar_axis_inverse_layers(const ProblemConfig& config, const SpectralImage& image,
                                         const std::vector<std::vector<double>>& layer_points,
                                         const QuadratureSpec& spec);

struct RoundtripReport {
    std::vector<double> layer_l2;   // trapezoid L2 norm of the error per layer
    std::vector<double> layer_max;
    double l2 = 0.0;
    double max = 0.0;
    double extrapolation_error = 0.0;
    std::size_t skipped_lambda = 0;
    PiecewiseGridFunction reconstructed;
};

// Forward then inverse on f's own abscissae (semi-axis or scalar full axis).
RoundtripReport roundtrip_report(const ProblemConfig& config, const PiecewiseGridFunction& f,
                                 const QuadratureSpec& spec);

// Trapezoid L2 norm and max norm of a - b per layer (same abscissae).
void compare_functions(const PiecewiseGridFunction& a, const PiecewiseGridFunction& b,
                       std::vector<double>& layer_l2, std::vector<double>& layer_max);

}  // namespace mft
