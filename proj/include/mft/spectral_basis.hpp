#pragma once

#include <cstddef>
#include <vector>

#include "mft/matrix_core.hpp"
#include "mft/problem.hpp"

namespace mft {

// Evaluates e^{+iqs} and e^{-iqs} for a fixed wavenumber matrix q. Uses the
// eigendecomposition of q when its eigenvector basis is well conditioned and
// falls back to matrix_exp otherwise.
class LayerExponential {
public:
    LayerExponential() = default;
    explicit LayerExponential(const ComplexMatrix& q);

    ComplexMatrix plus(double s) const { return eval(s); }
    ComplexMatrix minus(double s) const { return eval(-s); }

    // q = vectors() diag(values()) vectors_inv() when diagonalized() holds.
    bool diagonalized() const { return diagonal_; }
    const ComplexMatrix& vectors() const { return vectors_; }
    const ComplexMatrix& vectors_inv() const { return vectors_inv_; }
    const ComplexVector& values() const { return values_; }

private:
    ComplexMatrix eval(double s) const;

    ComplexMatrix q_;
    bool diagonal_ = false;
    ComplexMatrix vectors_, vectors_inv_;
    ComplexVector values_;
};

// Coefficients of one layer at one lambda. Inside the layer
//   Phi(x) = e^{iq(x-c)} c_plus + e^{-iq(x-c)} c_minus
//   Psi(x) = e^{iq(x-c)} d_plus + e^{-iq(x-c)} d_minus
// with c = center (the right endpoint of bounded layers, 0 for the last one).
struct LayerCoefficients {
    double center = 0.0;
    ComplexMatrix q, q_inv, a2_inv;
    ComplexMatrix c_plus, c_minus, d_plus, d_minus;
    LayerExponential exp;

    // (phi0, psi0) K^{-1} where K = [[c_plus, d_plus], [c_minus, d_minus]];
    // empty when K (equivalently Omega) is singular.
    ComplexMatrix dual_rows;
    bool omega_invertible = false;
};

struct SpectralBasisAtLambda {
    double lambda = 0.0;
    Eigen::Index r = 0;
    AxisMode mode = AxisMode::SemiAxis;
    std::vector<LayerCoefficients> layers;
    // Boundary functionals at l0 (semi-axis mode only).
    ComplexMatrix phi0, psi0, phi0_inv, psi0_inv;
};

// q = principal_sqrt(A^{-2} (lambda^2 E + Gamma^2)).
ComplexMatrix compute_wavenumber(const LayerMedium& layer, double lambda);

// Backward induction through the interface conditions starting from the
// outgoing/incoming normalization in the last layer.
// Throws RegularityViolation if a conjugation matrix is singular and
// DegenerateBoundary if phi0 or psi0 is singular.
SpectralBasisAtLambda build_basis(const ProblemConfig& config, double lambda);

struct PairValues {
    ComplexMatrix phi, psi;
};

// d-th derivative of (Phi, Psi) evaluated with the coefficients of `layer`
// (no containment check, so one-sided interface limits are available).
PairValues eval_pair_in_layer(const SpectralBasisAtLambda& basis, std::size_t layer, double x, int deriv = 0);
PairValues eval_pair(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x, int deriv = 0);

// Omega(x) = [[Phi, Psi], [Phi', Psi']] in the given layer.
ComplexMatrix omega_in_layer(const SpectralBasisAtLambda& basis, std::size_t layer, double x);

// Primal kernel u(x) = Phi(x) phi0^{-1} - Psi(x) psi0^{-1} (semi-axis mode).
ComplexMatrix eval_u_in_layer(const SpectralBasisAtLambda& basis, std::size_t layer, double x, int deriv = 0);
ComplexMatrix eval_u(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x, int deriv = 0);

// Dual kernel u*(x) = (phi0, psi0) Omega^{-1}(x) (0; E) A^{-2} (semi-axis mode).
ComplexMatrix eval_u_star_in_layer(const SpectralBasisAtLambda& basis, std::size_t layer, double x,
                                   int deriv = 0);
ComplexMatrix eval_u_star(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x,
                          int deriv = 0);

// Scalar full axis. The continuous spectrum is doubly degenerate there, so the
// kernels carry two channels: u is 1 x 2 and u* is 2 x 1, normalized so that a
// homogeneous axis gives u* = (e^{-i lambda x / a}; e^{+i lambda x / a}) and
//   f(x) = (1 / (pi i)) int_0^inf u(x, lambda) f^(lambda) lambda d lambda.
ComplexMatrix eval_axis_u(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x);
ComplexMatrix eval_axis_u_star(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x);

// Relative residuals of the interface relations at l_k (k = 1..n) for
// (Phi, Psi) and for u. Both rows j = 1, 2 are included.
double primal_conjugation_residual(const SpectralBasisAtLambda& basis, const ProblemConfig& config,
                                   std::size_t k);
double kernel_conjugation_residual(const SpectralBasisAtLambda& basis, const ProblemConfig& config,
                                   std::size_t k);
// Relative residual of the dual relations (-w', w) M_1k^{-1} = (-w', w) M_2k^{-1}
// at l_k, where w = u* A^2 is the flux-weighted dual kernel.
double dual_conjugation_residual(const SpectralBasisAtLambda& basis, const ProblemConfig& config,
                                 std::size_t k);

// Numerical rank of the r columns of u(x, lambda) sampled at the given points.
Eigen::Index kernel_rank(const SpectralBasisAtLambda& basis, const ProblemConfig& config,
                         const std::vector<double>& xs, double tol = 1e-10);

}  // namespace mft
