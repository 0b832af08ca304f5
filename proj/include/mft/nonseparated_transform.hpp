#pragma once

#include <functional>
#include <vector>

#include "mft/transform_engine.hpp"

namespace mft {

// Bessel function of the first kind J_nu(z), nu >= 0, z >= 0. Power series
// for z <= 12, Hankel asymptotic expansion above; half-integer orders use the
// spherical closed forms.
double bessel_j(double nu, double z);

// J_nu(z) / z^nu, continuous at z = 0 where it equals 1 / (2^nu Gamma(nu + 1)).
double bessel_j_over_power(double nu, double z);

// Radially symmetric function on R^n.
struct RadialProfile {
    int dimension = 3;
    std::function<double(double)> profile;
    // Support radius or decay scale beyond which the profile is negligible;
    // sets the truncation of radial integrals.
    double radius = 12.0;
};

// F[f](0, lambda) = (2 pi)^{-n/2} int_{R^n} J_nu(lambda |eta|) |eta|^{-nu} f(eta) d eta,
// nu = (n - 2) / 2, reduced to a radial integral.
double forward_nd(const RadialProfile& f, double lambda, int panels = 400, int order = 8);

// The image on the lambda rule of `spec` (same rule as the matrix transform
// of a homogeneous unit medium).
SpectralImage forward_nd_image(const RadialProfile& f, const QuadratureSpec& spec);

struct NdInverseResult {
    double value = 0.0;
    double extrapolation_error = 0.0;
    std::vector<double> damped;  // one integral per tau
};

// lim_{tau -> 0} int_0^inf lambda^{n/2} e^{-lambda tau} f^(lambda) d lambda on the
// image grid, extrapolated over spec.tau_schedule.
NdInverseResult inverse_nd(const SpectralImage& image, int dimension, const QuadratureSpec& spec);

// Half-space Dirichlet problem on R^n x (0, inf):
//   u(x, y) = Gamma((n+1)/2) pi^{-(n+1)/2} int x [(y - eta)^2 + x^2]^{-(n+1)/2} f(eta) d eta
// for radial boundary data, evaluated at height x and distance |y| = y_radius.
double poisson_halfspace(const RadialProfile& f, double x, double y_radius);

}  // namespace mft
