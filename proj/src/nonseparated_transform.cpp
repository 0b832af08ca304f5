#include "mft/nonseparated_transform.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mft/errors.hpp"
#include "mft/quadrature.hpp"

namespace mft {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesLimit = 12.0;

void require_dimension(int n) {
    if (n < 2) {
        std::ostringstream os;
        os << "dimension " << n << " is not supported (need n >= 2)";
        throw Error(ErrorCode::UnsupportedDimension, os.str());
    }
}

bool half_integer(double nu) {
    const double twice = 2.0 * nu;
    return std::abs(twice - std::round(twice)) < 1e-14 && static_cast<long>(std::round(twice)) % 2 != 0;
}

// sum_k (-1)^k (z/2)^{2k} / (k! Gamma(k + nu + 1))
double series_over_power(double nu, double z) {
    const double q = 0.25 * z * z;
    double term = 1.0 / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (k * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::pow(2.0, nu);
}

// Spherical Bessel j_l by upward recurrence (stable for z > l) or the series
// otherwise; J_{l+1/2}(z) = sqrt(2z/pi) j_l(z).
double half_integer_j(double nu, double z) {
    const int l = static_cast<int>(std::round(nu - 0.5));
    if (z == 0.0) return 0.0;
    if (z < l + 1.0) return series_over_power(nu, z) * std::pow(z, nu);
    double j0 = std::sin(z) / z;
    if (l == 0) return std::sqrt(2.0 * z / kPi) * j0;
    double j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    for (int k = 1; k < l; ++k) {
        const double j2 = (2.0 * k + 1.0) / z * j1 - j0;
        j0 = j1;
        j1 = j2;
    }
    return std::sqrt(2.0 * z / kPi) * j1;
}

// Hankel asymptotic expansion, truncated at the smallest term.
double asymptotic_j(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0, term = 1.0, last = 1e300;
    for (int k = 1; k < 60; ++k) {
        term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * z);
        if (std::abs(term) >= last) break;
        last = std::abs(term);
        if (k % 2 == 1)
            q += (k % 4 == 1 ? 1.0 : -1.0) * term;
        else
            p += (k % 4 == 2 ? -1.0 : 1.0) * term;
    }
    const double chi = z - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

double sphere_area(int k) {
    // area of the unit sphere S^k in R^{k+1}
    return 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

}  // namespace

double bessel_j(double nu, double z) {
    if (nu < 0.0 || z < 0.0 || !std::isfinite(z)) throw Error(ErrorCode::OutOfDomain, "bessel_j needs nu >= 0, z >= 0");
    if (half_integer(nu)) return half_integer_j(nu, z);
    if (z <= kSeriesLimit) return series_over_power(nu, z) * std::pow(z, nu);
    return asymptotic_j(nu, z);
}

double bessel_j_over_power(double nu, double z) {
    if (z <= 1e-3 || (z <= kSeriesLimit && !half_integer(nu))) return series_over_power(nu, z);
    return bessel_j(nu, z) / std::pow(z, nu);
}

double forward_nd(const RadialProfile& f, double lambda, int panels, int order) {
    require_dimension(f.dimension);
    if (!(lambda > 0.0)) throw Error(ErrorCode::OutOfDomain, "lambda must be positive");
    const int n = f.dimension;
    const double nu = 0.5 * (n - 2);
    const QuadratureRule rule = composite_gauss_legendre(0.0, f.radius, panels, order);
    std::vector<double> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double rho = rule.nodes[i];
        // J_nu(l rho) rho^{-nu} = l^nu (J_nu(l rho) / (l rho)^nu)
        const double kernel = std::pow(lambda, nu) * bessel_j_over_power(nu, lambda * rho);
        terms[i] = rule.weights[i] * kernel * f.profile(rho) * std::pow(rho, n - 1);
    }
    return sphere_area(n - 1) * pairwise_sum(std::span<const double>(terms)) / std::pow(2.0 * kPi, 0.5 * n);
}

SpectralImage forward_nd_image(const RadialProfile& f, const QuadratureSpec& spec) {
    require_dimension(f.dimension);
    ProblemConfig unit;
    unit.r = 1;
    unit.layers = {LayerMedium{0.0, std::numeric_limits<double>::infinity(), identity(1), ComplexMatrix::Zero(1, 1)}};
    unit.boundary = dirichlet_boundary(1);
    const QuadratureRule rule = lambda_rule(unit, spec);
    // panel count keeps about eight nodes per radial oscillation at lambda_max
    const int panels = std::max(50, static_cast<int>(std::ceil(f.radius * spec.lambda_max / kPi)));
    SpectralImage image;
    image.lambda = rule.nodes;
    image.weights = rule.weights;
    image.valid.assign(rule.size(), true);
    image.values.assign(rule.size(), ComplexVector::Zero(1));
    for (std::size_t i = 0; i < rule.size(); ++i) image.values[i](0) = forward_nd(f, rule.nodes[i], panels);
    return image;
}

NdInverseResult inverse_nd(const SpectralImage& image, int dimension, const QuadratureSpec& spec) {
    require_dimension(dimension);
    spec.validate();
    if (image.size() == 0) throw Error(ErrorCode::EmptyImage, "the spectral image has no grid points");
    std::vector<double> w = image.weights;
    if (w.size() != image.size()) {
        w.assign(image.size(), 0.0);
        for (std::size_t i = 0; i + 1 < image.size(); ++i) {
            const double h = image.lambda[i + 1] - image.lambda[i];
            w[i] += 0.5 * h;
            w[i + 1] += 0.5 * h;
        }
    }
    NdInverseResult out;
    std::vector<double> terms(image.size());
    for (double tau : spec.tau_schedule) {
        for (std::size_t i = 0; i < image.size(); ++i) {
            const double l = image.lambda[i];
            const bool ok = image.valid.empty() || image.valid[i];
            terms[i] = ok ? w[i] * std::pow(l, 0.5 * dimension) * std::exp(-tau * l) * image.values[i](0).real() : 0.0;
        }
        out.damped.push_back(pairwise_sum(std::span<const double>(terms)));
    }
    const auto& taus = spec.tau_schedule;
    out.value = extrapolate_to_zero<double>(taus, out.damped);
    const std::size_t k = taus.size();
    const double lower = extrapolate_to_zero<double>(std::span<const double>(taus).subspan(k - 2),
                                                     std::span<const double>(out.damped).subspan(k - 2));
    out.extrapolation_error = std::abs(out.value - lower);
    const double spread = std::abs(out.damped.front() - out.damped.back());
    if (spread > spec.tail_tolerance * std::max(std::abs(out.damped.back()), 1e-300) && std::abs(out.damped.back()) > 0.0) {
        std::ostringstream os;
        os << "damped integrals change by " << spread << " across the tau schedule";
        throw Error(ErrorCode::NonConvergentTail, os.str());
    }
    return out;
}

double poisson_halfspace(const RadialProfile& f, double x, double y_radius) {
    require_dimension(f.dimension);
    if (!(x > 0.0)) throw Error(ErrorCode::NonpositiveHeight, "the height x must be positive");
    const int n = f.dimension;
    const double cn = std::tgamma(0.5 * (n + 1)) * std::pow(kPi, -0.5 * (n + 1));
    const double y = std::abs(y_radius);

    // polar coordinates around y, radius t = e^u; the kernel peaks at t ~ x
    const double lo = std::log(x) - 40.0 / n;
    const double hi = std::max(std::log(x), std::log(y + f.radius)) + 40.0;
    const QuadratureRule radial = composite_gauss_legendre(lo, hi, 800, 8);
    const QuadratureRule angular = composite_gauss_legendre(0.0, kPi, 32, 8);
    std::vector<double> outer(radial.size());
    std::vector<double> inner(angular.size());
    for (std::size_t i = 0; i < radial.size(); ++i) {
        const double t = std::exp(radial.nodes[i]);
        const double weight = x * std::pow(t, n) / std::pow(x * x + t * t, 0.5 * (n + 1));
        for (std::size_t j = 0; j < angular.size(); ++j) {
            const double th = angular.nodes[j];
            const double rho = std::sqrt(std::max(0.0, y * y + t * t + 2.0 * y * t * std::cos(th)));
            inner[j] = angular.weights[j] * std::pow(std::sin(th), n - 2) * f.profile(rho);
        }
        outer[i] = radial.weights[i] * weight * pairwise_sum(std::span<const double>(inner));
    }
    return cn * sphere_area(n - 2) * pairwise_sum(std::span<const double>(outer));
}

}  // namespace mft
