#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "mft/errors.hpp"
#include "mft/nonseparated_transform.hpp"

using namespace mft;

namespace {

RadialProfile gaussian(int n, double sigma = 1.0) {
    return RadialProfile{n, [sigma](double r) { return std::exp(-r * r / (2.0 * sigma * sigma)); }, 12.0 * sigma};
}

// Unit-width Gaussian image: 2^{1 - n/2} / Gamma(n/2) lambda^nu e^{-lambda^2/2}.
double gaussian_image(int n, double lambda) {
    const double nu = 0.5 * (n - 2);
    return std::pow(2.0, 1.0 - 0.5 * n) / std::tgamma(0.5 * n) * std::pow(lambda, nu) * std::exp(-0.5 * lambda * lambda);
}

}  // namespace

TEST(Bessel, MatchesStandardLibrary) {
    double worst = 0.0;
    for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.5})
        for (double z = 0.0; z < 60.0; z += 0.0917) worst = std::max(worst, std::abs(bessel_j(nu, z) - std::cyl_bessel_j(nu, z)));
    EXPECT_LT(worst, 1e-10);
}

TEST(Bessel, OverPowerLimit) {
    for (double nu : {0.0, 0.5, 1.0, 2.5}) {
        const double at_zero = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
        EXPECT_NEAR(bessel_j_over_power(nu, 0.0), at_zero, 1e-15);
        EXPECT_NEAR(bessel_j_over_power(nu, 1e-6), at_zero, 1e-12);
        EXPECT_NEAR(bessel_j_over_power(nu, 2.3), std::cyl_bessel_j(nu, 2.3) / std::pow(2.3, nu), 1e-12);
    }
}

TEST(ForwardNd, GaussianClosedForm) {
    for (int n : {2, 3, 4, 5}) {
        const auto g = gaussian(n);
        for (double lambda : {0.1, 0.5, 1.0, 3.0, 6.0})
            EXPECT_NEAR(forward_nd(g, lambda), gaussian_image(n, lambda), 1e-10) << "n " << n << " lambda " << lambda;
    }
}

TEST(ForwardNd, MatchesAdaptiveRadialIntegral) {
    // f = (1 + r^2)^{-3}, radial integral with the area of the unit sphere
    const int n = 3;
    const RadialProfile f{n, [](double r) { return std::pow(1.0 + r * r, -3.0); }, 60.0};
    const double nu = 0.5;
    const double area = 2.0 * std::pow(M_PI, 1.5) / std::tgamma(1.5);
    for (double lambda : {0.4, 2.0}) {
        auto integrand = [&](double r) {
            return r > 0.0 ? std::cyl_bessel_j(nu, lambda * r) * std::pow(r, n - 1 - nu) * f.profile(r) : 0.0;
        };
        const double radial =
            boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 60.0, 15, 1e-13);
        EXPECT_NEAR(forward_nd(f, lambda), std::pow(2.0 * M_PI, -1.5) * area * radial, 1e-9);
    }
}

TEST(InverseNd, GaussianRoundtripAtOrigin) {
    QuadratureSpec spec;
    for (int n : {2, 3}) {
        const auto img = forward_nd_image(gaussian(n), spec);
        const auto inv = inverse_nd(img, n, spec);
        EXPECT_NEAR(inv.value, 1.0, 1e-3) << "n " << n;
        EXPECT_EQ(inv.damped.size(), spec.tau_schedule.size());
    }
}

TEST(InverseNd, ScaledGaussian) {
    // f(0) = 3 for 3 e^{-r^2 / 2 sigma^2}
    QuadratureSpec spec;
    RadialProfile g = gaussian(3, 0.7);
    const auto base = g.profile;
    g.profile = [base](double r) { return 3.0 * base(r); };
    const auto inv = inverse_nd(forward_nd_image(g, spec), 3, spec);
    EXPECT_NEAR(inv.value, 3.0, 3e-3);
}

TEST(Poisson, KernelMassIsOne) {
    for (int n : {2, 3}) {
        const RadialProfile one{n, [](double) { return 1.0; }, 12.0};
        for (double x : {1e-3, 0.1, 1.0, 10.0})
            for (double y : {0.0, 0.3, 2.0}) EXPECT_NEAR(poisson_halfspace(one, x, y), 1.0, 1e-8) << n << " " << x << " " << y;
    }
}

TEST(Poisson, BoundaryLimit) {
    for (int n : {2, 3}) {
        const auto g = gaussian(n, 2.0);
        for (double y : {0.0, 0.5, 1.5, 3.0}) {
            const double exact = std::exp(-y * y / 8.0);
            EXPECT_NEAR(poisson_halfspace(g, 1e-3, y), exact, 1e-3) << "n " << n << " y " << y;
        }
    }
}

TEST(Poisson, BoundaryApproachIsFirstOrder) {
    // u(x, 0) - f(0) ~ -c x: shrinking x tenfold shrinks the gap tenfold
    const auto g = gaussian(3);
    const double e3 = std::abs(poisson_halfspace(g, 1e-3, 0.0) - 1.0);
    const double e4 = std::abs(poisson_halfspace(g, 1e-4, 0.0) - 1.0);
    EXPECT_NEAR(e3 / e4, 10.0, 0.5);
}

TEST(Poisson, DecaysWithHeight) {
    const auto g = gaussian(2);
    double prev = poisson_halfspace(g, 0.01, 0.0);
    for (double x : {0.1, 1.0, 5.0, 20.0}) {
        const double v = poisson_halfspace(g, x, 0.0);
        EXPECT_LT(v, prev);
        EXPECT_GT(v, 0.0);
        prev = v;
    }
}

TEST(Poisson, Errors) {
    const auto g = gaussian(3);
    try {
        poisson_halfspace(g, 0.0, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonpositiveHeight);
    }
    try {
        poisson_halfspace(gaussian(1), 1.0, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedDimension);
    }
}

TEST(Poisson, MaximumPrinciple) {
    // data with both signs: min f = -0.5 at the origin region, max f = 1 near r = 2
    for (int n : {2, 3}) {
        const RadialProfile f{n, [](double r) { return std::exp(-(r - 2.0) * (r - 2.0)) - 0.5 * std::exp(-r * r); },
                              12.0};
        double lo = 0.0, hi = 0.0;
        for (double r = 0.0; r < 12.0; r += 0.001) {
            lo = std::min(lo, f.profile(r));
            hi = std::max(hi, f.profile(r));
        }
        for (double x : {1e-3, 0.05, 0.5, 3.0})
            for (double y : {0.0, 1.0, 2.0, 6.0}) {
                const double u = poisson_halfspace(f, x, y);
                EXPECT_GE(u, lo - 1e-9);
                EXPECT_LE(u, hi + 1e-9);
            }
    }
}
