#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mft {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(int n);

// Composite Gauss-Legendre: `panels` equal panels on [a, b], `order` nodes each.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order);

// Fixed-order pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

// Polynomial (Neville) extrapolation of samples (h_i, v_i) to h = 0.
template <class T>
T extrapolate_to_zero(std::span<const double> h, std::span<const T> v) {
    std::vector<T> p(v.begin(), v.end());
    const std::size_t n = p.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            p[i] = (h[i] * p[i + 1] - h[i + m] * p[i]) / (h[i] - h[i + m]);
    return p.front();
}

}  // namespace mft
