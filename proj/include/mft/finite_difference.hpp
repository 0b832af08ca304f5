#pragma once

#include <span>
#include <vector>

namespace mft {

// Fornberg weights: w[k][i] approximates the k-th derivative at x0 as
// sum_i w[k][i] f(x[i]), for k = 0..max_order.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int max_order);

// First index of a `width`-point stencil around sample i that stays inside [0, n).
std::size_t stencil_start(std::size_t i, std::size_t n, std::size_t width);

}  // namespace mft
