#include "mft/finite_difference.hpp"

#include <algorithm>

namespace mft {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int max_order) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
    if (n == 0) return c;
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = std::min<int>(static_cast<int>(i), max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

std::size_t stencil_start(std::size_t i, std::size_t n, std::size_t width) {
    if (n <= width) return 0;
    const std::size_t half = width / 2;
    const std::size_t lo = i > half ? i - half : 0;
    return std::min(lo, n - width);
}

}  // namespace mft
