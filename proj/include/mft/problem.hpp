#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mft/matrix_core.hpp"

namespace mft {

enum class AxisMode { SemiAxis, FullAxis };

// One homogeneous layer: A^2 y'' + (lambda^2 E + Gamma^2) y = 0 on (left, right).
struct LayerMedium {
    double left = 0.0;
    double right = 0.0;  // +inf for the last layer
    ComplexMatrix a2;    // A_m^2, Hermitian positive-definite
    ComplexMatrix g2;    // Gamma_m^2, Hermitian positive-semidefinite

    bool bounded() const;
};

// Coupling at one interior point l_k. Blocks are indexed [row j][side s],
// j, s in {0, 1}; side 0 acts on layer k, side 1 on layer k+1:
//   ((alpha_js + l^2 delta_js) d/dx + (beta_js + l^2 gamma_js)) y_k
//     = ((alpha_js' ...)) y_{k+1}
struct InterfaceCondition {
    using Blocks = std::array<std::array<ComplexMatrix, 2>, 2>;
    Blocks alpha, beta, gamma, delta;

    // M_{side,k}(lambda) = [[beta_1s + l^2 gamma_1s, alpha_1s + l^2 delta_1s],
    //                       [beta_2s + l^2 gamma_2s, alpha_2s + l^2 delta_2s]]
    ComplexMatrix conjugation_matrix(int side, double lambda) const;
    // Lambda-free part of conjugation_matrix (the gamma/delta terms dropped).
    ComplexMatrix static_matrix(int side) const;
    // [[gamma_1s, delta_1s], [gamma_2s, delta_2s]]
    ComplexMatrix spectral_matrix(int side) const;

    bool ideal_contact_like() const;  // all gamma and delta blocks zero
};

// ((alpha0 + l^2 delta0) d/dx + (beta0 + l^2 gamma0)) y_1 = 0 at x = l_0.
struct BoundaryCondition {
    ComplexMatrix alpha0, beta0, gamma0, delta0;

    // r x 2r row operator [beta0 + l^2 gamma0, alpha0 + l^2 delta0] acting on (y; y').
    ComplexMatrix operator_row(double lambda) const;
};

struct ProblemConfig {
    Eigen::Index r = 1;
    AxisMode mode = AxisMode::SemiAxis;
    std::vector<LayerMedium> layers;
    std::vector<InterfaceCondition> interfaces;
    BoundaryCondition boundary;

    std::size_t interface_count() const { return interfaces.size(); }
    double l0() const { return layers.front().left; }
    // Interface point l_k, k = 1..n.
    double interface_point(std::size_t k) const { return layers[k - 1].right; }
    // Layer containing x; interface points belong to the layer on their right.
    std::size_t layer_index(double x) const;

    // Throws InvalidConfig / DimensionMismatch when an invariant fails.
    void validate() const;
};

// Value and A^2-weighted flux continuity, gamma = delta = 0.
InterfaceCondition ideal_contact(const ComplexMatrix& a2_left, const ComplexMatrix& a2_right);
BoundaryCondition dirichlet_boundary(Eigen::Index r);
BoundaryCondition neumann_boundary(Eigen::Index r);

}  // namespace mft
