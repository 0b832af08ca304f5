#pragma once

#include <cmath>
#include <limits>
#include <random>

#include "mft/problem.hpp"

namespace mft::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline ComplexMatrix scalar(double v) { return ComplexMatrix::Constant(1, 1, v); }

inline ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

inline LayerMedium layer(double left, double right, const ComplexMatrix& a2, const ComplexMatrix& g2) {
    return LayerMedium{left, right, a2, g2};
}

// Homogeneous semi-axis [0, inf) with A = 1, Gamma = 0 and a Dirichlet end.
inline ProblemConfig unit_dirichlet() {
    ProblemConfig c;
    c.r = 1;
    c.layers = {layer(0.0, kInf, scalar(1.0), scalar(0.0))};
    c.boundary = dirichlet_boundary(1);
    c.validate();
    return c;
}

// Two scalar layers, a^2 = a2_left on [0, l1) and a2_right beyond, ideal contact.
inline ProblemConfig two_layer_scalar(double l1 = 2.0, double a2_left = 1.0, double a2_right = 4.0) {
    ProblemConfig c;
    c.r = 1;
    c.layers = {layer(0.0, l1, scalar(a2_left), scalar(0.0)), layer(l1, kInf, scalar(a2_right), scalar(0.0))};
    c.interfaces = {ideal_contact(c.layers[0].a2, c.layers[1].a2)};
    c.boundary = dirichlet_boundary(1);
    c.validate();
    return c;
}

// r = 2 diagonal two-layer problem whose components are the scalar problems
// (a2 = 1 | 4) and (a2 = 2 | 0.5).
inline ProblemConfig two_layer_diagonal() {
    ProblemConfig c;
    c.r = 2;
    c.layers = {layer(0.0, 2.0, diag2(1.0, 2.0), diag2(0.0, 0.0)), layer(2.0, kInf, diag2(4.0, 0.5), diag2(0.0, 0.0))};
    c.interfaces = {ideal_contact(c.layers[0].a2, c.layers[1].a2)};
    c.boundary = dirichlet_boundary(2);
    c.validate();
    return c;
}

// Three layers, r = 2, non-commuting Hermitian coefficients, ideal contact.
inline ProblemConfig three_layer_matrix() {
    ProblemConfig c;
    c.r = 2;
    ComplexMatrix a1(2, 2), a2(2, 2), a3(2, 2), g1(2, 2), g2(2, 2), g3(2, 2);
    a1 << 2.0, 0.5, 0.5, 1.0;
    a2 << 1.0, cplx(0.2, -0.3), cplx(0.2, 0.3), 3.0;
    a3 << 4.0, -1.0, -1.0, 2.0;
    g1 << 0.5, 0.1, 0.1, 0.2;
    g2 = ComplexMatrix::Zero(2, 2);
    g3 << 1.0, cplx(0.0, 0.4), cplx(0.0, -0.4), 0.6;
    c.layers = {layer(0.0, 1.5, a1, g1), layer(1.5, 3.0, a2, g2), layer(3.0, kInf, a3, g3)};
    c.interfaces = {ideal_contact(a1, a2), ideal_contact(a2, a3)};
    BoundaryCondition bc;
    bc.alpha0 = identity(2);
    bc.beta0 = ComplexMatrix::Zero(2, 2);
    bc.beta0 << 0.7, 0.1, 0.1, 0.4;
    bc.gamma0 = ComplexMatrix::Zero(2, 2);
    bc.delta0 = ComplexMatrix::Zero(2, 2);
    c.boundary = bc;
    c.validate();
    return c;
}

// Scalar full axis: a^2 = a2_left on (-inf, 0), a2_right on [0, inf).
inline ProblemConfig two_layer_axis(double a2_left = 1.0, double a2_right = 2.25) {
    ProblemConfig c;
    c.r = 1;
    c.mode = AxisMode::FullAxis;
    c.layers = {layer(-kInf, 0.0, scalar(a2_left), scalar(0.0)), layer(0.0, kInf, scalar(a2_right), scalar(0.0))};
    c.interfaces = {ideal_contact(c.layers[0].a2, c.layers[1].a2)};
    c.validate();
    return c;
}

inline ComplexMatrix random_matrix(std::mt19937& rng, Eigen::Index n, double scale = 1.0) {
    std::normal_distribution<double> d(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = scale * cplx(d(rng), d(rng));
    return m;
}

inline double rel_err(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace mft::testing
