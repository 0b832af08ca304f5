#pragma once

#include <complex>

#include <Eigen/Dense>

namespace mft {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Four r x r blocks viewed as one 2r x 2r matrix [[a, b], [c, d]].
struct BlockMatrix2x2 {
    ComplexMatrix a, b, c, d;

    BlockMatrix2x2() = default;
    BlockMatrix2x2(ComplexMatrix a_, ComplexMatrix b_, ComplexMatrix c_, ComplexMatrix d_);

    Eigen::Index block_size() const { return a.rows(); }
    ComplexMatrix assemble() const;
};

// Reciprocal condition estimates below this value are treated as singular.
inline constexpr double kSingularRcond = 1e-12;

ComplexMatrix identity(Eigen::Index n);
bool all_finite(const ComplexMatrix& m);

// Principal square root via complex Schur form and the upper-triangular
// recurrence. Throws SpectrumOnCut if an eigenvalue lies on (-inf, 0].
ComplexMatrix principal_sqrt(const ComplexMatrix& m);

// e^m by scaling and squaring with the [13/13] Pade approximant.
// Throws OverflowRisk when ||m||_1 exceeds max_norm.
ComplexMatrix matrix_exp(const ComplexMatrix& m, double max_norm = 700.0);

// Solves a x = b with partial-pivot LU; throws Singular when the
// reciprocal condition estimate of a drops below rcond_threshold.
ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b,
                           double rcond_threshold = kSingularRcond);
ComplexMatrix solve_linear(const BlockMatrix2x2& a, const ComplexMatrix& b,
                           double rcond_threshold = kSingularRcond);

ComplexMatrix inverse(const ComplexMatrix& a, double rcond_threshold = kSingularRcond);

// Reciprocal condition number estimate in the 1-norm (0 for non-invertible).
double rcond(const ComplexMatrix& a);

}  // namespace mft
