#include "mft/matrix_core.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mft/errors.hpp"

namespace mft {

namespace {

void require_square(const ComplexMatrix& m, const char* op) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << op << " needs a square matrix, got " << m.rows() << "x" << m.cols();
        throw Error(ErrorCode::NonSquare, os.str());
    }
}

double norm1(const ComplexMatrix& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

BlockMatrix2x2::BlockMatrix2x2(ComplexMatrix a_, ComplexMatrix b_, ComplexMatrix c_, ComplexMatrix d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    const auto r = a.rows();
    for (const ComplexMatrix* blk : {&a, &b, &c, &d}) {
        if (blk->rows() != r || blk->cols() != r)
            throw Error(ErrorCode::DimensionMismatch, "BlockMatrix2x2 blocks must all be r x r");
    }
}

ComplexMatrix BlockMatrix2x2::assemble() const {
    const auto r = block_size();
    ComplexMatrix out(2 * r, 2 * r);
    out << a, b, c, d;
    return out;
}

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

ComplexMatrix principal_sqrt(const ComplexMatrix& m) {
    require_square(m, "principal_sqrt");
    const auto n = m.rows();
    if (n == 0) return m;
    if (n == 1) {
        const cplx z = m(0, 0);
        if (z.imag() == 0.0 && z.real() <= 0.0)
            throw Error(ErrorCode::SpectrumOnCut, "eigenvalue on the closed negative real axis");
        return ComplexMatrix::Constant(1, 1, std::sqrt(z));
    }

    Eigen::ComplexSchur<ComplexMatrix> schur(m);
    const ComplexMatrix& t = schur.matrixT();
    const ComplexMatrix& u = schur.matrixU();

    const double scale = std::max(1.0, norm1(m));
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx z = t(i, i);
        if (std::abs(z.imag()) <= 1e-14 * scale && z.real() <= 1e-14 * scale)
            throw Error(ErrorCode::SpectrumOnCut, "eigenvalue on the closed negative real axis");
    }

    ComplexMatrix r = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) r(i, i) = std::sqrt(t(i, i));
    for (Eigen::Index j = 1; j < n; ++j) {
        for (Eigen::Index i = j - 1; i >= 0; --i) {
            cplx s = t(i, j);
            for (Eigen::Index k = i + 1; k < j; ++k) s -= r(i, k) * r(k, j);
            r(i, j) = s / (r(i, i) + r(j, j));
        }
    }
    return u * r * u.adjoint();
}

ComplexMatrix matrix_exp(const ComplexMatrix& m, double max_norm) {
    require_square(m, "matrix_exp");
    const auto n = m.rows();
    if (!all_finite(m)) throw Error(ErrorCode::OverflowRisk, "matrix_exp argument is not finite");
    const double nrm = norm1(m);
    if (nrm > max_norm) {
        std::ostringstream os;
        os << "||m||_1 = " << nrm << " exceeds " << max_norm;
        throw Error(ErrorCode::OverflowRisk, os.str());
    }
    if (n == 1) return ComplexMatrix::Constant(1, 1, std::exp(m(0, 0)));

    // Higham (2005) degree-13 coefficients and theta_13.
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    int squarings = 0;
    if (nrm > theta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
    const ComplexMatrix a = m / std::ldexp(1.0, squarings);

    const ComplexMatrix id = identity(n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;

    const ComplexMatrix uu = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                                  b[3] * a2 + b[1] * id);
    const ComplexMatrix vv =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    ComplexMatrix result = (vv - uu).partialPivLu().solve(vv + uu);
    for (int k = 0; k < squarings; ++k) result = result * result;
    return result;
}

double rcond(const ComplexMatrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) return 0.0;
    if (!all_finite(a)) return 0.0;
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        if (lu.matrixLU()(i, i) == cplx(0.0)) return 0.0;
    const double rc = lu.rcond();
    return std::isfinite(rc) ? rc : 0.0;
}

ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b, double rcond_threshold) {
    require_square(a, "solve_linear");
    if (b.rows() != a.rows()) {
        std::ostringstream os;
        os << "right-hand side has " << b.rows() << " rows, matrix is " << a.rows() << "x" << a.cols();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    bool zero_pivot = false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        if (lu.matrixLU()(i, i) == cplx(0.0)) zero_pivot = true;
    const double rc = zero_pivot ? 0.0 : lu.rcond();
    if (!(rc >= rcond_threshold)) {
        std::ostringstream os;
        os << "reciprocal condition estimate " << rc << " below " << rcond_threshold;
        throw Error(ErrorCode::Singular, os.str());
    }
    return lu.solve(b);
}

ComplexMatrix solve_linear(const BlockMatrix2x2& a, const ComplexMatrix& b, double rcond_threshold) {
    return solve_linear(a.assemble(), b, rcond_threshold);
}

ComplexMatrix inverse(const ComplexMatrix& a, double rcond_threshold) {
    return solve_linear(a, identity(a.rows()), rcond_threshold);
}

}  // namespace mft
