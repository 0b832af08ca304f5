#include "mft/spectral_basis.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mft/errors.hpp"

namespace mft {

namespace {

constexpr cplx kI{0.0, 1.0};

// (i q)^d as a matrix power, d >= 0.
ComplexMatrix iq_power(const ComplexMatrix& q, int deriv, double sign) {
    ComplexMatrix out = identity(q.rows());
    const ComplexMatrix step = (sign * kI) * q;
    for (int i = 0; i < deriv; ++i) out = out * step;
    return out;
}

double relative(const ComplexMatrix& diff, const ComplexMatrix& ref) {
    const double scale = std::max(ref.norm(), 1e-300);
    return diff.norm() / scale;
}

}  // namespace

LayerExponential::LayerExponential(const ComplexMatrix& q) : q_(q) {
    if (q.rows() == 1) {
        diagonal_ = true;
        vectors_ = identity(1);
        vectors_inv_ = identity(1);
        values_ = q.diagonal();
        return;
    }
    if (q.isDiagonal(0.0)) {
        diagonal_ = true;
        vectors_ = identity(q.rows());
        vectors_inv_ = vectors_;
        values_ = q.diagonal();
        return;
    }
    Eigen::ComplexEigenSolver<ComplexMatrix> es(q);
    if (es.info() != Eigen::Success) return;
    const ComplexMatrix& v = es.eigenvectors();
    const double rc = rcond(v);
    if (rc < 1e-6) return;
    diagonal_ = true;
    vectors_ = v;
    vectors_inv_ = inverse(v, 0.0);
    values_ = es.eigenvalues();
}

ComplexMatrix LayerExponential::eval(double s) const {
    if (diagonal_) {
        const ComplexVector phases = ((kI * s) * values_).array().exp();
        return vectors_ * phases.asDiagonal() * vectors_inv_;
    }
    return matrix_exp((kI * s) * q_);
}

ComplexMatrix compute_wavenumber(const LayerMedium& layer, double lambda) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::OutOfDomain, "lambda must be positive");
    const auto r = layer.a2.rows();
    const ComplexMatrix rhs = (lambda * lambda) * identity(r) + layer.g2;
    return principal_sqrt(solve_linear(layer.a2, rhs));
}

SpectralBasisAtLambda build_basis(const ProblemConfig& config, double lambda) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::OutOfDomain, "lambda must be positive");
    const auto r = config.r;
    const std::size_t count = config.layers.size();

    SpectralBasisAtLambda basis;
    basis.lambda = lambda;
    basis.r = r;
    basis.mode = config.mode;
    basis.layers.resize(count);

    for (std::size_t m = 0; m < count; ++m) {
        const auto& medium = config.layers[m];
        auto& lc = basis.layers[m];
        lc.q = compute_wavenumber(medium, lambda);
        lc.q_inv = inverse(lc.q, 0.0);
        lc.a2_inv = inverse(medium.a2, 0.0);
        lc.center = std::isfinite(medium.right) ? medium.right : 0.0;
        lc.exp = LayerExponential(lc.q);
    }

    auto& last = basis.layers.back();
    last.c_plus = identity(r);
    last.c_minus = ComplexMatrix::Zero(r, r);
    last.d_plus = ComplexMatrix::Zero(r, r);
    last.d_minus = identity(r);

    for (std::size_t k = count - 1; k >= 1; --k) {
        const auto& ic = config.interfaces[k - 1];
        const double xk = config.interface_point(k);
        const ComplexMatrix m1 = ic.conjugation_matrix(0, lambda);
        const ComplexMatrix m2 = ic.conjugation_matrix(1, lambda);
        for (const ComplexMatrix* mm : {&m1, &m2}) {
            if (rcond(*mm) < kSingularRcond) {
                std::ostringstream os;
                os << "conjugation matrix at interface " << k << " is singular at lambda = " << lambda;
                throw Error(ErrorCode::RegularityViolation, os.str());
            }
        }
        const ComplexMatrix rhs = m2 * omega_in_layer(basis, k, xk);

        auto& lc = basis.layers[k - 1];
        ComplexMatrix t(2 * r, 2 * r);
        t << identity(r), identity(r), kI * lc.q, -kI * lc.q;
        ComplexMatrix coeffs;
        try {
            coeffs = solve_linear(m1 * t, rhs);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "interface " << k << " recursion at lambda = " << lambda << ": " << e.what();
            throw Error(ErrorCode::RegularityViolation, os.str());
        }
        lc.c_plus = coeffs.block(0, 0, r, r);
        lc.d_plus = coeffs.block(0, r, r, r);
        lc.c_minus = coeffs.block(r, 0, r, r);
        lc.d_minus = coeffs.block(r, r, r, r);
    }

    ComplexMatrix rows;
    if (config.mode == AxisMode::SemiAxis) {
        const ComplexMatrix om0 = omega_in_layer(basis, 0, config.l0());
        const ComplexMatrix bnd = config.boundary.operator_row(lambda) * om0;
        basis.phi0 = bnd.leftCols(r);
        basis.psi0 = bnd.rightCols(r);
        try {
            basis.phi0_inv = inverse(basis.phi0);
            basis.psi0_inv = inverse(basis.psi0);
        } catch (const Error&) {
            std::ostringstream os;
            os << "boundary functional is singular at lambda = " << lambda;
            throw Error(ErrorCode::DegenerateBoundary, os.str());
        }
        rows = bnd;
    } else {
        // Channel matrix [[1, D+/C+], [-C-/D-, -1]] from the first layer.
        const auto& first = basis.layers.front();
        const cplx cp = first.c_plus(0, 0), cm = first.c_minus(0, 0);
        const cplx dp = first.d_plus(0, 0), dm = first.d_minus(0, 0);
        if (std::abs(cp) == 0.0 || std::abs(dm) == 0.0) {
            std::ostringstream os;
            os << "no transmitted wave through the axis at lambda = " << lambda;
            throw Error(ErrorCode::DegenerateBoundary, os.str());
        }
        const double a_last = std::sqrt(config.layers.back().a2(0, 0).real());
        rows.resize(2, 2);
        rows << 1.0, dp / cp, -cm / dm, -1.0;
        rows *= 2.0 * kI * lambda * a_last;
    }

    for (auto& lc : basis.layers) {
        ComplexMatrix kmat(2 * r, 2 * r);
        kmat << lc.c_plus, lc.d_plus, lc.c_minus, lc.d_minus;
        if (rcond(kmat) >= kSingularRcond) {
            lc.omega_invertible = true;
            lc.dual_rows = solve_linear(kmat.transpose(), rows.transpose(), 0.0).transpose();
        }
    }
    return basis;
}

PairValues eval_pair_in_layer(const SpectralBasisAtLambda& basis, std::size_t layer, double x, int deriv) {
    const auto& lc = basis.layers.at(layer);
    const double s = x - lc.center;
    ComplexMatrix ep = lc.exp.plus(s);
    ComplexMatrix em = lc.exp.minus(s);
    if (deriv > 0) {
        ep = iq_power(lc.q, deriv, 1.0) * ep;
        em = iq_power(lc.q, deriv, -1.0) * em;
    }
    return {ep * lc.c_plus + em * lc.c_minus, ep * lc.d_plus + em * lc.d_minus};
}

PairValues eval_pair(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x, int deriv) {
    return eval_pair_in_layer(basis, config.layer_index(x), x, deriv);
}

ComplexMatrix omega_in_layer(const SpectralBasisAtLambda& basis, std::size_t layer, double x) {
    const auto r = basis.r;
    const PairValues v = eval_pair_in_layer(basis, layer, x, 0);
    const PairValues d = eval_pair_in_layer(basis, layer, x, 1);
    ComplexMatrix om(2 * r, 2 * r);
    om << v.phi, v.psi, d.phi, d.psi;
    return om;
}

ComplexMatrix eval_u_in_layer(const SpectralBasisAtLambda& basis, std::size_t layer, double x, int deriv) {
    if (basis.mode != AxisMode::SemiAxis) throw Error(ErrorCode::WrongMode, "eval_u needs a semi-axis basis");
    const PairValues v = eval_pair_in_layer(basis, layer, x, deriv);
    return v.phi * basis.phi0_inv - v.psi * basis.psi0_inv;
}

ComplexMatrix eval_u(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x, int deriv) {
    return eval_u_in_layer(basis, config.layer_index(x), x, deriv);
}

namespace {

// rows * Omega^{-1}(x) (0; E) A^{-2} and its x-derivatives:
//   (i/2) [-R1 (-iq)^d e^{-iqs} + R2 (iq)^d e^{iqs}] q^{-1} A^{-2}
ComplexMatrix dual_kernel(const SpectralBasisAtLambda& basis, std::size_t layer, double x, int deriv) {
    const auto& lc = basis.layers.at(layer);
    if (!lc.omega_invertible) {
        std::ostringstream os;
        os << "Omega is singular in layer " << layer + 1 << " at lambda = " << basis.lambda;
        throw Error(ErrorCode::OmegaSingular, os.str());
    }
    const auto r = basis.r;
    const double s = x - lc.center;
    ComplexMatrix ep = lc.exp.plus(s);
    ComplexMatrix em = lc.exp.minus(s);
    if (deriv > 0) {
        ep = iq_power(lc.q, deriv, 1.0) * ep;
        em = iq_power(lc.q, deriv, -1.0) * em;
    }
    const ComplexMatrix r1 = lc.dual_rows.leftCols(r);
    const ComplexMatrix r2 = lc.dual_rows.rightCols(r);
    return (0.5 * kI) * (r2 * ep - r1 * em) * lc.q_inv * lc.a2_inv;
}

}  // namespace

ComplexMatrix eval_u_star_in_layer(const SpectralBasisAtLambda& basis, std::size_t layer, double x,
                                   int deriv) {
    if (basis.mode != AxisMode::SemiAxis)
        throw Error(ErrorCode::WrongMode, "eval_u_star needs a semi-axis basis");
    return dual_kernel(basis, layer, x, deriv);
}

ComplexMatrix eval_u_star(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x,
                          int deriv) {
    return eval_u_star_in_layer(basis, config.layer_index(x), x, deriv);
}

ComplexMatrix eval_axis_u(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x) {
    if (basis.mode != AxisMode::FullAxis) throw Error(ErrorCode::WrongMode, "eval_axis_u needs a full-axis basis");
    const PairValues v = eval_pair(basis, config, x, 0);
    const double a_last = std::sqrt(config.layers.back().a2(0, 0).real());
    ComplexMatrix out(1, 2);
    out << v.phi(0, 0), v.psi(0, 0);
    return out / (-2.0 * kI * basis.lambda * a_last);
}

ComplexMatrix eval_axis_u_star(const SpectralBasisAtLambda& basis, const ProblemConfig& config, double x) {
    if (basis.mode != AxisMode::FullAxis)
        throw Error(ErrorCode::WrongMode, "eval_axis_u_star needs a full-axis basis");
    return dual_kernel(basis, config.layer_index(x), x, 0);
}

double primal_conjugation_residual(const SpectralBasisAtLambda& basis, const ProblemConfig& config,
                                   std::size_t k) {
    const auto& ic = config.interfaces.at(k - 1);
    const double xk = config.interface_point(k);
    const ComplexMatrix lhs = ic.conjugation_matrix(0, basis.lambda) * omega_in_layer(basis, k - 1, xk);
    const ComplexMatrix rhs = ic.conjugation_matrix(1, basis.lambda) * omega_in_layer(basis, k, xk);
    return relative(lhs - rhs, rhs);
}

double kernel_conjugation_residual(const SpectralBasisAtLambda& basis, const ProblemConfig& config,
                                   std::size_t k) {
    const auto& ic = config.interfaces.at(k - 1);
    const double xk = config.interface_point(k);
    const auto r = basis.r;
    auto trace = [&](std::size_t layer) {
        ComplexMatrix t(2 * r, r);
        t << eval_u_in_layer(basis, layer, xk, 0), eval_u_in_layer(basis, layer, xk, 1);
        return t;
    };
    const ComplexMatrix lhs = ic.conjugation_matrix(0, basis.lambda) * trace(k - 1);
    const ComplexMatrix rhs = ic.conjugation_matrix(1, basis.lambda) * trace(k);
    return relative(lhs - rhs, rhs);
}

double dual_conjugation_residual(const SpectralBasisAtLambda& basis, const ProblemConfig& config,
                                 std::size_t k) {
    const auto& ic = config.interfaces.at(k - 1);
    const double xk = config.interface_point(k);
    const auto r = basis.r;
    auto row = [&](std::size_t layer) {
        const ComplexMatrix& a2 = config.layers[layer].a2;
        ComplexMatrix z(r, 2 * r);
        z << -eval_u_star_in_layer(basis, layer, xk, 1) * a2, eval_u_star_in_layer(basis, layer, xk, 0) * a2;
        return z;
    };
    const ComplexMatrix lhs = row(k - 1) * inverse(ic.conjugation_matrix(0, basis.lambda));
    const ComplexMatrix rhs = row(k) * inverse(ic.conjugation_matrix(1, basis.lambda));
    return relative(lhs - rhs, rhs);
}

Eigen::Index kernel_rank(const SpectralBasisAtLambda& basis, const ProblemConfig& config,
                         const std::vector<double>& xs, double tol) {
    const auto r = basis.r;
    ComplexMatrix stacked(static_cast<Eigen::Index>(xs.size()) * r, r);
    for (std::size_t i = 0; i < xs.size(); ++i)
        stacked.block(static_cast<Eigen::Index>(i) * r, 0, r, r) = eval_u(basis, config, xs[i]);
    Eigen::JacobiSVD<ComplexMatrix> svd(stacked);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++rank;
    return rank;
}

}  // namespace mft
