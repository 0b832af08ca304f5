#include "mft/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "mft/errors.hpp"

namespace mft {

namespace {

ComplexMatrix zero(Eigen::Index r) { return ComplexMatrix::Zero(r, r); }

void require_block(const ComplexMatrix& m, Eigen::Index r, const std::string& name) {
    if (m.rows() != r || m.cols() != r) {
        std::ostringstream os;
        os << name << " is " << m.rows() << "x" << m.cols() << ", expected " << r << "x" << r;
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    if (!all_finite(m)) throw Error(ErrorCode::InvalidConfig, name + " has non-finite entries");
}

void require_hermitian(const ComplexMatrix& m, bool strictly_positive, const std::string& name) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error(ErrorCode::InvalidConfig, name + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (strictly_positive ? !(lo > 0.0) : !(lo >= -1e-12 * scale)) {
        std::ostringstream os;
        os << name << " has eigenvalue " << lo << (strictly_positive ? " (must be > 0)" : " (must be >= 0)");
        throw Error(ErrorCode::InvalidConfig, os.str());
    }
}

}  // namespace

bool LayerMedium::bounded() const { return std::isfinite(left) && std::isfinite(right); }

ComplexMatrix InterfaceCondition::conjugation_matrix(int side, double lambda) const {
    const double l2 = lambda * lambda;
    const auto r = alpha[0][side].rows();
    ComplexMatrix m(2 * r, 2 * r);
    m << beta[0][side] + l2 * gamma[0][side], alpha[0][side] + l2 * delta[0][side],
        beta[1][side] + l2 * gamma[1][side], alpha[1][side] + l2 * delta[1][side];
    return m;
}

ComplexMatrix InterfaceCondition::static_matrix(int side) const {
    const auto r = alpha[0][side].rows();
    ComplexMatrix m(2 * r, 2 * r);
    m << beta[0][side], alpha[0][side], beta[1][side], alpha[1][side];
    return m;
}

ComplexMatrix InterfaceCondition::spectral_matrix(int side) const {
    const auto r = alpha[0][side].rows();
    ComplexMatrix m(2 * r, 2 * r);
    m << gamma[0][side], delta[0][side], gamma[1][side], delta[1][side];
    return m;
}

bool InterfaceCondition::ideal_contact_like() const {
    for (int j = 0; j < 2; ++j)
        for (int s = 0; s < 2; ++s)
            if (!gamma[j][s].isZero(0.0) || !delta[j][s].isZero(0.0)) return false;
    return true;
}

ComplexMatrix BoundaryCondition::operator_row(double lambda) const {
    const double l2 = lambda * lambda;
    const auto r = alpha0.rows();
    ComplexMatrix m(r, 2 * r);
    m << beta0 + l2 * gamma0, alpha0 + l2 * delta0;
    return m;
}

std::size_t ProblemConfig::layer_index(double x) const {
    if (mode == AxisMode::SemiAxis && x < l0()) {
        std::ostringstream os;
        os << "x = " << x << " lies left of l0 = " << l0();
        throw Error(ErrorCode::OutOfDomain, os.str());
    }
    std::size_t j = 0;
    while (j + 1 < layers.size() && x >= layers[j].right) ++j;
    return j;
}

void ProblemConfig::validate() const {
    if (r < 1) throw Error(ErrorCode::InvalidConfig, "system size r must be >= 1");
    if (layers.empty()) throw Error(ErrorCode::InvalidConfig, "at least one layer is required");
    if (interfaces.size() + 1 != layers.size()) {
        std::ostringstream os;
        os << layers.size() << " layers need " << layers.size() - 1 << " interfaces, got " << interfaces.size();
        throw Error(ErrorCode::InvalidConfig, os.str());
    }
    if (mode == AxisMode::FullAxis && r != 1)
        throw Error(ErrorCode::InvalidConfig, "full-axis mode is implemented for r = 1 only");

    for (std::size_t m = 0; m < layers.size(); ++m) {
        const auto& layer = layers[m];
        const std::string tag = "layer " + std::to_string(m + 1);
        if (!(layer.left < layer.right)) throw Error(ErrorCode::InvalidConfig, tag + ": left must be < right");
        if (std::isnan(layer.left) || std::isnan(layer.right)) throw Error(ErrorCode::InvalidConfig, tag + ": NaN bound");
        const bool first = m == 0;
        const bool last = m + 1 == layers.size();
        if (last && layer.right != std::numeric_limits<double>::infinity())
            throw Error(ErrorCode::InvalidConfig, tag + ": the last layer must extend to +inf");
        if (!last && !std::isfinite(layer.right))
            throw Error(ErrorCode::InvalidConfig, tag + ": only the last layer may be unbounded on the right");
        if (first) {
            const bool minus_inf = layer.left == -std::numeric_limits<double>::infinity();
            if (mode == AxisMode::FullAxis && !minus_inf)
                throw Error(ErrorCode::InvalidConfig, tag + ": full-axis mode needs the first layer to start at -inf");
            if (mode == AxisMode::SemiAxis && !std::isfinite(layer.left))
                throw Error(ErrorCode::InvalidConfig, tag + ": semi-axis mode needs a finite l0");
        } else if (layer.left != layers[m - 1].right) {
            throw Error(ErrorCode::InvalidConfig, tag + ": layers are not contiguous");
        }
        require_block(layer.a2, r, tag + " a2");
        require_block(layer.g2, r, tag + " g2");
        require_hermitian(layer.a2, true, tag + " a2");
        require_hermitian(layer.g2, false, tag + " g2");
    }

    static constexpr const char* kRow[] = {"1", "2"};
    for (std::size_t k = 0; k < interfaces.size(); ++k) {
        const auto& ic = interfaces[k];
        const std::string tag = "interface " + std::to_string(k + 1) + " ";
        for (int j = 0; j < 2; ++j)
            for (int s = 0; s < 2; ++s) {
                const std::string idx = std::string(kRow[j]) + kRow[s];
                require_block(ic.alpha[j][s], r, tag + "alpha" + idx);
                require_block(ic.beta[j][s], r, tag + "beta" + idx);
                require_block(ic.gamma[j][s], r, tag + "gamma" + idx);
                require_block(ic.delta[j][s], r, tag + "delta" + idx);
            }
    }
    if (mode == AxisMode::SemiAxis) {
        require_block(boundary.alpha0, r, "boundary alpha0");
        require_block(boundary.beta0, r, "boundary beta0");
        require_block(boundary.gamma0, r, "boundary gamma0");
        require_block(boundary.delta0, r, "boundary delta0");
    }
}

InterfaceCondition ideal_contact(const ComplexMatrix& a2_left, const ComplexMatrix& a2_right) {
    const auto r = a2_left.rows();
    InterfaceCondition ic;
    // row 1: y_k = y_{k+1}; row 2: A_k^2 y_k' = A_{k+1}^2 y_{k+1}'
    ic.beta[0] = {identity(r), identity(r)};
    ic.alpha[0] = {zero(r), zero(r)};
    ic.beta[1] = {zero(r), zero(r)};
    ic.alpha[1] = {a2_left, a2_right};
    for (int j = 0; j < 2; ++j) {
        ic.gamma[j] = {zero(r), zero(r)};
        ic.delta[j] = {zero(r), zero(r)};
    }
    return ic;
}

BoundaryCondition dirichlet_boundary(Eigen::Index r) {
    return {zero(r), identity(r), zero(r), zero(r)};
}

BoundaryCondition neumann_boundary(Eigen::Index r) {
    return {identity(r), zero(r), zero(r), zero(r)};
}

}  // namespace mft
