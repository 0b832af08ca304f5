#include "mft/operational_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "mft/errors.hpp"
#include "mft/finite_difference.hpp"

namespace mft {

namespace {

constexpr std::size_t kEdgeWidth = 6;
constexpr std::size_t kCentralWidth = 5;

// (Bf) and (Bf)' from a trace of f, when the needed orders are present.
Trace b_trace(const LayerMedium& medium, const Trace& t) {
    Trace out;
    if (t.has(2)) out.derivs.push_back(medium.a2 * t.derivs[2] + medium.g2 * t.derivs[0]);
    if (t.has(3)) out.derivs.push_back(medium.a2 * t.derivs[3] + medium.g2 * t.derivs[1]);
    return out;
}

ComplexVector stack(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector v(a.size() + b.size());
    v << a, b;
    return v;
}

bool is_zero(const ComplexMatrix& m) { return m.isZero(0.0); }

}  // namespace

PiecewiseGridFunction apply_B(const ProblemConfig& config, const PiecewiseGridFunction& f) {
    f.validate(config);
    PiecewiseGridFunction out;
    out.components = f.components;
    out.layers.resize(f.layers.size());
    for (std::size_t m = 0; m < f.layers.size(); ++m) {
        const auto& layer = f.layers[m];
        const auto& medium = config.layers[m];
        const std::size_t n = layer.x.size();
        if (n < kEdgeWidth) {
            std::ostringstream os;
            os << "layer " << m + 1 << " has " << n << " samples, the stencils need " << kEdgeWidth;
            throw Error(ErrorCode::GridTooCoarse, os.str());
        }
        auto& dst = out.layers[m];
        dst.x = layer.x;
        dst.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const bool central = i >= kCentralWidth / 2 && i + kCentralWidth / 2 < n;
            const std::size_t width = central ? kCentralWidth : kEdgeWidth;
            const std::size_t start = central ? i - kCentralWidth / 2 : (i < n / 2 ? 0 : n - kEdgeWidth);
            const auto w = fornberg_weights(layer.x[i], std::span<const double>(layer.x.data() + start, width), 2);
            ComplexVector d2 = ComplexVector::Zero(f.components);
            for (std::size_t j = 0; j < width; ++j) d2 += w[2][j] * layer.values[start + j];
            dst.values[i] = medium.a2 * d2 + medium.g2 * layer.values[i];
        }
        dst.left = b_trace(medium, layer.left);
        dst.right = b_trace(medium, layer.right);
    }
    return out;
}

double IdentityReport::max_residual(double lambda_limit) const {
    double best = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i)
        if (lambda[i] <= lambda_limit && std::isfinite(residual[i])) best = std::max(best, residual[i]);
    return best;
}

double conjugation_mismatch(const ProblemConfig& config, const PiecewiseGridFunction& f) {
    double worst = 0.0;
    for (std::size_t k = 1; k < config.layers.size(); ++k) {
        const auto& ic = config.interfaces[k - 1];
        const auto& left = f.layers[k - 1].right;
        const auto& right = f.layers[k].left;
        if (!left.has(1) || !right.has(1)) {
            std::ostringstream os;
            os << "f and f' are required on both sides of interface " << k;
            throw Error(ErrorCode::MissingTraces, os.str());
        }
        const ComplexVector fl = stack(left.derivs[0], left.derivs[1]);
        const ComplexVector fr = stack(right.derivs[0], right.derivs[1]);
        ComplexVector lhs = ic.static_matrix(0) * fl;
        ComplexVector rhs = ic.static_matrix(1) * fr;
        if (!ic.ideal_contact_like()) {
            if (!left.has(3) || !right.has(3)) {
                std::ostringstream os;
                os << "interface " << k << " has spectral terms; traces up to f''' are required";
                throw Error(ErrorCode::MissingTraces, os.str());
            }
            const Trace gl = b_trace(config.layers[k - 1], left);
            const Trace gr = b_trace(config.layers[k], right);
            lhs -= ic.spectral_matrix(0) * stack(gl.derivs[0], gl.derivs[1]);
            rhs -= ic.spectral_matrix(1) * stack(gr.derivs[0], gr.derivs[1]);
        }
        const double scale = std::max({1.0, lhs.norm(), rhs.norm()});
        worst = std::max(worst, (lhs - rhs).norm() / scale);
    }
    return worst;
}

ComplexVector boundary_term(const ProblemConfig& config, const PiecewiseGridFunction& f) {
    const auto& bc = config.boundary;
    const auto& t = f.layers.front().left;
    if (!t.has(1)) throw Error(ErrorCode::MissingTraces, "f and f' are required at l0");
    ComplexVector out = bc.beta0 * t.derivs[0] + bc.alpha0 * t.derivs[1];
    const bool needs_second = !is_zero(bc.gamma0);
    const bool needs_third = !is_zero(bc.delta0);
    if ((needs_second && !t.has(2)) || (needs_third && !t.has(3)))
        throw Error(ErrorCode::MissingTraces, "the boundary term needs f'' and f''' at l0");
    const auto& medium = config.layers.front();
    if (needs_second) out -= bc.gamma0 * (medium.a2 * t.derivs[2] + medium.g2 * t.derivs[0]);
    if (needs_third) out -= bc.delta0 * (medium.a2 * t.derivs[3] + medium.g2 * t.derivs[1]);
    return out;
}

IdentityReport verify_basic_identity(const ProblemConfig& config, const PiecewiseGridFunction& f,
                                     const QuadratureSpec& spec, const IdentityOptions& options) {
    if (config.mode != AxisMode::SemiAxis) throw Error(ErrorCode::WrongMode, "the identity is stated on the semi-axis");
    IdentityReport report;
    report.conjugation_residual = conjugation_mismatch(config, f);
    if (report.conjugation_residual > options.conjugation_tolerance) {
        std::ostringstream os;
        os << "f violates the conjugation conditions (relative mismatch " << report.conjugation_residual << ")";
        throw Error(ErrorCode::ConjugationViolated, os.str());
    }
    const PiecewiseGridFunction bf = apply_B(config, f);
    const SpectralImage lhs = forward_transform(config, bf, spec);
    const SpectralImage img = forward_transform(config, f, spec);
    report.correction_norm = img.correction_norm;
    const ComplexVector brace = options.include_boundary_term ? boundary_term(config, f)
                                                              : ComplexVector::Zero(config.r);
    report.lambda = img.lambda;
    report.residual.assign(img.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (!img.valid[i] || !lhs.valid[i]) continue;
        const double l = img.lambda[i];
        const ComplexVector rhs = -(l * l) * img.values[i] - brace;
        report.residual[i] = (lhs.values[i] - rhs).cwiseAbs().maxCoeff();
    }
    return report;
}

SpectralImage heat_image(const SpectralImage& image, double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidConfig, "time must be nonnegative");
    SpectralImage out = image;
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= std::exp(-out.lambda[i] * out.lambda[i] * t);
    return out;
}

InverseResult solve_heat_layers(const ProblemConfig& config, const PiecewiseGridFunction& f0, double t,
                                const std::vector<std::vector<double>>& layer_points, const QuadratureSpec& spec) {
    if (config.mode == AxisMode::FullAxis) {
        const SpectralImage img = heat_image(scalar_axis_forward(config, f0, spec), t);
        return scalar_axis_inverse_layers(config, img, layer_points, spec);
    }
    const SpectralImage img = heat_image(forward_transform(config, f0, spec), t);
    return inverse_transform_layers(config, img, layer_points, spec);
}

InverseResult solve_heat(const ProblemConfig& config, const PiecewiseGridFunction& f0, double t,
                         const std::vector<double>& x_points, const QuadratureSpec& spec) {
    return solve_heat_layers(config, f0, t, split_points(config, x_points), spec);
}

PiecewiseGridFunction fd_reference(const ProblemConfig& config, const PiecewiseGridFunction& f0, double t,
                                   double dx, double dt) {
    if (config.mode != AxisMode::SemiAxis) throw Error(ErrorCode::WrongMode, "fd_reference covers the semi-axis");
    if (!(t >= 0.0) || !(dx > 0.0) || !(dt > 0.0)) throw Error(ErrorCode::InvalidConfig, "need t >= 0, dx > 0, dt > 0");
    f0.validate(config);
    const auto& bc = config.boundary;
    if (!is_zero(bc.gamma0) || !is_zero(bc.delta0))
        throw Error(ErrorCode::InvalidConfig, "fd_reference needs gamma0 = delta0 = 0");
    for (const auto& ic : config.interfaces)
        if (!ic.ideal_contact_like()) throw Error(ErrorCode::InvalidConfig, "fd_reference needs gamma = delta = 0");

    double a2max = 0.0;
    for (const auto& layer : config.layers) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(layer.a2, Eigen::EigenvaluesOnly);
        a2max = std::max(a2max, es.eigenvalues().maxCoeff());
    }
    const double limit = dx * dx / (2.0 * a2max);
    if (dt > limit) {
        std::ostringstream os;
        os << "dt = " << dt << " exceeds dx^2 / (2 max eig A^2) = " << limit;
        throw Error(ErrorCode::UnstableStep, os.str());
    }

    const auto r = config.r;
    const std::size_t nl = config.layers.size();
    const double x_end = f0.layers.back().x.back();
    if (!(x_end > config.layers.back().left)) throw Error(ErrorCode::InvalidConfig, "f0 must extend into the last layer");

    // node layout
    std::vector<std::vector<double>> xs(nl);
    std::vector<std::size_t> offset(nl, 0);
    std::size_t total = 0;
    for (std::size_t m = 0; m < nl; ++m) {
        const double a = config.layers[m].left;
        const double b = std::isfinite(config.layers[m].right) ? config.layers[m].right : x_end;
        const int n = std::max(2, static_cast<int>(std::ceil((b - a) / dx - 1e-9)));
        for (int i = 0; i <= n; ++i) xs[m].push_back(i == n ? b : a + (b - a) * i / n);
        offset[m] = total;
        total += xs[m].size();
    }
    const Eigen::Index dim = static_cast<Eigen::Index>(total) * r;
    auto idx = [&](std::size_t m, std::size_t i) { return static_cast<Eigen::Index>(offset[m] + i) * r; };

    using Triplet = Eigen::Triplet<cplx>;
    std::vector<Triplet> lhs_t, rhs_t;
    auto put_block = [&](std::vector<Triplet>& dst, Eigen::Index row, Eigen::Index col, const ComplexMatrix& blk) {
        for (Eigen::Index a = 0; a < r; ++a)
            for (Eigen::Index b = 0; b < r; ++b)
                if (blk(a, b) != cplx(0.0)) dst.emplace_back(row + a, col + b, blk(a, b));
    };
    const int steps = std::max(1, static_cast<int>(std::ceil(t / dt - 1e-12)));
    const double tau = t / steps;
    const ComplexMatrix eye = identity(r);

    // derivative row: sum_j c_j u_{node_j}; one-sided second order
    auto deriv_blocks = [&](std::size_t m, bool at_left, const ComplexMatrix& coef, Eigen::Index row,
                            const ComplexMatrix& value_coef, double sign) {
        const auto& x = xs[m];
        const std::size_t n = x.size();
        const std::size_t s0 = at_left ? 0 : n - 3;
        const double x0 = at_left ? x.front() : x.back();
        const auto w = fornberg_weights(x0, std::span<const double>(x.data() + s0, 3), 1);
        for (std::size_t j = 0; j < 3; ++j) {
            ComplexMatrix blk = sign * w[1][j] * coef;
            const bool is_end = at_left ? (j == 0) : (j == 2);
            if (is_end) blk += sign * value_coef;
            put_block(lhs_t, row, idx(m, s0 + j), blk);
        }
    };

    for (std::size_t m = 0; m < nl; ++m) {
        const auto& medium = config.layers[m];
        const std::size_t n = xs[m].size();
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = xs[m][i] - xs[m][i - 1];
            const double h1 = xs[m][i + 1] - xs[m][i];
            const double cl = 2.0 / (h0 * (h0 + h1)), cr = 2.0 / (h1 * (h0 + h1)), cc = -2.0 / (h0 * h1);
            const Eigen::Index row = idx(m, i);
            const ComplexMatrix diag = cc * medium.a2 + medium.g2;
            put_block(lhs_t, row, idx(m, i - 1), -0.5 * cl * medium.a2);
            put_block(lhs_t, row, idx(m, i), eye / tau - 0.5 * diag);
            put_block(lhs_t, row, idx(m, i + 1), -0.5 * cr * medium.a2);
            put_block(rhs_t, row, idx(m, i - 1), 0.5 * cl * medium.a2);
            put_block(rhs_t, row, idx(m, i), eye / tau + 0.5 * diag);
            put_block(rhs_t, row, idx(m, i + 1), 0.5 * cr * medium.a2);
        }
    }
    // boundary row at l0: beta0 u + alpha0 u' = 0
    deriv_blocks(0, true, bc.alpha0, idx(0, 0), bc.beta0, 1.0);
    // interfaces: row j at the left node (j = 1) or right node (j = 2)
    for (std::size_t k = 1; k < nl; ++k) {
        const auto& ic = config.interfaces[k - 1];
        for (int j = 0; j < 2; ++j) {
            const Eigen::Index row = j == 0 ? idx(k - 1, xs[k - 1].size() - 1) : idx(k, 0);
            deriv_blocks(k - 1, false, ic.alpha[j][0], row, ic.beta[j][0], 1.0);
            deriv_blocks(k, true, ic.alpha[j][1], row, ic.beta[j][1], -1.0);
        }
    }
    // far end
    put_block(lhs_t, idx(nl - 1, xs[nl - 1].size() - 1), idx(nl - 1, xs[nl - 1].size() - 1), eye);

    Eigen::SparseMatrix<cplx> lhs(dim, dim), rhs(dim, dim);
    lhs.setFromTriplets(lhs_t.begin(), lhs_t.end());
    rhs.setFromTriplets(rhs_t.begin(), rhs_t.end());
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(lhs);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::Singular, "the Crank-Nicolson system is singular");

    ComplexVector u(dim);
    for (std::size_t m = 0; m < nl; ++m)
        for (std::size_t i = 0; i < xs[m].size(); ++i) {
            const auto& layer = f0.layers[m];
            const double x = xs[m][i];
            ComplexVector v = ComplexVector::Zero(r);
            if (!layer.x.empty() && x >= layer.x.front() && x <= layer.x.back()) v = interpolate_in_layer(layer, x);
            u.segment(idx(m, i), r) = v;
        }
    if (t > 0.0)
        for (int s = 0; s < steps; ++s) {
            u = lu.solve(rhs * u);
            if (lu.info() != Eigen::Success) throw Error(ErrorCode::Singular, "Crank-Nicolson solve failed");
        }

    PiecewiseGridFunction out;
    out.components = r;
    out.layers.resize(nl);
    for (std::size_t m = 0; m < nl; ++m) {
        out.layers[m].x = xs[m];
        for (std::size_t i = 0; i < xs[m].size(); ++i) out.layers[m].values.push_back(u.segment(idx(m, i), r));
    }
    return out;
}

}  // namespace mft
