#include "mft/transform_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mft/errors.hpp"
#include "mft/parallel.hpp"

namespace mft {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kLambdaOrder = 6;

double max_inverse_a(const ProblemConfig& config) {
    double best = 0.0;
    for (const auto& layer : config.layers) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(layer.a2, Eigen::EigenvaluesOnly);
        best = std::max(best, 1.0 / std::sqrt(es.eigenvalues().minCoeff()));
    }
    return best;
}

double spectral_norm(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

// Integration interval of layer m after truncation at +-x_max.
std::pair<double, double> layer_extent(const LayerMedium& medium, double x_max) {
    const double a = std::isfinite(medium.left) ? medium.left : -x_max;
    const double b = std::isfinite(medium.right) ? medium.right : x_max;
    if (!(b > a)) throw Error(ErrorCode::InvalidConfig, "x_max must lie beyond every interface");
    return {a, b};
}

ComplexVector column_sums(const ComplexMatrix& terms, Eigen::Index first_row = 0) {
    ComplexVector out(terms.cols());
    const std::size_t n = static_cast<std::size_t>(terms.rows() - first_row);
    for (Eigen::Index c = 0; c < terms.cols(); ++c)
        out(c) = pairwise_sum(std::span<const cplx>(terms.col(c).data() + first_row, n));
    return out;
}

// f sampled in one layer, evaluated at quadrature nodes; zero outside the
// sampled range (the input is required to decay there).
ComplexVector sample_or_zero(const LayerSamples& layer, Eigen::Index r, double x) {
    if (layer.x.empty()) return ComplexVector::Zero(r);
    const double tol = 1e-12 * std::max(1.0, std::abs(x));
    if (x < layer.x.front() - tol || x > layer.x.back() + tol) return ComplexVector::Zero(r);
    return interpolate_in_layer(layer, std::clamp(x, layer.x.front(), layer.x.back()));
}

struct LayerNodes {
    QuadratureRule rule;
    std::vector<ComplexVector> g;  // A^{-2} f at the nodes
    int panel_order = 0;
};

std::vector<LayerNodes> prepare_nodes(const ProblemConfig& config, const PiecewiseGridFunction& f,
                                      const QuadratureSpec& spec) {
    const auto rules = xi_rules(config, spec);
    std::vector<LayerNodes> out(config.layers.size());
    for (std::size_t m = 0; m < config.layers.size(); ++m) {
        const ComplexMatrix a2_inv = inverse(config.layers[m].a2);
        out[m].rule = rules[m];
        out[m].panel_order = spec.xi_quadrature_order;
        out[m].g.reserve(rules[m].size());
        for (double x : rules[m].nodes) out[m].g.push_back(a2_inv * sample_or_zero(f.layers[m], config.r, x));
    }
    return out;
}

struct LayerIntegral {
    ComplexVector value;
    double last_panel = 0.0;
};

// int u*(xi) f(xi) d xi over one layer, u* = (i/2)(R2 e^{iqs} - R1 e^{-iqs}) q^{-1} A^{-2}.
LayerIntegral integrate_layer(const LayerCoefficients& lc, const LayerNodes& nodes, Eigen::Index r) {
    const ComplexMatrix r1 = lc.dual_rows.leftCols(r);
    const ComplexMatrix r2 = lc.dual_rows.rightCols(r);
    const Eigen::Index n = static_cast<Eigen::Index>(nodes.rule.size());
    const Eigen::Index tail_start = std::max<Eigen::Index>(0, n - nodes.panel_order);
    LayerIntegral out;
    if (lc.exp.diagonalized()) {
        const ComplexMatrix& v = lc.exp.vectors();
        const ComplexMatrix& vi = lc.exp.vectors_inv();
        const ComplexVector& kappa = lc.exp.values();
        ComplexMatrix plus(n, r), minus(n, r);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double s = nodes.rule.nodes[j] - lc.center;
            const double w = nodes.rule.weights[j];
            const ComplexVector h = vi * nodes.g[j];
            for (Eigen::Index c = 0; c < r; ++c) {
                plus(j, c) = w * std::exp(kI * kappa(c) * s) * h(c);
                minus(j, c) = w * std::exp(-kI * kappa(c) * s) * h(c);
            }
        }
        const ComplexVector inv_kappa = kappa.cwiseInverse();
        auto combine = [&](const ComplexVector& mp, const ComplexVector& mm) -> ComplexVector {
            return (0.5 * kI) * (r2 * (v * inv_kappa.cwiseProduct(mp)) - r1 * (v * inv_kappa.cwiseProduct(mm)));
        };
        out.value = combine(column_sums(plus), column_sums(minus));
        out.last_panel = combine(column_sums(plus, tail_start), column_sums(minus, tail_start)).cwiseAbs().maxCoeff();
        return out;
    }
    ComplexMatrix terms(n, lc.dual_rows.rows());
    for (Eigen::Index j = 0; j < n; ++j) {
        const double s = nodes.rule.nodes[j] - lc.center;
        const ComplexVector qg = lc.q_inv * nodes.g[j];
        terms.row(j) = (nodes.rule.weights[j] * (0.5 * kI) *
                        (r2 * (lc.exp.plus(s) * qg) - r1 * (lc.exp.minus(s) * qg)))
                           .transpose();
    }
    out.value = column_sums(terms);
    out.last_panel = column_sums(terms, tail_start).cwiseAbs().maxCoeff();
    return out;
}

SpectralImage forward_core(const ProblemConfig& config, const PiecewiseGridFunction& f,
                           const QuadratureSpec& spec, bool axis) {
    spec.validate();
    f.validate(config);
    if (f.components != config.r) throw Error(ErrorCode::DimensionMismatch, "function and problem sizes differ");
    const QuadratureRule lam = lambda_rule(config, spec);
    const auto nodes = prepare_nodes(config, f, spec);
    const std::size_t count = lam.size();
    const Eigen::Index channels = axis ? 2 : config.r;

    if (!axis) {
        // fail early rather than once per lambda
        const auto& first = f.layers.front().left;
        bool ok = first.has(1);
        for (std::size_t k = 1; k < config.layers.size(); ++k)
            ok = ok && f.layers[k - 1].right.has(1) && f.layers[k].left.has(1);
        if (!ok) throw Error(ErrorCode::MissingTraces, "f and f' traces are required at l0 and both sides of each interface");
    }

    SpectralImage image;
    image.lambda = lam.nodes;
    image.weights = lam.weights;
    image.values.assign(count, ComplexVector::Zero(channels));
    image.valid.assign(count, true);
    std::vector<double> tails(count, 0.0), corrections(count, 0.0);

    parallel_for(count, [&](std::size_t i) {
        SpectralBasisAtLambda basis;
        try {
            basis = build_basis(config, lam.nodes[i]);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateBoundary) throw;
            image.valid[i] = false;
            return;
        }
        ComplexVector total = ComplexVector::Zero(channels);
        for (std::size_t m = 0; m < config.layers.size(); ++m) {
            const auto& lc = basis.layers[m];
            if (!lc.omega_invertible) {
                image.valid[i] = false;
                return;
            }
            const LayerIntegral li = integrate_layer(lc, nodes[m], config.r);
            total += li.value;
            if (m + 1 == config.layers.size() || (axis && m == 0)) tails[i] = std::max(tails[i], li.last_panel);
        }
        if (!axis) {
            const ComplexVector corr = correction_terms(config, basis, f);
            corrections[i] = corr.size() ? corr.cwiseAbs().maxCoeff() : 0.0;
            total += corr;
        }
        image.values[i] = total;
    });
    for (std::size_t i = 0; i < count; ++i) {
        image.tail_estimate = std::max(image.tail_estimate, tails[i]);
        image.correction_norm = std::max(image.correction_norm, corrections[i]);
        if (!image.valid[i]) image.values[i].setZero();
    }
    return image;
}

std::vector<double> resolve_weights(const ProblemConfig& config, const SpectralImage& image,
                                    const QuadratureSpec& spec) {
    const std::size_t n = image.size();
    if (image.weights.size() == n) return image.weights;
    const QuadratureRule rule = lambda_rule(config, spec);
    if (rule.size() == n) {
        bool same = true;
        for (std::size_t i = 0; i < n && same; ++i)
            same = std::abs(rule.nodes[i] - image.lambda[i]) <= 1e-12 * std::max(1.0, rule.nodes[i]);
        if (same) return rule.weights;
    }
    // an unknown grid: trapezoid weights
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = image.lambda[i + 1] - image.lambda[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

struct InverseLayerData {
    double center = 0.0;
    bool diagonal = false;
    ComplexMatrix v;
    ComplexVector kappa, ka, kb;  // eigen-coordinates of the plus/minus amplitudes
    LayerExponential exp;
    ComplexVector a, b;
};

struct InverseLambdaData {
    bool ok = false;
    std::vector<InverseLayerData> layers;
};

InverseResult inverse_core(const ProblemConfig& config, const SpectralImage& image,
                           const std::vector<std::vector<double>>& layer_points, const QuadratureSpec& spec,
                           bool axis) {
    spec.validate();
    if (image.size() == 0) throw Error(ErrorCode::EmptyImage, "the spectral image has no grid points");
    const Eigen::Index r = config.r;
    const Eigen::Index channels = axis ? 2 : r;
    if (image.channels() != channels) {
        std::ostringstream os;
        os << "image has " << image.channels() << " channels, expected " << channels;
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    if (layer_points.size() != config.layers.size())
        throw Error(ErrorCode::DimensionMismatch, "one point list per layer is required");
    const std::size_t count = image.size();
    const std::vector<double> weights = resolve_weights(config, image, spec);
    const double a_last = std::sqrt(config.layers.back().a2(0, 0).real());

    std::vector<InverseLambdaData> data(count);
    parallel_for(count, [&](std::size_t i) {
        if (!image.valid.empty() && !image.valid[i]) return;
        const double lambda = image.lambda[i];
        if (!(lambda > 0.0)) throw Error(ErrorCode::OutOfDomain, "lambda grid must be positive");
        SpectralBasisAtLambda basis;
        try {
            basis = build_basis(config, lambda);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateBoundary) throw;
            return;
        }
        const ComplexVector& fv = image.values[i];
        const cplx coef = axis ? (1.0 / (std::numbers::pi * kI)) * (-1.0 / (2.0 * kI * lambda * a_last)) * lambda * weights[i]
                               : (-1.0 / (std::numbers::pi * kI)) * lambda * weights[i];
        auto& d = data[i];
        d.layers.resize(config.layers.size());
        for (std::size_t m = 0; m < config.layers.size(); ++m) {
            const auto& lc = basis.layers[m];
            auto& ld = d.layers[m];
            ld.center = lc.center;
            if (axis) {
                ld.a = coef * (lc.c_plus * fv.head(1) + lc.d_plus * fv.tail(1));
                ld.b = coef * (lc.c_minus * fv.head(1) + lc.d_minus * fv.tail(1));
            } else {
                ld.a = coef * ((lc.c_plus * basis.phi0_inv - lc.d_plus * basis.psi0_inv) * fv);
                ld.b = coef * ((lc.c_minus * basis.phi0_inv - lc.d_minus * basis.psi0_inv) * fv);
            }
            ld.diagonal = lc.exp.diagonalized();
            if (ld.diagonal) {
                ld.v = lc.exp.vectors();
                ld.kappa = lc.exp.values();
                ld.ka = lc.exp.vectors_inv() * ld.a;
                ld.kb = lc.exp.vectors_inv() * ld.b;
            } else {
                ld.exp = lc.exp;
            }
        }
        d.ok = true;
    });

    std::size_t skipped = 0;
    for (const auto& d : data) skipped += d.ok ? 0 : 1;
    if (skipped == count) throw Error(ErrorCode::EmptyImage, "no valid lambda points in the image");

    const auto& taus = spec.tau_schedule;
    std::vector<std::vector<double>> damping(taus.size(), std::vector<double>(count));
    for (std::size_t t = 0; t < taus.size(); ++t)
        for (std::size_t i = 0; i < count; ++i) damping[t][i] = std::exp(-taus[t] * image.lambda[i]);

    struct Task {
        std::size_t layer, index;
        double x;
    };
    std::vector<Task> tasks;
    InverseResult result;
    result.function.components = r;
    result.function.layers.resize(config.layers.size());
    for (std::size_t m = 0; m < layer_points.size(); ++m) {
        const auto& medium = config.layers[m];
        for (std::size_t j = 0; j < layer_points[m].size(); ++j) {
            const double x = layer_points[m][j];
            const double lo = std::isfinite(medium.left) ? medium.left : -spec.x_max;
            const double hi = std::isfinite(medium.right) ? medium.right : spec.x_max;
            const double tol = 1e-12 * std::max(1.0, std::abs(x));
            if (x < lo - tol || x > hi + tol) {
                std::ostringstream os;
                os << "x = " << x << " lies outside layer " << m + 1 << " or beyond x_max";
                throw Error(ErrorCode::OutOfDomain, os.str());
            }
            tasks.push_back({m, j, x});
        }
        result.function.layers[m].x = layer_points[m];
        result.function.layers[m].values.assign(layer_points[m].size(), ComplexVector::Zero(r));
    }

    std::vector<double> extrap_err(tasks.size(), 0.0), spread(tasks.size(), 0.0), scale(tasks.size(), 0.0);
    parallel_for(tasks.size(), [&](std::size_t ti) {
        const Task& task = tasks[ti];
        ComplexMatrix terms = ComplexMatrix::Zero(static_cast<Eigen::Index>(count), r);
        for (std::size_t i = 0; i < count; ++i) {
            if (!data[i].ok) continue;
            const auto& ld = data[i].layers[task.layer];
            const double s = task.x - ld.center;
            if (ld.diagonal) {
                ComplexVector e(r);
                for (Eigen::Index c = 0; c < r; ++c)
                    e(c) = std::exp(kI * ld.kappa(c) * s) * ld.ka(c) + std::exp(-kI * ld.kappa(c) * s) * ld.kb(c);
                terms.row(static_cast<Eigen::Index>(i)) = (ld.v * e).transpose();
            } else {
                terms.row(static_cast<Eigen::Index>(i)) = (ld.exp.plus(s) * ld.a + ld.exp.minus(s) * ld.b).transpose();
            }
        }
        std::vector<ComplexVector> damped(taus.size(), ComplexVector::Zero(r));
        std::vector<cplx> column(count);
        for (std::size_t t = 0; t < taus.size(); ++t)
            for (Eigen::Index c = 0; c < r; ++c) {
                for (std::size_t i = 0; i < count; ++i) column[i] = damping[t][i] * terms(static_cast<Eigen::Index>(i), c);
                damped[t](c) = pairwise_sum(std::span<const cplx>(column));
            }
        const ComplexVector full = extrapolate_to_zero<ComplexVector>(taus, damped);
        const std::size_t k = taus.size();
        const ComplexVector lower = extrapolate_to_zero<ComplexVector>(
            std::span<const double>(taus).subspan(k - 2), std::span<const ComplexVector>(damped).subspan(k - 2));
        result.function.layers[task.layer].values[task.index] = full;
        extrap_err[ti] = (full - lower).cwiseAbs().maxCoeff();
        spread[ti] = (damped.front() - damped.back()).cwiseAbs().maxCoeff();
        scale[ti] = damped.back().cwiseAbs().maxCoeff();
    });

    double max_scale = 0.0;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        result.extrapolation_error = std::max(result.extrapolation_error, extrap_err[ti]);
        result.tau_spread = std::max(result.tau_spread, spread[ti]);
        max_scale = std::max(max_scale, scale[ti]);
    }
    if (max_scale > 0.0 && result.tau_spread > spec.tail_tolerance * max_scale) {
        std::ostringstream os;
        os << "damped integrals change by " << result.tau_spread << " across the tau schedule (scale " << max_scale
           << ")";
        throw Error(ErrorCode::NonConvergentTail, os.str());
    }
    return result;
}

std::vector<std::vector<double>> own_points(const ProblemConfig& config, const PiecewiseGridFunction& f, double x_max) {
    std::vector<std::vector<double>> pts(config.layers.size());
    for (std::size_t m = 0; m < config.layers.size(); ++m)
        for (double x : f.layers[m].x)
            if (std::abs(x) <= x_max * (1.0 + 1e-12)) pts[m].push_back(x);
    return pts;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
        throw Error(ErrorCode::InvalidConfig, "need 0 < lambda_min < lambda_max");
    if (lambda_steps < 1) throw Error(ErrorCode::InvalidConfig, "lambda_steps must be positive");
    if (tau_schedule.size() < 3) throw Error(ErrorCode::InvalidConfig, "tau_schedule needs at least three entries");
    for (std::size_t i = 0; i < tau_schedule.size(); ++i) {
        if (!(tau_schedule[i] > 0.0)) throw Error(ErrorCode::InvalidConfig, "tau values must be positive");
        if (i > 0 && !(tau_schedule[i] < tau_schedule[i - 1]))
            throw Error(ErrorCode::InvalidConfig, "tau_schedule must be strictly decreasing");
    }
    if (!(x_max > 0.0)) throw Error(ErrorCode::InvalidConfig, "x_max must be positive");
    if (xi_quadrature_order < 1) throw Error(ErrorCode::InvalidConfig, "xi_quadrature_order must be positive");
    if (!(tail_tolerance > 0.0)) throw Error(ErrorCode::InvalidConfig, "tail_tolerance must be positive");
}

QuadratureRule lambda_rule(const ProblemConfig& config, const QuadratureSpec& spec) {
    spec.validate();
    const double h_bound = std::numbers::pi / (4.0 * spec.x_max * max_inverse_a(config));
    const double range = spec.lambda_max - spec.lambda_min;
    const int panels = std::max(static_cast<int>(std::ceil(static_cast<double>(spec.lambda_steps) / kLambdaOrder)),
                                static_cast<int>(std::ceil(range / h_bound)));
    return composite_gauss_legendre(spec.lambda_min, spec.lambda_max, panels, kLambdaOrder);
}

std::vector<QuadratureRule> xi_rules(const ProblemConfig& config, const QuadratureSpec& spec) {
    spec.validate();
    double kmax = 0.0;
    for (const auto& layer : config.layers) kmax = std::max(kmax, spectral_norm(compute_wavenumber(layer, spec.lambda_max)));
    const double width = std::min(std::numbers::pi / kmax, 0.25);
    std::vector<QuadratureRule> rules;
    for (const auto& layer : config.layers) {
        const auto [a, b] = layer_extent(layer, spec.x_max);
        const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
        rules.push_back(composite_gauss_legendre(a, b, panels, spec.xi_quadrature_order));
    }
    return rules;
}

ComplexVector correction_terms(const ProblemConfig& config, const SpectralBasisAtLambda& basis,
                               const PiecewiseGridFunction& f) {
    if (config.mode != AxisMode::SemiAxis) throw Error(ErrorCode::WrongMode, "correction terms need a semi-axis problem");
    const auto r = config.r;
    const auto& first = f.layers.front().left;
    if (!first.has(1)) throw Error(ErrorCode::MissingTraces, "f and f' are required at l0");
    const auto& bc = config.boundary;
    ComplexVector out = bc.gamma0 * first.derivs[0] + bc.delta0 * first.derivs[1];

    ComplexMatrix rows(r, 2 * r);
    rows << basis.phi0, basis.psi0;
    for (std::size_t k = 1; k < config.layers.size(); ++k) {
        const auto& left = f.layers[k - 1].right;
        const auto& right = f.layers[k].left;
        if (!left.has(1) || !right.has(1)) {
            std::ostringstream os;
            os << "f and f' are required on both sides of interface " << k;
            throw Error(ErrorCode::MissingTraces, os.str());
        }
        const auto& ic = config.interfaces[k - 1];
        ComplexVector fk(2 * r), fk1(2 * r);
        fk << left.derivs[0], left.derivs[1];
        fk1 << right.derivs[0], right.derivs[1];
        const ComplexVector jump = ic.spectral_matrix(1) * fk1 - ic.spectral_matrix(0) * fk;
        const ComplexMatrix omega = omega_in_layer(basis, k - 1, config.interface_point(k));
        ComplexMatrix rho;
        try {
            rho = solve_linear(omega.transpose(), rows.transpose()).transpose();
        } catch (const Error&) {
            std::ostringstream os;
            os << "Omega is singular at interface " << k << ", lambda = " << basis.lambda;
            throw Error(ErrorCode::OmegaSingular, os.str());
        }
        const ComplexMatrix y = solve_linear(ic.conjugation_matrix(0, basis.lambda).transpose(), rho.transpose()).transpose();
        out += y * jump;
    }
    return out;
}

SpectralImage forward_transform(const ProblemConfig& config, const PiecewiseGridFunction& f,
                                const QuadratureSpec& spec) {
    if (config.mode != AxisMode::SemiAxis) throw Error(ErrorCode::WrongMode, "forward_transform needs a semi-axis problem");
    return forward_core(config, f, spec, false);
}

InverseResult inverse_transform(const ProblemConfig& config, const SpectralImage& image,
                                const std::vector<double>& x_points, const QuadratureSpec& spec) {
    if (config.mode != AxisMode::SemiAxis) throw Error(ErrorCode::WrongMode, "inverse_transform needs a semi-axis problem");
    return inverse_core(config, image, split_points(config, x_points), spec, false);
}

InverseResult inverse_transform_layers(const ProblemConfig& config, const SpectralImage& image,
                                       const std::vector<std::vector<double>>& layer_points,
                                       const QuadratureSpec& spec) {
    if (config.mode != AxisMode::SemiAxis) throw Error(ErrorCode::WrongMode, "inverse_transform needs a semi-axis problem");
    return inverse_core(config, image, layer_points, spec, false);
}

namespace {
void require_scalar_axis(const ProblemConfig& config) {
    if (config.mode != AxisMode::FullAxis || config.r != 1)
        throw Error(ErrorCode::WrongMode, "the axis transform needs a scalar full-axis problem");
}
}  // namespace

SpectralImage scalar_axis_forward(const ProblemConfig& config, const PiecewiseGridFunction& f,
                                  const QuadratureSpec& spec) {
    require_scalar_axis(config);
    return forward_core(config, f, spec, true);
}

InverseResult scalar_axis_inverse(const ProblemConfig& config, const SpectralImage& image,
                                  const std::vector<double>& x_points, const QuadratureSpec& spec) {
    require_scalar_axis(config);
    return inverse_core(config, image, split_points(config, x_points), spec, true);
}

InverseResult scalar_axis_inverse_layers(const ProblemConfig& config, const SpectralImage& image,
                                         const std::vector<std::vector<double>>& layer_points,
                                         const QuadratureSpec& spec) {
    require_scalar_axis(config);
    return inverse_core(config, image, layer_points, spec, true);
}

void compare_functions(const PiecewiseGridFunction& a, const PiecewiseGridFunction& b,
                       std::vector<double>& layer_l2, std::vector<double>& layer_max) {
    if (a.layers.size() != b.layers.size()) throw Error(ErrorCode::DimensionMismatch, "layer counts differ");
    layer_l2.assign(a.layers.size(), 0.0);
    layer_max.assign(a.layers.size(), 0.0);
    for (std::size_t m = 0; m < a.layers.size(); ++m) {
        const auto& la = a.layers[m];
        const auto& lb = b.layers[m];
        if (la.x.size() != lb.x.size()) throw Error(ErrorCode::DimensionMismatch, "sample counts differ");
        std::vector<double> e(la.x.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = (la.values[i] - lb.values[i]).norm();
            layer_max[m] = std::max(layer_max[m], e[i]);
        }
        std::vector<double> pieces;
        for (std::size_t i = 0; i + 1 < e.size(); ++i)
            pieces.push_back(0.5 * (e[i] * e[i] + e[i + 1] * e[i + 1]) * (la.x[i + 1] - la.x[i]));
        layer_l2[m] = std::sqrt(pairwise_sum(std::span<const double>(pieces)));
    }
}

RoundtripReport roundtrip_report(const ProblemConfig& config, const PiecewiseGridFunction& f,
                                 const QuadratureSpec& spec) {
    const bool axis = config.mode == AxisMode::FullAxis;
    const SpectralImage image = axis ? scalar_axis_forward(config, f, spec) : forward_transform(config, f, spec);
    const auto pts = own_points(config, f, spec.x_max);
    InverseResult inv = axis ? scalar_axis_inverse_layers(config, image, pts, spec)
                             : inverse_transform_layers(config, image, pts, spec);

    PiecewiseGridFunction expected;
    expected.components = f.components;
    expected.layers.resize(f.layers.size());
    for (std::size_t m = 0; m < f.layers.size(); ++m)
        for (std::size_t i = 0; i < f.layers[m].x.size(); ++i)
            if (std::abs(f.layers[m].x[i]) <= spec.x_max * (1.0 + 1e-12)) {
                expected.layers[m].x.push_back(f.layers[m].x[i]);
                expected.layers[m].values.push_back(f.layers[m].values[i]);
            }

    RoundtripReport report;
    compare_functions(inv.function, expected, report.layer_l2, report.layer_max);
    double sq = 0.0;
    for (std::size_t m = 0; m < report.layer_l2.size(); ++m) {
        sq += report.layer_l2[m] * report.layer_l2[m];
        report.max = std::max(report.max, report.layer_max[m]);
    }
    report.l2 = std::sqrt(sq);
    report.extrapolation_error = inv.extrapolation_error;
    for (bool v : image.valid) report.skipped_lambda += v ? 0 : 1;
    report.reconstructed = std::move(inv.function);
    return report;
}

}  // namespace mft
