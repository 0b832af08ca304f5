#include "mft/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mft/config_io.hpp"
#include "mft/grid_function.hpp"
#include "mft/nonseparated_transform.hpp"
#include "mft/operational_calculus.hpp"
#include "mft/spectral_basis.hpp"
#include "mft/test_functions.hpp"
#include "mft/transform_engine.hpp"

namespace mft::cli {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::InvalidConfig:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::Io:
            return kConfigError;
        case ErrorCode::RegularityViolation:
            return kRegularityViolation;
        default:
            return kNumericalFailure;
    }
}

namespace {

struct CommonOptions {
    std::string config;
    double lambda_max = std::numeric_limits<double>::quiet_NaN();
    int lambda_steps = 0;
    std::string tau;
    double x_max = std::numeric_limits<double>::quiet_NaN();
    std::string points;
    double sample_step = 0.01;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_config = true) {
    auto* c = cmd->add_option("--config", o.config, "YAML configuration file");
    if (needs_config) c->required();
    cmd->add_option("--lambda-max", o.lambda_max, "truncation of the spectral integral");
    cmd->add_option("--lambda-steps", o.lambda_steps, "minimum number of lambda nodes");
    cmd->add_option("--tau", o.tau, "comma-separated decreasing tau schedule");
    cmd->add_option("--xmax", o.x_max, "truncation of the unbounded layer");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError("list", "cannot parse '" + item + "' as a number");
        }
    }
    return out;
}

ConfigBundle load_bundle(const CommonOptions& o) {
    ConfigBundle b = parse_config_file(o.config);
    auto& q = b.quadrature;
    if (std::isfinite(o.lambda_max)) q.lambda_max = o.lambda_max;
    if (o.lambda_steps > 0) q.lambda_steps = o.lambda_steps;
    if (!o.tau.empty()) q.tau_schedule = parse_list(o.tau);
    if (std::isfinite(o.x_max)) q.x_max = o.x_max;
    q.validate();
    return b;
}

// "a:b:n" (n evenly spaced points) or "x1,x2,..."; empty means a default grid.
std::vector<double> resolve_points(const std::string& text, const ConfigBundle& b) {
    if (text.empty()) {
        const bool axis = b.problem.mode == AxisMode::FullAxis;
        const double a = axis ? -b.quadrature.x_max : b.problem.l0();
        const double z = b.quadrature.x_max;
        const int n = 241;
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = a + (z - a) * i / (n - 1);
        return xs;
    }
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string a, z, n;
        std::getline(ss, a, ':');
        std::getline(ss, z, ':');
        std::getline(ss, n, ':');
        const double lo = std::stod(a), hi = std::stod(z);
        const int count = std::stoi(n);
        if (count < 1) throw CLI::ValidationError("--points", "count must be positive");
        std::vector<double> xs(count);
        for (int i = 0; i < count; ++i) xs[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        return xs;
    }
    return parse_list(text);
}

PiecewiseGridFunction load_function(const std::string& input, const ConfigBundle& b, double h) {
    if (std::filesystem::exists(input)) {
        PiecewiseGridFunction f = read_function_csv_file(input, b.problem);
        derive_traces(f, b.problem, 3);
        return f;
    }
    return sample(b.problem, parse_function(input, b.problem.r), b.quadrature.x_max, h);
}

void write_matrix_header(std::ostream& out, const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    for (Eigen::Index i = 1; i <= rows; ++i)
        for (Eigen::Index j = 1; j <= cols; ++j) out << ',' << name << "_re_" << i << j << ',' << name << "_im_" << i << j;
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << m(i, j).real() << ',' << m(i, j).imag();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    out << std::setprecision(17);
    return out;
}

int cmd_basis(const CommonOptions& o, const std::vector<double>& lambdas, const std::string& output, std::ostream& log) {
    const ConfigBundle b = load_bundle(o);
    const auto& c = b.problem;
    const bool axis = c.mode == AxisMode::FullAxis;
    const std::vector<double> xs = resolve_points(o.points, b);
    std::ofstream out = open_output(output);
    const Eigen::Index r = c.r;
    out << "lambda,x";
    write_matrix_header(out, "u", axis ? 1 : r, axis ? 2 : r);
    write_matrix_header(out, "ustar", axis ? 2 : r, axis ? 1 : r);
    out << '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t degenerate = 0;
    for (double lambda : lambdas) {
        SpectralBasisAtLambda basis;
        try {
            basis = build_basis(c, lambda);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateBoundary) throw;
            ++degenerate;
            log << "lambda = " << lambda << " skipped: " << e.what() << '\n';
            continue;
        }
        for (double x : xs) {
            const ComplexMatrix u = axis ? eval_axis_u(basis, c, x) : eval_u(basis, c, x);
            ComplexMatrix us;
            try {
                us = axis ? eval_axis_u_star(basis, c, x) : eval_u_star(basis, c, x);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::OmegaSingular) throw;
                us = ComplexMatrix::Constant(axis ? 2 : r, axis ? 1 : r, cplx(nan, nan));
            }
            out << lambda << ',' << x;
            write_matrix(out, u);
            write_matrix(out, us);
            out << '\n';
        }
    }
    log << "wrote " << lambdas.size() - degenerate << " lambda values x " << xs.size() << " points to " << output << '\n';
    return kSuccess;
}

int cmd_forward(const CommonOptions& o, const std::string& input, const std::string& output, std::ostream& log) {
    const ConfigBundle b = load_bundle(o);
    const PiecewiseGridFunction f = load_function(input, b, o.sample_step);
    const SpectralImage img = b.problem.mode == AxisMode::FullAxis ? scalar_axis_forward(b.problem, f, b.quadrature)
                                                                   : forward_transform(b.problem, f, b.quadrature);
    write_csv_file(output, img);
    std::size_t skipped = 0;
    for (bool v : img.valid) skipped += v ? 0 : 1;
    log << "lambda_nodes " << img.size() << "\nskipped " << skipped << "\ntail_estimate " << img.tail_estimate
        << "\ncorrection_norm " << img.correction_norm << '\n';
    return kSuccess;
}

int cmd_inverse(const CommonOptions& o, const std::string& input, const std::string& output, std::ostream& log) {
    const ConfigBundle b = load_bundle(o);
    const SpectralImage img = read_image_csv_file(input);
    const std::vector<double> xs = resolve_points(o.points, b);
    const InverseResult res = b.problem.mode == AxisMode::FullAxis
                                  ? scalar_axis_inverse(b.problem, img, xs, b.quadrature)
                                  : inverse_transform(b.problem, img, xs, b.quadrature);
    write_csv_file(output, res.function);
    log << "points " << res.function.sample_count() << "\nextrapolation_error " << res.extrapolation_error
        << "\ntau_spread " << res.tau_spread << '\n';
    return kSuccess;
}

int cmd_roundtrip(const CommonOptions& o, const std::string& input, const std::string& output, double tolerance,
                  std::ostream& log) {
    const ConfigBundle b = load_bundle(o);
    const PiecewiseGridFunction f = load_function(input, b, o.sample_step);
    const RoundtripReport rep = roundtrip_report(b.problem, f, b.quadrature);
    log << std::setprecision(6);
    log << "l2 " << rep.l2 << "\nmax " << rep.max << '\n';
    for (std::size_t m = 0; m < rep.layer_l2.size(); ++m)
        log << "layer " << m + 1 << " l2 " << rep.layer_l2[m] << " max " << rep.layer_max[m] << '\n';
    log << "extrapolation_error " << rep.extrapolation_error << "\nskipped_lambda " << rep.skipped_lambda << '\n';
    if (!output.empty()) write_csv_file(output, rep.reconstructed);
    if (tolerance > 0.0 && !(rep.l2 <= tolerance)) {
        log << "FAIL: l2 " << rep.l2 << " exceeds " << tolerance << '\n';
        return kNumericalFailure;
    }
    return kSuccess;
}

int cmd_identity(const CommonOptions& o, const std::string& input, const std::string& output, double lambda_limit,
                 bool no_boundary, double tolerance, std::ostream& log) {
    const ConfigBundle b = load_bundle(o);
    const PiecewiseGridFunction f = load_function(input, b, o.sample_step);
    IdentityOptions opts;
    opts.include_boundary_term = !no_boundary;
    const IdentityReport rep = verify_basic_identity(b.problem, f, b.quadrature, opts);
    std::ofstream out = open_output(output);
    out << "lambda,residual\n";
    for (std::size_t i = 0; i < rep.lambda.size(); ++i) out << rep.lambda[i] << ',' << rep.residual[i] << '\n';
    const double worst = rep.max_residual(lambda_limit);
    log << "max_residual " << worst << " (lambda <= " << lambda_limit << ")\nconjugation_residual "
        << rep.conjugation_residual << "\ncorrection_norm " << rep.correction_norm << '\n';
    if (tolerance > 0.0 && !(worst <= tolerance)) {
        log << "FAIL: residual " << worst << " exceeds " << tolerance << '\n';
        return kNumericalFailure;
    }
    return kSuccess;
}

int cmd_heat(const CommonOptions& o, const std::string& input, const std::string& output, double t, bool fd,
             double dx, double dt, double tolerance, std::ostream& log) {
    const ConfigBundle b = load_bundle(o);
    const PiecewiseGridFunction f0 = load_function(input, b, o.sample_step);
    if (!fd) {
        const InverseResult res = solve_heat(b.problem, f0, t, resolve_points(o.points, b), b.quadrature);
        write_csv_file(output, res.function);
        log << "points " << res.function.sample_count() << "\nextrapolation_error " << res.extrapolation_error << '\n';
        return kSuccess;
    }
    if (!(dt > 0.0)) {
        double a2max = 0.0;
        for (const auto& layer : b.problem.layers) {
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(layer.a2, Eigen::EigenvaluesOnly);
            a2max = std::max(a2max, es.eigenvalues().maxCoeff());
        }
        dt = 0.9 * dx * dx / (2.0 * a2max);
    }
    const PiecewiseGridFunction ref = fd_reference(b.problem, f0, t, dx, dt);
    std::vector<std::vector<double>> pts;
    for (const auto& layer : ref.layers) pts.push_back(layer.x);
    const InverseResult res = solve_heat_layers(b.problem, f0, t, pts, b.quadrature);
    write_csv_file(output, res.function);
    std::vector<double> l2, mx;
    compare_functions(res.function, ref, l2, mx);
    double worst = 0.0;
    for (double v : mx) worst = std::max(worst, v);
    log << "points " << res.function.sample_count() << "\nfd_max_difference " << worst << "\nfd_dx " << dx
        << "\nfd_dt " << dt << '\n';
    if (tolerance > 0.0 && !(worst <= tolerance)) {
        log << "FAIL: difference " << worst << " exceeds " << tolerance << '\n';
        return kNumericalFailure;
    }
    return kSuccess;
}

int cmd_poisson(int dimension, const std::string& input, const std::string& heights, const std::string& radii,
                const std::string& output, std::ostream& log) {
    const VectorFunction f = parse_function(input, 1);
    const ScalarFunction g = f.components.front();
    double extent = 12.0;
    for (const char* key : {"sigma", "w"})
        if (g.params.count(key)) extent = std::max(extent, 12.0 * g.params.at(key));
    RadialProfile profile{dimension, [g](double rho) { return g(rho); }, extent};
    std::ofstream out = open_output(output);
    out << "x,y,u\n";
    std::size_t rows = 0;
    for (double x : parse_list(heights))
        for (double y : parse_list(radii)) {
            out << x << ',' << y << ',' << poisson_halfspace(profile, x, y) << '\n';
            ++rows;
        }
    log << "rows " << rows << '\n';
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Matrix Fourier transform with discontinuous coefficients"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    CommonOptions common;
    std::string input, output;
    std::vector<double> lambdas{1.0};
    double tolerance = 0.0, lambda_limit = 10.0, time = 0.0, dx = 0.01, dt = 0.0;
    bool no_boundary = false, fd = false;
    int dimension = 3;
    std::string heights = "0.001,0.1,1", radii = "0,0.5,1";

    auto* basis = app.add_subcommand("basis", "sample the kernels u and u* on an x grid");
    add_common(basis, common);
    basis->add_option("--lambda", lambdas, "spectral parameter values")->delimiter(',');
    basis->add_option("--points", common.points, "a:b:n or x1,x2,...");
    basis->add_option("--output", output, "CSV path")->required();

    auto* forward = app.add_subcommand("forward", "direct transform of a function");
    add_common(forward, common);
    forward->add_option("--input", input, "CSV file or catalog function")->required();
    forward->add_option("--output", output, "image CSV path")->required();
    forward->add_option("--sample-step", common.sample_step, "grid step for catalog functions");

    auto* inverse = app.add_subcommand("inverse", "inverse transform of an image");
    add_common(inverse, common);
    inverse->add_option("--input", input, "image CSV")->required();
    inverse->add_option("--output", output, "function CSV path")->required();
    inverse->add_option("--points", common.points, "a:b:n or x1,x2,...");

    auto* roundtrip = app.add_subcommand("roundtrip", "forward then inverse; print error summary");
    add_common(roundtrip, common);
    roundtrip->add_option("--input", input, "CSV file or catalog function")->required();
    roundtrip->add_option("--output", output, "optional CSV of the reconstruction");
    roundtrip->add_option("--tolerance", tolerance, "fail (exit 1) if the L2 error exceeds this");
    roundtrip->add_option("--sample-step", common.sample_step, "grid step for catalog functions");

    auto* identity_cmd = app.add_subcommand("identity", "check F[Bf] against -lambda^2 F[f] minus the boundary term");
    add_common(identity_cmd, common);
    identity_cmd->add_option("--input", input, "CSV file or catalog function")->required();
    identity_cmd->add_option("--output", output, "residual CSV path")->required();
    identity_cmd->add_option("--lambda-limit", lambda_limit, "report the maximum residual up to this lambda");
    identity_cmd->add_flag("--no-boundary-term", no_boundary, "negative control: drop the boundary term");
    identity_cmd->add_option("--tolerance", tolerance, "fail (exit 1) if the residual exceeds this");
    identity_cmd->add_option("--sample-step", common.sample_step, "grid step for catalog functions");

    auto* heat = app.add_subcommand("heat", "solve u_t = B u by the transform");
    add_common(heat, common);
    heat->add_option("--input", input, "initial data: CSV file or catalog function")->required();
    heat->add_option("--output", output, "solution CSV path")->required();
    heat->add_option("--time", time, "time t >= 0")->required()->check(CLI::NonNegativeNumber);
    heat->add_option("--points", common.points, "a:b:n or x1,x2,...");
    heat->add_flag("--fd", fd, "also run the finite-difference reference and report the difference");
    heat->add_option("--dx", dx, "finite-difference step");
    heat->add_option("--dt", dt, "finite-difference time step (default 0.9 of the stability bound)");
    heat->add_option("--tolerance", tolerance, "fail (exit 1) if the difference exceeds this");
    heat->add_option("--sample-step", common.sample_step, "grid step for catalog functions");

    auto* poisson = app.add_subcommand("poisson", "half-space Poisson integral of radial boundary data");
    poisson->add_option("--dimension", dimension, "boundary dimension n >= 2");
    poisson->add_option("--input", input, "catalog function of the radius, e.g. gauss_bump:sigma=2")->required();
    poisson->add_option("--heights", heights, "comma-separated x > 0");
    poisson->add_option("--radii", radii, "comma-separated |y|");
    poisson->add_option("--output", output, "CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success&) {
        // --help on the app or a subcommand
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*basis) return cmd_basis(common, lambdas, output, out);
        if (*forward) return cmd_forward(common, input, output, out);
        if (*inverse) return cmd_inverse(common, input, output, out);
        if (*roundtrip) return cmd_roundtrip(common, input, output, tolerance, out);
        if (*identity_cmd)
            return cmd_identity(common, input, output, lambda_limit, no_boundary, tolerance, out);
        if (*heat) return cmd_heat(common, input, output, time, fd, dx, dt, tolerance, out);
        if (*poisson) return cmd_poisson(dimension, input, heights, radii, output, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
    err << "usage error: unknown command\n";
    return kUsage;
}

}  // namespace mft::cli
