#pragma once

#include <vector>

#include "mft/grid_function.hpp"
#include "mft/problem.hpp"
#include "mft/transform_engine.hpp"

namespace mft {

// (B f)_j = A_j^2 f_j'' + Gamma_j^2 f_j layer by layer. Second derivatives use
// the 5-point central stencil inside a layer and 6-point one-sided stencils
// near its edges. Endpoint traces of Bf are formed from the traces of f when
// f'' (and f''' for the derivative trace) are supplied.
PiecewiseGridFunction apply_B(const ProblemConfig& config, const PiecewiseGridFunction& f);

struct IdentityOptions {
    // Negative control: drop the boundary term from the right-hand side.
    bool include_boundary_term = true;
    double conjugation_tolerance = 1e-8;
};

struct IdentityReport {
    std::vector<double> lambda;
    std::vector<double> residual;  // max |LHS - RHS| over components; NaN where skipped
    double conjugation_residual = 0.0;
    double correction_norm = 0.0;  // interface/boundary correction size in the image of f

    double max_residual(double lambda_limit) const;
};

// Interface relations that make the identity exact:
//   S_k1 F_k - N_k1 G_k = S_k2 F_{k+1} - N_k2 G_{k+1}
// with F = (f; f'), G = ((Bf); (Bf)'), S the lambda-free and N the
// lambda^2 part of the conjugation matrices. Returns the largest relative
// mismatch over the interfaces.
double conjugation_mismatch(const ProblemConfig& config, const PiecewiseGridFunction& f);

// Boundary term at l0:
//   (beta0 f + alpha0 f') - (gamma0 (A^2 f'' + Gamma^2 f) + delta0 (A^2 f''' + Gamma^2 f'))
ComplexVector boundary_term(const ProblemConfig& config, const PiecewiseGridFunction& f);

// Compares F[Bf](lambda) with -lambda^2 F[f](lambda) - boundary_term on the
// lambda grid of `spec`. Throws ConjugationViolated if f breaks the interface
// relations above.
IdentityReport verify_basic_identity(const ProblemConfig& config, const PiecewiseGridFunction& f,
                                     const QuadratureSpec& spec, const IdentityOptions& options = {});

// Multiplies an image by e^{-lambda^2 t}.
SpectralImage heat_image(const SpectralImage& image, double t);

// u(., t) for u_t = B u with u(., 0) = f0: forward transform, decay, inverse.
InverseResult solve_heat(const ProblemConfig& config, const PiecewiseGridFunction& f0, double t,
                         const std::vector<double>& x_points, const QuadratureSpec& spec);
InverseResult solve_heat_layers(const ProblemConfig& config, const PiecewiseGridFunction& f0, double t,
                                const std::vector<std::vector<double>>& layer_points, const QuadratureSpec& spec);

// Crank-Nicolson reference for u_t = B u on [l0, x_end], x_end the last sample
// of f0. Each interface carries two nodes (one per side) tied by the
// conjugation rows with second-order one-sided derivatives; the boundary row
// sits at l0 and u = 0 at x_end. Requires gamma = delta = 0 everywhere and
// dt <= dx^2 / (2 max eig A^2) (UnstableStep otherwise).
PiecewiseGridFunction fd_reference(const ProblemConfig& config, const PiecewiseGridFunction& f0, double t,
                                   double dx, double dt);

}  // namespace mft
