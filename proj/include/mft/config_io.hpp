#pragma once

#include <string>

#include "mft/problem.hpp"
#include "mft/transform_engine.hpp"

namespace mft {

struct ConfigBundle {
    ProblemConfig problem;
    QuadratureSpec quadrature;
};

// YAML configuration document:
//
//   problem:    {r: 2, mode: semi-axis}          # or full-axis
//   layers:
//     - {left: 0, right: 2, a2: [1, 0, 0, 2], g2: 0}
//     - {left: 2, right: inf, a2: [[4, 0], [0, 1]], g2: 0}
//   interfaces:
//     - ideal_contact: true
//   boundary: dirichlet                          # neumann, or alpha0/beta0/gamma0/delta0
//   quadrature: {lambda_max: 40, lambda_steps: 2000, tau_schedule: [1e-2, 5e-3, 2.5e-3], x_max: 12}
//
// A matrix is a flat row-major list of r*r entries, a nested r x r list, or a
// single number c meaning c*E. Entries are numbers or [re, im] pairs.
// Interface blocks are keyed alpha11 ... delta22 (row, side); absent blocks
// are zero. `ideal_contact: true` expands to beta11 = beta12 = E,
// alpha21 = A_k^2, alpha22 = A_{k+1}^2 and zero for everything else.
// Errors carry the line of the offending node.
ConfigBundle parse_config_string(const std::string& text);
ConfigBundle parse_config_file(const std::string& path);

// Long-form document that parses back to the same configuration.
std::string emit_config(const ConfigBundle& bundle);

}  // namespace mft
