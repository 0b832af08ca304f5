#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mft/grid_function.hpp"
#include "mft/problem.hpp"

namespace mft {

// Closed-form scalar test function with analytic derivatives of any order.
//   gauss_bump:  amp * exp(-(x-c)^2 / (2 sigma^2))
//   odd_gauss:   amp * (x-c) * exp(-(x-c)^2 / (2 sigma^2))
//   sine_packet: amp * sin(k (x-c)) * exp(-(x-c)^2 / (2 sigma^2))
//   poly_cutoff: amp * (1 - s^2)^4 for |s| < 1, s = (x-c)/w, zero outside
//   zero:        0
struct ScalarFunction {
    std::string name;
    std::map<std::string, double> params;

    double derivative(double x, int order) const;
    double operator()(double x) const { return derivative(x, 0); }
};

// One scalar function per component.
struct VectorFunction {
    std::vector<ScalarFunction> components;

    Eigen::Index size() const { return static_cast<Eigen::Index>(components.size()); }
    ComplexVector derivative(double x, int order) const;
};

// "gauss_bump:c=5,sigma=0.4"; several components separated by ';'.
// A single component is broadcast to all r components.
VectorFunction parse_function(const std::string& text, Eigen::Index r);
std::vector<std::string> catalog_names();

// Samples f on a uniform grid of step about h in every layer (the unbounded
// layer is cut at x_max, and at -x_max on the full axis). Traces at finite
// layer endpoints are filled analytically up to trace_order.
PiecewiseGridFunction sample(const ProblemConfig& config, const VectorFunction& f, double x_max, double h = 0.01,
                             int trace_order = 3);
// Same with a separate function for every layer (piecewise data).
PiecewiseGridFunction sample_layers(const ProblemConfig& config, const std::vector<VectorFunction>& per_layer,
                                    double x_max, double h = 0.01, int trace_order = 3);

// Probabilists' Hermite polynomial He_n(t).
double hermite_he(int n, double t);

}  // namespace mft
