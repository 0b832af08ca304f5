#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "mft/matrix_core.hpp"
#include "mft/problem.hpp"

namespace mft {

// One-sided limits f, f', f'', ... at a layer endpoint; derivs[d] is f^(d).
struct Trace {
    std::vector<ComplexVector> derivs;

    bool has(int order) const { return static_cast<int>(derivs.size()) > order; }
};

struct LayerSamples {
    std::vector<double> x;              // strictly increasing, inside the layer
    std::vector<ComplexVector> values;  // one r-vector per abscissa
    Trace left;                         // limit from inside at the left endpoint
    Trace right;                        // limit from inside at the right endpoint (bounded layers)
};

// A vector-valued function sampled layer by layer.
struct PiecewiseGridFunction {
    Eigen::Index components = 1;
    std::vector<LayerSamples> layers;

    std::size_t sample_count() const;
    // Checks sample ordering, sizes and finiteness against a configuration.
    void validate(const ProblemConfig& config) const;
};

// A transform image sampled on a lambda grid. `weights` holds the quadrature
// weights of the grid when it came from a known rule; `valid` flags grid points
// skipped because the kernels were undefined there.
struct SpectralImage {
    std::vector<double> lambda;
    std::vector<ComplexVector> values;
    std::vector<double> weights;
    std::vector<bool> valid;
    double tail_estimate = 0.0;      // xi truncation residual bound (max over lambda)
    double correction_norm = 0.0;    // max |interface + boundary correction terms|

    Eigen::Index channels() const { return values.empty() ? 0 : values.front().size(); }
    std::size_t size() const { return lambda.size(); }
};

// Local Lagrange interpolation (up to `order` + 1 nearest samples) inside the
// layer that contains x.
ComplexVector interpolate(const PiecewiseGridFunction& f, const ProblemConfig& config, double x,
                          int order = 7);
ComplexVector interpolate_in_layer(const LayerSamples& layer, double x, int order = 7);

// Fills missing endpoint traces up to `max_order` with one-sided 6-point
// finite differences of the samples.
void derive_traces(PiecewiseGridFunction& f, const ProblemConfig& config, int max_order);

// Distributes query points over layers. A point equal to an interface point is
// assigned to the right layer unless it occurs twice, in which case the first
// occurrence is the left limit.
std::vector<std::vector<double>> split_points(const ProblemConfig& config, const std::vector<double>& xs);

// CSV: header "x,re_1,im_1,...", one row per sample, 17 significant digits.
void write_csv(std::ostream& out, const PiecewiseGridFunction& f);
void write_csv(std::ostream& out, const SpectralImage& image);
PiecewiseGridFunction read_function_csv(std::istream& in, const ProblemConfig& config);
SpectralImage read_image_csv(std::istream& in);

void write_csv_file(const std::string& path, const PiecewiseGridFunction& f);
void write_csv_file(const std::string& path, const SpectralImage& image);
PiecewiseGridFunction read_function_csv_file(const std::string& path, const ProblemConfig& config);
SpectralImage read_image_csv_file(const std::string& path);

}  // namespace mft
