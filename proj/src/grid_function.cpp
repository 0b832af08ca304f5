#include "mft/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "mft/errors.hpp"
#include "mft/finite_difference.hpp"

namespace mft {

std::size_t PiecewiseGridFunction::sample_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.x.size();
    return n;
}

void PiecewiseGridFunction::validate(const ProblemConfig& config) const {
    if (layers.size() != config.layers.size()) {
        std::ostringstream os;
        os << "function has " << layers.size() << " layers, configuration has " << config.layers.size();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    for (std::size_t m = 0; m < layers.size(); ++m) {
        const auto& layer = layers[m];
        const auto& medium = config.layers[m];
        if (layer.x.size() != layer.values.size())
            throw Error(ErrorCode::DimensionMismatch, "abscissa and value counts differ");
        if (medium.bounded() && layer.x.size() < 2)
            throw Error(ErrorCode::GridTooCoarse, "a bounded layer needs at least two samples");
        for (std::size_t i = 0; i < layer.x.size(); ++i) {
            if (i > 0 && !(layer.x[i] > layer.x[i - 1]))
                throw Error(ErrorCode::InvalidConfig, "sample abscissae must be strictly increasing");
            if (layer.x[i] < medium.left || layer.x[i] > medium.right)
                throw Error(ErrorCode::OutOfDomain, "sample outside its layer");
            if (layer.values[i].size() != components)
                throw Error(ErrorCode::DimensionMismatch, "sample has the wrong number of components");
            if (!layer.values[i].allFinite()) throw Error(ErrorCode::InvalidConfig, "non-finite sample");
        }
        for (const Trace* t : {&layer.left, &layer.right})
            for (const auto& d : t->derivs)
                if (d.size() != components || !d.allFinite())
                    throw Error(ErrorCode::InvalidConfig, "trace has wrong size or is not finite");
    }
}

ComplexVector interpolate_in_layer(const LayerSamples& layer, double x, int order) {
    const std::size_t n = layer.x.size();
    if (n == 0) throw Error(ErrorCode::GridTooCoarse, "cannot interpolate an empty layer");
    if (n == 1) return layer.values.front();
    const std::size_t width = std::min<std::size_t>(order + 1, n);
    const auto it = std::lower_bound(layer.x.begin(), layer.x.end(), x);
    std::size_t i = static_cast<std::size_t>(it - layer.x.begin());
    if (i < n && layer.x[i] == x) return layer.values[i];
    // center the stencil between x[i-1] and x[i]
    std::size_t start = i >= width / 2 ? i - width / 2 : 0;
    start = std::min(start, n - width);
    ComplexVector out = ComplexVector::Zero(layer.values.front().size());
    for (std::size_t a = start; a < start + width; ++a) {
        double w = 1.0;
        for (std::size_t b = start; b < start + width; ++b)
            if (b != a) w *= (x - layer.x[b]) / (layer.x[a] - layer.x[b]);
        out += w * layer.values[a];
    }
    return out;
}

ComplexVector interpolate(const PiecewiseGridFunction& f, const ProblemConfig& config, double x, int order) {
    return interpolate_in_layer(f.layers.at(config.layer_index(x)), x, order);
}

void derive_traces(PiecewiseGridFunction& f, const ProblemConfig& config, int max_order) {
    constexpr std::size_t kWidth = 6;
    for (std::size_t m = 0; m < f.layers.size(); ++m) {
        auto& layer = f.layers[m];
        const auto& medium = config.layers[m];
        const std::size_t n = layer.x.size();
        auto fill = [&](Trace& trace, double x0, bool at_left) {
            if (static_cast<int>(trace.derivs.size()) > max_order) return;
            if (n < kWidth) throw Error(ErrorCode::GridTooCoarse, "need six samples to derive traces");
            const std::size_t start = at_left ? 0 : n - kWidth;
            const std::span<const double> xs(layer.x.data() + start, kWidth);
            const auto w = fornberg_weights(x0, xs, max_order);
            const std::size_t have = trace.derivs.size();
            for (int d = static_cast<int>(have); d <= max_order; ++d) {
                ComplexVector v = ComplexVector::Zero(f.components);
                for (std::size_t i = 0; i < kWidth; ++i) v += w[d][i] * layer.values[start + i];
                trace.derivs.push_back(v);
            }
        };
        if (std::isfinite(medium.left)) fill(layer.left, medium.left, true);
        if (std::isfinite(medium.right)) fill(layer.right, medium.right, false);
    }
}

std::vector<std::vector<double>> split_points(const ProblemConfig& config, const std::vector<double>& xs) {
    std::vector<std::vector<double>> out(config.layers.size());
    std::map<double, int> seen;
    for (double x : xs) {
        std::size_t j = config.layer_index(x);
        if (j > 0 && x == config.layers[j].left) {
            if (std::count(xs.begin(), xs.end(), x) > 1 && seen[x]++ == 0) j -= 1;
        }
        out[j].push_back(x);
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    return out;
}

namespace {

void write_header(std::ostream& out, const char* first, Eigen::Index components) {
    out << first;
    for (Eigen::Index c = 1; c <= components; ++c) out << ",re_" << c << ",im_" << c;
    out << '\n';
}

void write_row(std::ostream& out, double key, const ComplexVector& v) {
    out << key;
    for (Eigen::Index c = 0; c < v.size(); ++c) out << ',' << v(c).real() << ',' << v(c).imag();
    out << '\n';
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

double parse_number(const std::string& cell, std::size_t line) {
    std::string s = cell;
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    if (s == "nan" || s == "NaN" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) {
        std::ostringstream os;
        os << "line " << line << ": cannot parse '" << cell << "' as a number";
        throw Error(ErrorCode::ParseError, os.str());
    }
    return v;
}

CsvTable read_table(std::istream& in, const char* first) {
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (table.header.empty()) {
            table.header = cells;
            if (cells.empty() || cells.front() != first || cells.size() % 2 != 1) {
                std::ostringstream os;
                os << "line " << lineno << ": expected header '" << first << ",re_1,im_1,...'";
                throw Error(ErrorCode::ParseError, os.str());
            }
            continue;
        }
        if (cells.size() != table.header.size()) {
            std::ostringstream os;
            os << "line " << lineno << ": expected " << table.header.size() << " columns, got " << cells.size();
            throw Error(ErrorCode::ParseError, os.str());
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_number(c, lineno));
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw Error(ErrorCode::ParseError, "empty CSV document");
    return table;
}

ComplexVector row_values(const std::vector<double>& row) {
    const Eigen::Index comps = static_cast<Eigen::Index>((row.size() - 1) / 2);
    ComplexVector v(comps);
    for (Eigen::Index c = 0; c < comps; ++c) v(c) = cplx(row[1 + 2 * c], row[2 + 2 * c]);
    return v;
}

}  // namespace

void write_csv(std::ostream& out, const PiecewiseGridFunction& f) {
    const auto old = out.precision(17);
    write_header(out, "x", f.components);
    for (const auto& layer : f.layers)
        for (std::size_t i = 0; i < layer.x.size(); ++i) write_row(out, layer.x[i], layer.values[i]);
    out.precision(old);
}

void write_csv(std::ostream& out, const SpectralImage& image) {
    const auto old = out.precision(17);
    write_header(out, "lambda", image.channels());
    for (std::size_t i = 0; i < image.size(); ++i) {
        if (!image.valid.empty() && !image.valid[i]) {
            ComplexVector nan = ComplexVector::Constant(
                image.channels(), cplx(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()));
            write_row(out, image.lambda[i], nan);
        } else {
            write_row(out, image.lambda[i], image.values[i]);
        }
    }
    out.precision(old);
}

PiecewiseGridFunction read_function_csv(std::istream& in, const ProblemConfig& config) {
    const CsvTable table = read_table(in, "x");
    PiecewiseGridFunction f;
    f.components = static_cast<Eigen::Index>((table.header.size() - 1) / 2);
    f.layers.resize(config.layers.size());
    std::vector<double> xs;
    for (const auto& row : table.rows) xs.push_back(row[0]);
    std::map<double, int> seen;
    for (const auto& row : table.rows) {
        const double x = row[0];
        if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, "non-finite abscissa");
        std::size_t j = config.layer_index(x);
        if (j > 0 && x == config.layers[j].left && std::count(xs.begin(), xs.end(), x) > 1 && seen[x]++ == 0)
            j -= 1;
        f.layers[j].x.push_back(x);
        f.layers[j].values.push_back(row_values(row));
    }
    return f;
}

SpectralImage read_image_csv(std::istream& in) {
    const CsvTable table = read_table(in, "lambda");
    SpectralImage image;
    for (const auto& row : table.rows) {
        image.lambda.push_back(row[0]);
        ComplexVector v = row_values(row);
        const bool ok = v.allFinite();
        image.valid.push_back(ok);
        image.values.push_back(ok ? v : ComplexVector::Zero(v.size()));
    }
    for (std::size_t i = 1; i < image.lambda.size(); ++i)
        if (!(image.lambda[i] > image.lambda[i - 1]))
            throw Error(ErrorCode::ParseError, "lambda grid must be strictly increasing");
    return image;
}

void write_csv_file(const std::string& path, const PiecewiseGridFunction& f) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    write_csv(out, f);
}

void write_csv_file(const std::string& path, const SpectralImage& image) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    write_csv(out, image);
}

PiecewiseGridFunction read_function_csv_file(const std::string& path, const ProblemConfig& config) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return read_function_csv(in, config);
}

SpectralImage read_image_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return read_image_csv(in);
}

}  // namespace mft
