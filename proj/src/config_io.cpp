#include "mft/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mft/errors.hpp"

namespace mft {

namespace {

[[noreturn]] void fail(ErrorCode code, const YAML::Node& node, const std::string& what) {
    std::ostringstream os;
    if (node.IsDefined() && node.Mark().line >= 0) os << "line " << node.Mark().line + 1 << ": ";
    os << what;
    throw Error(code, os.str());
}

double as_double(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail(ErrorCode::ParseError, node, field + " must be a number");
    const std::string s = node.Scalar();
    if (s == "inf" || s == "+inf" || s == ".inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-.inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, node, field + ": cannot parse '" + s + "' as a number");
    }
}

int as_int(const YAML::Node& node, const std::string& field) {
    const double v = as_double(node, field);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(ErrorCode::ParseError, node, field + " must be an integer");
    return static_cast<int>(v);
}

cplx as_entry(const YAML::Node& node, const std::string& field) {
    if (node.IsSequence()) {
        if (node.size() != 2) fail(ErrorCode::ParseError, node, field + ": complex entries are [re, im]");
        return {as_double(node[0], field), as_double(node[1], field)};
    }
    return {as_double(node, field), 0.0};
}

ComplexMatrix as_matrix(const YAML::Node& node, Eigen::Index r, const std::string& field) {
    if (!node.IsDefined() || node.IsNull()) return ComplexMatrix::Zero(r, r);
    if (node.IsScalar()) return as_entry(node, field) * identity(r);
    if (!node.IsSequence()) fail(ErrorCode::ParseError, node, field + " must be a number or a list");
    ComplexMatrix m(r, r);
    // a list of r rows, unless r = 1 and the single element is an [re, im] pair
    const bool nested = node.size() > 0 && node[0].IsSequence() && static_cast<Eigen::Index>(node.size()) == r &&
                        !(r == 1 && node[0].size() == 2);
    if (nested) {
        if (static_cast<Eigen::Index>(node.size()) != r) {
            std::ostringstream os;
            os << field << " has " << node.size() << " rows, expected " << r;
            fail(ErrorCode::DimensionMismatch, node, os.str());
        }
        for (Eigen::Index i = 0; i < r; ++i) {
            const YAML::Node row = node[static_cast<std::size_t>(i)];
            if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != r) {
                std::ostringstream os;
                os << field << " row " << i + 1 << " must have " << r << " entries";
                fail(ErrorCode::DimensionMismatch, row, os.str());
            }
            for (Eigen::Index j = 0; j < r; ++j) m(i, j) = as_entry(row[static_cast<std::size_t>(j)], field);
        }
        return m;
    }
    if (static_cast<Eigen::Index>(node.size()) != r * r) {
        std::ostringstream os;
        os << field << " has " << node.size() << " entries, expected " << r * r << " (r = " << r << ")";
        fail(ErrorCode::DimensionMismatch, node, os.str());
    }
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j) m(i, j) = as_entry(node[static_cast<std::size_t>(i * r + j)], field);
    return m;
}

void check_keys(const YAML::Node& node, const std::vector<std::string>& allowed, const std::string& where) {
    if (!node.IsMap()) fail(ErrorCode::ParseError, node, where + " must be a mapping");
    for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(ErrorCode::ParseError, kv.first, where + ": unknown field '" + key + "'");
    }
}

const char* kBlockNames[4] = {"alpha", "beta", "gamma", "delta"};

InterfaceCondition::Blocks& block_ref(InterfaceCondition& ic, int which) {
    switch (which) {
        case 0: return ic.alpha;
        case 1: return ic.beta;
        case 2: return ic.gamma;
        default: return ic.delta;
    }
}

std::vector<std::string> interface_keys() {
    std::vector<std::string> keys{"ideal_contact"};
    for (const char* b : kBlockNames)
        for (int j = 1; j <= 2; ++j)
            for (int s = 1; s <= 2; ++s) keys.push_back(std::string(b) + std::to_string(j) + std::to_string(s));
    return keys;
}

ProblemConfig parse_problem(const YAML::Node& root) {
    ProblemConfig config;
    const YAML::Node problem = root["problem"];
    if (problem) {
        check_keys(problem, {"r", "mode"}, "problem");
        if (problem["r"]) config.r = as_int(problem["r"], "problem.r");
        if (config.r < 1) fail(ErrorCode::InvalidConfig, problem["r"], "problem.r must be >= 1");
        if (problem["mode"]) {
            const std::string mode = problem["mode"].as<std::string>();
            if (mode == "semi-axis" || mode == "semi_axis")
                config.mode = AxisMode::SemiAxis;
            else if (mode == "full-axis" || mode == "full_axis")
                config.mode = AxisMode::FullAxis;
            else
                fail(ErrorCode::ParseError, problem["mode"], "problem.mode must be semi-axis or full-axis");
        }
    }
    const Eigen::Index r = config.r;

    const YAML::Node layers = root["layers"];
    if (!layers || !layers.IsSequence() || layers.size() == 0)
        fail(ErrorCode::ParseError, layers ? layers : root, "a non-empty 'layers' list is required");
    for (std::size_t m = 0; m < layers.size(); ++m) {
        const YAML::Node node = layers[m];
        const std::string tag = "layers[" + std::to_string(m + 1) + "]";
        check_keys(node, {"left", "right", "a2", "g2"}, tag);
        if (!node["left"] || !node["right"] || !node["a2"])
            fail(ErrorCode::ParseError, node, tag + " needs left, right and a2");
        LayerMedium layer;
        layer.left = as_double(node["left"], tag + ".left");
        layer.right = as_double(node["right"], tag + ".right");
        layer.a2 = as_matrix(node["a2"], r, tag + ".a2");
        layer.g2 = as_matrix(node["g2"], r, tag + ".g2");
        config.layers.push_back(layer);
    }

    const YAML::Node interfaces = root["interfaces"];
    const std::size_t expected = config.layers.size() - 1;
    if (expected > 0 && (!interfaces || !interfaces.IsSequence()))
        fail(ErrorCode::ParseError, root, "an 'interfaces' list with one entry per interior point is required");
    if (interfaces && interfaces.IsSequence() && interfaces.size() != expected) {
        std::ostringstream os;
        os << config.layers.size() << " layers need " << expected << " interfaces, got " << interfaces.size();
        fail(ErrorCode::InvalidConfig, interfaces, os.str());
    }
    for (std::size_t k = 0; k < expected; ++k) {
        const YAML::Node node = interfaces[k];
        const std::string tag = "interfaces[" + std::to_string(k + 1) + "]";
        check_keys(node, interface_keys(), tag);
        InterfaceCondition ic;
        if (node["ideal_contact"] && node["ideal_contact"].as<bool>()) {
            if (node.size() > 1) fail(ErrorCode::ParseError, node, tag + ": ideal_contact cannot be combined with blocks");
            ic = ideal_contact(config.layers[k].a2, config.layers[k + 1].a2);
        } else {
            for (int b = 0; b < 4; ++b)
                for (int j = 0; j < 2; ++j)
                    for (int s = 0; s < 2; ++s) {
                        const std::string key = std::string(kBlockNames[b]) + std::to_string(j + 1) + std::to_string(s + 1);
                        block_ref(ic, b)[j][s] = as_matrix(node[key], r, tag + "." + key);
                    }
        }
        config.interfaces.push_back(ic);
    }

    const YAML::Node boundary = root["boundary"];
    if (config.mode == AxisMode::SemiAxis) {
        if (!boundary) fail(ErrorCode::ParseError, root, "semi-axis problems need a 'boundary' entry");
        if (boundary.IsScalar()) {
            const std::string kind = boundary.as<std::string>();
            if (kind == "dirichlet")
                config.boundary = dirichlet_boundary(r);
            else if (kind == "neumann")
                config.boundary = neumann_boundary(r);
            else
                fail(ErrorCode::ParseError, boundary, "boundary must be dirichlet, neumann or a block mapping");
        } else {
            check_keys(boundary, {"alpha0", "beta0", "gamma0", "delta0"}, "boundary");
            config.boundary.alpha0 = as_matrix(boundary["alpha0"], r, "boundary.alpha0");
            config.boundary.beta0 = as_matrix(boundary["beta0"], r, "boundary.beta0");
            config.boundary.gamma0 = as_matrix(boundary["gamma0"], r, "boundary.gamma0");
            config.boundary.delta0 = as_matrix(boundary["delta0"], r, "boundary.delta0");
        }
    } else {
        config.boundary = BoundaryCondition{ComplexMatrix::Zero(r, r), ComplexMatrix::Zero(r, r),
                                            ComplexMatrix::Zero(r, r), ComplexMatrix::Zero(r, r)};
    }

    try {
        config.validate();
    } catch (const Error& e) {
        fail(e.code(), root, e.what());
    }
    return config;
}

QuadratureSpec parse_quadrature(const YAML::Node& root) {
    QuadratureSpec spec;
    const YAML::Node q = root["quadrature"];
    if (!q) return spec;
    check_keys(q, {"lambda_min", "lambda_max", "lambda_steps", "tau_schedule", "x_max", "xi_quadrature_order",
                   "tail_tolerance"},
               "quadrature");
    if (q["lambda_min"]) spec.lambda_min = as_double(q["lambda_min"], "quadrature.lambda_min");
    if (q["lambda_max"]) spec.lambda_max = as_double(q["lambda_max"], "quadrature.lambda_max");
    if (q["lambda_steps"]) spec.lambda_steps = as_int(q["lambda_steps"], "quadrature.lambda_steps");
    if (q["x_max"]) spec.x_max = as_double(q["x_max"], "quadrature.x_max");
    if (q["xi_quadrature_order"]) spec.xi_quadrature_order = as_int(q["xi_quadrature_order"], "quadrature.xi_quadrature_order");
    if (q["tail_tolerance"]) spec.tail_tolerance = as_double(q["tail_tolerance"], "quadrature.tail_tolerance");
    if (q["tau_schedule"]) {
        const YAML::Node taus = q["tau_schedule"];
        if (!taus.IsSequence()) fail(ErrorCode::ParseError, taus, "quadrature.tau_schedule must be a list");
        spec.tau_schedule.clear();
        for (const auto& t : taus) spec.tau_schedule.push_back(as_double(t, "quadrature.tau_schedule"));
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        fail(e.code(), q, e.what());
    }
    return spec;
}

std::string number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void emit_matrix(YAML::Emitter& out, const ComplexMatrix& m) {
    out << YAML::Flow << YAML::BeginSeq;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const cplx v = m(i, j);
            if (v.imag() == 0.0)
                out << number(v.real());
            else
                out << YAML::Flow << YAML::BeginSeq << number(v.real()) << number(v.imag()) << YAML::EndSeq;
        }
    out << YAML::EndSeq;
}

}  // namespace

ConfigBundle parse_config_string(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << "line " << e.mark.line + 1 << ": " << e.msg;
        throw Error(ErrorCode::ParseError, os.str());
    }
    if (!root.IsMap()) throw Error(ErrorCode::ParseError, "the configuration must be a mapping");
    check_keys(root, {"problem", "layers", "interfaces", "boundary", "quadrature"}, "document");
    try {
        ConfigBundle bundle;
        bundle.problem = parse_problem(root);
        bundle.quadrature = parse_quadrature(root);
        return bundle;
    } catch (const YAML::Exception& e) {
        std::ostringstream os;
        os << "line " << e.mark.line + 1 << ": " << e.msg;
        throw Error(ErrorCode::ParseError, os.str());
    }
}

ConfigBundle parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

std::string emit_config(const ConfigBundle& bundle) {
    const auto& c = bundle.problem;
    const auto& q = bundle.quadrature;
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "problem" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "r" << YAML::Value << c.r;
    out << YAML::Key << "mode" << YAML::Value << (c.mode == AxisMode::SemiAxis ? "semi-axis" : "full-axis");
    out << YAML::EndMap;

    out << YAML::Key << "layers" << YAML::Value << YAML::BeginSeq;
    for (const auto& layer : c.layers) {
        out << YAML::BeginMap;
        out << YAML::Key << "left" << YAML::Value << number(layer.left);
        out << YAML::Key << "right" << YAML::Value << number(layer.right);
        out << YAML::Key << "a2" << YAML::Value;
        emit_matrix(out, layer.a2);
        out << YAML::Key << "g2" << YAML::Value;
        emit_matrix(out, layer.g2);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    if (!c.interfaces.empty()) {
        out << YAML::Key << "interfaces" << YAML::Value << YAML::BeginSeq;
        for (const auto& ic0 : c.interfaces) {
            InterfaceCondition ic = ic0;
            out << YAML::BeginMap;
            for (int b = 0; b < 4; ++b)
                for (int j = 0; j < 2; ++j)
                    for (int s = 0; s < 2; ++s) {
                        out << YAML::Key << std::string(kBlockNames[b]) + std::to_string(j + 1) + std::to_string(s + 1)
                            << YAML::Value;
                        emit_matrix(out, block_ref(ic, b)[j][s]);
                    }
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }

    if (c.mode == AxisMode::SemiAxis) {
        out << YAML::Key << "boundary" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "alpha0" << YAML::Value;
        emit_matrix(out, c.boundary.alpha0);
        out << YAML::Key << "beta0" << YAML::Value;
        emit_matrix(out, c.boundary.beta0);
        out << YAML::Key << "gamma0" << YAML::Value;
        emit_matrix(out, c.boundary.gamma0);
        out << YAML::Key << "delta0" << YAML::Value;
        emit_matrix(out, c.boundary.delta0);
        out << YAML::EndMap;
    }

    out << YAML::Key << "quadrature" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "lambda_min" << YAML::Value << number(q.lambda_min);
    out << YAML::Key << "lambda_max" << YAML::Value << number(q.lambda_max);
    out << YAML::Key << "lambda_steps" << YAML::Value << q.lambda_steps;
    out << YAML::Key << "tau_schedule" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double t : q.tau_schedule) out << number(t);
    out << YAML::EndSeq;
    out << YAML::Key << "x_max" << YAML::Value << number(q.x_max);
    out << YAML::Key << "xi_quadrature_order" << YAML::Value << q.xi_quadrature_order;
    out << YAML::Key << "tail_tolerance" << YAML::Value << number(q.tail_tolerance);
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace mft
