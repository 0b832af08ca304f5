#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mft/cli.hpp"
#include "mft/config_io.hpp"
#include "mft/errors.hpp"
#include "mft/grid_function.hpp"
#include "mft/test_functions.hpp"
#include "test_support.hpp"

using namespace mft;
using namespace mft::testing;
namespace fs = std::filesystem;

namespace {

const char* kTwoLayer = R"(problem: {r: 2, mode: semi-axis}
layers:
  - {left: 0, right: 2, a2: [1, 0, 0, 2], g2: 0}
  - {left: 2, right: inf, a2: [[4, 0], [0, 0.5]], g2: 0}
interfaces:
  - ideal_contact: true
boundary: dirichlet
quadrature: {lambda_max: 10, lambda_steps: 200, x_max: 12}
)";

ErrorCode parse_error_code(const std::string& text, std::string* message = nullptr) {
    try {
        parse_config_string(text);
    } catch (const Error& e) {
        if (message) *message = e.what();
        return e.code();
    }
    ADD_FAILURE() << "document parsed without error";
    return ErrorCode::Io;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("mft_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    static std::string shipped(const std::string& name) { return std::string(MFT_CONFIG_DIR) + "/" + name; }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "mft");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

}  // namespace

TEST(ConfigIo, ParsesMatrixForms) {
    const auto b = parse_config_string(kTwoLayer);
    EXPECT_EQ(b.problem.r, 2);
    ASSERT_EQ(b.problem.layers.size(), 2u);
    EXPECT_EQ(b.problem.layers[0].a2, diag2(1.0, 2.0));
    EXPECT_EQ(b.problem.layers[1].a2, diag2(4.0, 0.5));
    EXPECT_TRUE(std::isinf(b.problem.layers[1].right));
    EXPECT_EQ(b.problem.interfaces[0].alpha[1][1], diag2(4.0, 0.5));
    EXPECT_EQ(b.problem.interfaces[0].beta[0][0], identity(2));
    EXPECT_EQ(b.quadrature.lambda_max, 10.0);
    EXPECT_EQ(b.quadrature.lambda_steps, 200);
}

TEST(ConfigIo, ComplexEntriesAndExplicitBlocks) {
    const auto b = parse_config_string(R"(problem: {r: 2}
layers:
  - {left: 0, right: 1, a2: [[2, [0.5, -0.5]], [[0.5, 0.5], 1]], g2: 0}
  - {left: 1, right: inf, a2: 1, g2: 0.25}
interfaces:
  - {beta11: 1, beta12: 1, alpha21: [[2, [0.5, -0.5]], [[0.5, 0.5], 1]], alpha22: 1, gamma22: 0.1}
boundary: {alpha0: 1, beta0: [0.7, 0.1, 0.1, 0.4]}
)");
    EXPECT_EQ(b.problem.layers[0].a2(0, 1), cplx(0.5, -0.5));
    EXPECT_EQ(b.problem.layers[1].g2, 0.25 * identity(2));
    EXPECT_EQ(b.problem.interfaces[0].gamma[1][1], 0.1 * identity(2));
    EXPECT_EQ(b.problem.interfaces[0].delta[0][0], ComplexMatrix::Zero(2, 2));
    EXPECT_EQ(b.problem.boundary.beta0(1, 1), cplx(0.4));
}

TEST(ConfigIo, EmitParsesBack) {
    ConfigBundle b;
    b.problem = three_layer_matrix();
    b.quadrature.lambda_max = 17.5;
    b.quadrature.tau_schedule = {4e-3, 2e-3, 1e-3, 5e-4};
    const auto back = parse_config_string(emit_config(b));
    ASSERT_EQ(back.problem.layers.size(), 3u);
    for (std::size_t m = 0; m < 3; ++m) {
        EXPECT_EQ(back.problem.layers[m].a2, b.problem.layers[m].a2);
        EXPECT_EQ(back.problem.layers[m].g2, b.problem.layers[m].g2);
        EXPECT_EQ(back.problem.layers[m].right, b.problem.layers[m].right);
    }
    for (std::size_t k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
            for (int s = 0; s < 2; ++s) EXPECT_EQ(back.problem.interfaces[k].alpha[j][s], b.problem.interfaces[k].alpha[j][s]);
    EXPECT_EQ(back.problem.boundary.beta0, b.problem.boundary.beta0);
    EXPECT_EQ(back.quadrature.tau_schedule, b.quadrature.tau_schedule);
    EXPECT_EQ(back.quadrature.lambda_max, 17.5);
}

TEST(ConfigIo, FullAxis) {
    const auto b = parse_config_string(R"(problem: {r: 1, mode: full-axis}
layers:
  - {left: -inf, right: 0, a2: 1, g2: 0}
  - {left: 0, right: inf, a2: 2.25, g2: 0}
interfaces:
  - ideal_contact: true
)");
    EXPECT_EQ(b.problem.mode, AxisMode::FullAxis);
}

TEST(ConfigIo, Errors) {
    std::string msg;
    EXPECT_EQ(parse_error_code("problem: {r: 1}\nlayers:\n  - {left: 0, right: inf, a2: 1, g2: 0, colour: red}\n"
                               "boundary: dirichlet\n",
                               &msg),
              ErrorCode::ParseError);
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_EQ(parse_error_code("problem: {r: 2}\nlayers:\n  - {left: 0, right: inf, a2: [1, 2, 3], g2: 0}\n"
                               "boundary: dirichlet\n",
                               &msg),
              ErrorCode::DimensionMismatch);
    EXPECT_NE(msg.find("a2"), std::string::npos) << msg;
    // not positive definite
    EXPECT_EQ(parse_error_code("problem: {r: 1}\nlayers:\n  - {left: 0, right: inf, a2: -1, g2: 0}\n"
                               "boundary: dirichlet\n"),
              ErrorCode::InvalidConfig);
    EXPECT_EQ(parse_error_code("problem: {r: 1}\nlayers: [\n"), ErrorCode::ParseError);
    EXPECT_EQ(parse_error_code(R"(problem: {r: 1}
layers:
  - {left: 0, right: 1, a2: 1, g2: 0}
  - {left: 1, right: inf, a2: 2, g2: 0}
interfaces:
  - {ideal_contact: true, gamma22: 1}
boundary: dirichlet
)"),
              ErrorCode::ParseError);
}

TEST(CliExitCodes, Mapping) {
    EXPECT_EQ(cli::exit_code_for(ErrorCode::ParseError), cli::kConfigError);
    EXPECT_EQ(cli::exit_code_for(ErrorCode::InvalidConfig), cli::kConfigError);
    EXPECT_EQ(cli::exit_code_for(ErrorCode::RegularityViolation), cli::kRegularityViolation);
    EXPECT_EQ(cli::exit_code_for(ErrorCode::NonConvergentTail), cli::kNumericalFailure);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({"frobnicate"}), cli::kUsage);
    EXPECT_EQ(run({"forward", "--input", "gauss_bump"}), cli::kUsage);
    EXPECT_EQ(run({"--help"}), cli::kSuccess);
}

TEST_F(CliTest, ConfigErrorExit) {
    const auto cfg = write("bad.yaml", "problem: {r: 1}\nlayers: 3\n");
    EXPECT_EQ(run({"roundtrip", "--config", cfg, "--input", "gauss_bump:c=5"}), cli::kConfigError);
    EXPECT_EQ(run({"roundtrip", "--config", path("missing.yaml"), "--input", "gauss_bump:c=5"}), cli::kConfigError);
}

TEST_F(CliTest, RegularityViolationExit) {
    const auto cfg = write("singular.yaml", R"(problem: {r: 1}
layers:
  - {left: 0, right: 2, a2: 1, g2: 0}
  - {left: 2, right: inf, a2: 4, g2: 0}
interfaces:
  - {beta11: 1, beta12: 1, alpha22: 4}
boundary: dirichlet
)");
    EXPECT_EQ(run({"forward", "--config", cfg, "--input", "gauss_bump:c=5,sigma=0.4", "--output", path("img.csv"),
                   "--lambda-max", "5", "--lambda-steps", "50"}),
              cli::kRegularityViolation)
        << err_.str();
}

TEST_F(CliTest, ForwardInverseFiles) {
    const auto cfg = write("two.yaml", kTwoLayer);
    ASSERT_EQ(run({"forward", "--config", cfg, "--input", "gauss_bump:c=5,sigma=0.6", "--output", path("img.csv")}),
              cli::kSuccess)
        << err_.str();
    const auto img = read_image_csv_file(path("img.csv"));
    EXPECT_EQ(img.channels(), 2);
    ASSERT_EQ(run({"inverse", "--config", cfg, "--input", path("img.csv"), "--output", path("f.csv"), "--points",
                   "4:6:5"}),
              cli::kSuccess)
        << err_.str();
    const auto f = read_function_csv_file(path("f.csv"), parse_config_string(kTwoLayer).problem);
    ASSERT_EQ(f.layers[1].x.size(), 5u);
    // lambda_max = 10 keeps the reconstruction of a sigma = 0.6 bump within about 1e-3
    EXPECT_NEAR(f.layers[1].values[2](0).real(), 1.0, 5e-3);
}

TEST_F(CliTest, RoundtripTolerance) {
    const auto cfg = write("two.yaml", kTwoLayer);
    EXPECT_EQ(run({"roundtrip", "--config", cfg, "--input", "gauss_bump:c=5,sigma=0.6", "--tolerance", "1e-2"}),
              cli::kSuccess)
        << err_.str();
    EXPECT_NE(out_.str().find("l2"), std::string::npos) << out_.str();
    EXPECT_EQ(run({"roundtrip", "--config", cfg, "--input", "gauss_bump:c=5,sigma=0.6", "--tolerance", "1e-14"}),
              cli::kNumericalFailure);
}

TEST_F(CliTest, BasisAndPoisson) {
    EXPECT_EQ(run({"basis", "--config", shipped("sine.yaml"), "--lambda", "1,2", "--points", "0:1:3", "--output",
                   path("k.csv")}),
              cli::kSuccess)
        << err_.str();
    EXPECT_TRUE(fs::exists(path("k.csv")));
    EXPECT_EQ(run({"poisson", "--dimension", "3", "--input", "gauss_bump:sigma=2", "--heights", "0.001,1", "--radii",
                   "0,1", "--output", path("p.csv")}),
              cli::kSuccess)
        << err_.str();
    std::ifstream in(path("p.csv"));
    std::string header;
    std::getline(in, header);
    int rows = 0;
    for (std::string line; std::getline(in, line);) rows += line.empty() ? 0 : 1;
    EXPECT_EQ(rows, 4);
}

TEST_F(CliTest, IdentityNegativeControl) {
    const std::vector<std::string> base = {"identity",     "--config", shipped("twolayer.yaml"),
                                           "--input",      "gauss_bump:c=0.3,sigma=0.25",
                                           "--output",     path("id.csv"),
                                           "--lambda-max", "10"};
    auto with = base;
    with.insert(with.end(), {"--tolerance", "1e-5"});
    EXPECT_EQ(run(with), cli::kSuccess) << err_.str() << out_.str();
    auto without = with;
    without.push_back("--no-boundary-term");
    EXPECT_EQ(run(without), cli::kNumericalFailure);
}

TEST_F(CliTest, HeatWithFiniteDifferences) {
    EXPECT_EQ(run({"heat", "--config", shipped("sine.yaml"), "--input", "odd_gauss", "--time", "0.05", "--fd", "--dx", "0.02", "--tolerance", "1e-3",
                   "--points", "0:6:31", "--output", path("u.csv")}),
              cli::kSuccess)
        << err_.str() << out_.str();
}

TEST_F(CliTest, ShippedSineRoundtrip) {
    EXPECT_EQ(run({"roundtrip", "--config", shipped("sine.yaml"), "--input", "odd_gauss", "--tolerance", "1e-5"}),
              cli::kSuccess)
        << err_.str() << out_.str();
}

TEST_F(CliTest, IdentityFromCsvInput) {
    // sampled data without traces; the tool derives them from the samples
    const auto cfg = parse_config_file(shipped("twolayer.yaml"));
    const auto f = sample(cfg.problem, parse_function("gauss_bump:c=5,sigma=0.4", 1), 12.0, 0.01, -1);
    write_csv_file(path("bump.csv"), f);
    EXPECT_EQ(run({"identity", "--config", shipped("twolayer.yaml"), "--input", path("bump.csv"), "--output",
                   path("res.csv"), "--tolerance", "1e-5"}),
              cli::kSuccess)
        << err_.str() << out_.str();
}

TEST_F(CliTest, ShippedSingularConfig) {
    EXPECT_EQ(run({"basis", "--config", shipped("singular.yaml"), "--lambda", "1", "--points", "0:3:4", "--output",
                   path("k.csv")}),
              cli::kRegularityViolation);
}

TEST_F(CliTest, AllShippedConfigsParse) {
    for (const auto& entry : fs::directory_iterator(MFT_CONFIG_DIR)) {
        if (entry.path().extension() != ".yaml") continue;
        EXPECT_NO_THROW(parse_config_file(entry.path().string())) << entry.path();
    }
}
