#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "kpcert/commands.hpp"
#include "kpcert/io.hpp"

namespace kpcert::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("kpcert_cli_" + std::string(info->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const auto path = dir_ / name;
        std::ofstream(path) << text;
        return path.string();
    }

    std::string write_instance(const std::string& name, Instance inst) {
        return write(name, io::dump(io::to_json(inst)));
    }

    int call(std::vector<std::string> args) {
        args.insert(args.begin(), "kpcert");
        out_.str("");
        err_.str("");
        return run(args, out_, err_);
    }

    Json report() const { return Json::parse(out_.str()); }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

Instance with_params(Instance inst, double Lambda, std::size_t grid = kDefaultGridPoints) {
    inst.pata = testing::linear_params(Lambda);
    inst.grid = EpsilonGrid::uniform(grid);
    return inst;
}

TEST_F(Cli, ValidateExitCodes) {
    EXPECT_EQ(call({"validate", write_instance("e3.json", testing::e3())}), kOk);
    EXPECT_EQ(out_.str(), "validate: valid\n");

    const auto bad = write("bad.json", R"({"points": ["a", "b", "c"], "dist": [[0, 1, 3], [1, 0, 1], [3, 1, 0]],
                                          "map": [0, 0, 0], "partition": [[0, 1, 2]]})");
    EXPECT_EQ(call({"validate", bad, "--json"}), kFails);
    const Json r = report();
    EXPECT_EQ(r["exit_code"], 1);
    EXPECT_EQ(r["result"]["metric"]["violations"].size(), 2u);

    const auto uncovered = write("uncovered.json", R"({"points": ["a", "b", "c"], "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
                                                      "map": [1, 0, 2], "partition": [[0], [1]]})");
    EXPECT_EQ(call({"validate", "-i", uncovered, "--json"}), kFails);
    EXPECT_EQ(report()["result"]["cyclic"]["uncovered"], Json::array({2}));

    EXPECT_EQ(call({"validate", write("garbage.json", "{not json")}), kError);
    EXPECT_EQ(call({"validate", write("ragged.json", R"({"points": ["a"], "dist": [[0, 1]]})"), "--json"}), kError);
    EXPECT_EQ(report()["result"]["error"]["detail"]["where"], "/dist/0");
    EXPECT_EQ(call({"validate", (dir_ / "missing.json").string()}), kError);
    EXPECT_EQ(call({"validate"}), kError);
}

TEST_F(Cli, CertifyExitCodes) {
    const auto e3 = write_instance("e3.json", with_params(testing::e3(), 3.0, 1001));
    const auto e1 = write_instance("e1.json", with_params(testing::e1(), 10.0));
    for (const char* cond : {"kannan", "cyclic-kannan", "ck-pata"}) {
        EXPECT_EQ(call({"certify", "--condition", cond, e3}), kOk) << cond;
        EXPECT_EQ(call({"certify", "--condition", cond, e1}), kFails) << cond;
    }
    EXPECT_EQ(call({"certify", "--condition", "kannan", e3, "--json"}), kOk);
    EXPECT_NEAR(report()["result"]["lambda_min"].get<double>(), 2.0 / 3.0, 1e-12);

    EXPECT_EQ(call({"certify", "--condition", "ck-pata", e1, "--json"}), kFails);
    EXPECT_EQ(report()["config"]["grid"]["points"], 101);
    EXPECT_EQ(report()["result"]["witness"]["eps_index"], 2);

    EXPECT_EQ(call({"certify", "--condition", "ck-pata", e1, "--tol", "0.01"}), kOk);
    // The two-point grid misses the interior failures.
    EXPECT_EQ(call({"certify", "--condition", "ck-pata", e1, "--grid", "2"}), kOk);
    EXPECT_EQ(call({"certify", "--condition", "nope", e1}), kError);
    EXPECT_EQ(call({"certify", e1}), kError);
    EXPECT_EQ(call({"certify", "--condition", "ck-pata", write_instance("bare.json", testing::e3())}), kError);

    Instance beta_too_big = with_params(testing::e3(), 1.0);
    beta_too_big.pata->beta = 2.0;
    EXPECT_EQ(call({"certify", "--condition", "pata", write_instance("b.json", beta_too_big)}), kError);

    const auto broken_cover = write("cover.json", R"({"points": ["a", "b"], "dist": [[0, 1], [1, 0]],
                                                     "map": [0, 0], "partition": [[0], [1]]})");
    EXPECT_EQ(call({"certify", "--condition", "cyclic-kannan", broken_cover, "--json"}), kError);
    EXPECT_EQ(report()["result"]["error"]["kind"], "precondition");
}

TEST_F(Cli, SolveExitCodes) {
    EXPECT_EQ(call({"solve", write_instance("e3.json", with_params(testing::e3(), 3.0, 1001)), "--json"}), kOk);
    EXPECT_EQ(report()["result"]["fixed_points"], Json::array({1}));
    EXPECT_EQ(report()["config"]["max_iter"], 4);

    EXPECT_EQ(call({"solve", write_instance("e1.json", with_params(testing::e1(), 10.0)), "--json"}), kFails);
    EXPECT_EQ(report()["result"]["fixed_points"], Json::array());
    EXPECT_EQ(report()["result"]["asserted"], false);

    EXPECT_EQ(call({"solve", write_instance("e3bare.json", testing::e3())}), kError);
}

TEST_F(Cli, OutputFileMatchesJsonReport) {
    const auto e3 = write_instance("e3.json", with_params(testing::e3(), 3.0));
    const auto report_path = (dir_ / "report.json").string();
    EXPECT_EQ(call({"certify", "--condition", "cyclic-kannan", e3, "-o", report_path, "--json"}), kOk);
    std::ifstream in(report_path);
    std::stringstream written;
    written << in.rdbuf();
    EXPECT_EQ(written.str(), out_.str());
    const Json r = report();
    EXPECT_EQ(r["tool_version"], std::string(kToolVersion));
    EXPECT_EQ(r["command"], "certify");
    EXPECT_EQ(r["input_digest"].get<std::string>().rfind("sha256:", 0), 0u);
    EXPECT_TRUE(r["timing_ms"].is_number());
}

TEST_F(Cli, GenerateIsDeterministic) {
    const auto a = (dir_ / "a").string();
    const auto b = (dir_ / "b").string();
    EXPECT_EQ(call({"generate", "--seed", "7", "--n", "6", "--m", "3", "--out", a}), kOk);
    EXPECT_EQ(call({"generate", "--seed", "7", "--n", "6", "--m", "3", "--out", b}), kOk);
    for (const char* name : {"instance_7.json", "manifest.json"}) {
        std::ifstream fa(dir_ / "a" / name);
        std::ifstream fb(dir_ / "b" / name);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        EXPECT_FALSE(sa.str().empty());
        EXPECT_EQ(sa.str(), sb.str()) << name;
    }
    EXPECT_EQ(call({"validate", (dir_ / "a" / "instance_7.json").string()}), kOk);

    const auto config = write("cfg.json", R"({"n_points": 4, "m_sets": 2, "seed": 3, "hub_bias": 0.5})");
    EXPECT_EQ(call({"generate", "--config", config, "--search-separating", "--budget", "50", "--out", a, "--json"}),
              kOk);
    EXPECT_EQ(report()["result"]["counts"]["generated"], 50);

    EXPECT_EQ(call({"generate", "--n", "1", "--m", "2", "--out", a}), kError);
    EXPECT_EQ(call({"generate", "--method", "spiral", "--out", a}), kError);
    EXPECT_EQ(call({"generate", "--search-separating", "--budget", "0", "--out", a}), kError);
}

TEST_F(Cli, ReferenceWorkflows) {
    const auto e2 = write_instance("e2.json", with_params(testing::e2(), 0.0));
    EXPECT_EQ(call({"validate", e2}), kOk);
    EXPECT_EQ(call({"certify", "--condition", "ck-pata", e2}), kOk);
    EXPECT_EQ(call({"solve", e2, "--json"}), kOk);
    EXPECT_EQ(report()["result"]["fixed_points"], Json::array({2}));

    const auto asym = write("asym.json", R"({"points": ["a", "b"], "dist": [[0, 1], [2, 0]]})");
    EXPECT_EQ(call({"validate", asym, "--json"}), kFails);
    EXPECT_EQ(report()["result"]["metric"]["violations"][0]["kind"], "asym");

    EXPECT_EQ(call({"certify", "--condition", "kannan", write_instance("e1.json", testing::e1()), "--json"}), kFails);
    EXPECT_EQ(report()["result"]["witness"]["x"], 0);
    EXPECT_EQ(report()["result"]["witness"]["y"], 1);

    const auto out = (dir_ / "single").string();
    EXPECT_EQ(call({"generate", "--n", "1", "--m", "1", "--seed", "3", "--out", out}), kOk);
    const Json single = Json::parse(std::ifstream(dir_ / "single" / "instance_3.json"));
    EXPECT_EQ(single["map"], Json::array({0}));
    EXPECT_EQ(call({"solve", (dir_ / "single" / "instance_3.json").string(), "--json"}), kOk);
    EXPECT_EQ(report()["result"]["fixed_points"], Json::array({0}));
}

TEST_F(Cli, HelpAndUsage) {
    EXPECT_EQ(call({"--help"}), kOk);
    EXPECT_NE(out_.str().find("certify"), std::string::npos);
    EXPECT_EQ(call({}), kError);
    EXPECT_EQ(call({"frobnicate"}), kError);
}

}  // namespace
}  // namespace kpcert::cli
