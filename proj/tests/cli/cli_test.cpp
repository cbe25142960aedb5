// Runs the uhj binary end to end and checks exit codes, report contents,
// determinism and the CSV contract.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("uhj-cli-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(UHJ_BINARY) + " " + args + " 2>" + err.string();
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = read(err);
    return r;
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string bundled(const std::string& name) {
    return std::string(UHJ_CONFIG_DIR) + "/" + name;
  }

  static const json& check(const json& report, const std::string& name) {
    for (const auto& c : report.at("checks")) {
      if (c.at("check") == name) return c;
    }
    throw std::runtime_error("no check " + name);
  }

  fs::path dir_;
};

TEST_F(Cli, OscillatorPasses) {
  const Result r = run("run " + bundled("oscillator-hj.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  EXPECT_TRUE(report.at("passed").get<bool>());
  EXPECT_EQ(report.at("toolkit"), "uhj");
  EXPECT_LE(check(report, "flow").at("summary").at("max_error").get<double>(), 1e-6);
  EXPECT_EQ(check(report, "hj").at("records").size(), 100u);
  EXPECT_EQ(check(report, "lagrangian").at("records").size(), 100u);
}

TEST_F(Cli, NonClosedSectionFails) {
  const Result r = run("run " + bundled("nonclosed-section.json"));
  ASSERT_EQ(r.code, 1) << r.err;
  const json report = json::parse(r.out);
  EXPECT_FALSE(report.at("passed").get<bool>());
  const json& lag = check(report, "lagrangian");
  EXPECT_FALSE(lag.at("passed").get<bool>());
  EXPECT_NEAR(lag.at("summary").at("max_residual").get<double>(), 1.0, 1e-8);
}

TEST_F(Cli, BundledConfigsExitCodes) {
  for (const auto& entry : fs::directory_iterator(UHJ_CONFIG_DIR)) {
    const std::string name = entry.path().filename().string();
    const int expected = name == "nonclosed-section.json" ? 1 : 0;
    EXPECT_EQ(run("run " + entry.path().string()).code, expected) << name;
  }
}

TEST_F(Cli, EmptyCheckListIsAConfigError) {
  const fs::path cfg = write("empty.json", R"({
    "version": 1, "name": "empty",
    "model": {"name": "oscillator"},
    "section": {"components": ["q1"]},
    "domain": {"lo": [0], "hi": [1]},
    "checks": []
  })");
  const Result r = run("run " + cfg.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no checks requested"), std::string::npos) << r.err;
}

TEST_F(Cli, UnknownSubcommand) {
  const Result r = run("frobnicate " + bundled("oscillator-hj.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE((r.out + r.err).find("Usage"), std::string::npos);
}

TEST_F(Cli, MissingSubcommand) { EXPECT_EQ(run("").code, 2); }

TEST_F(Cli, MissingFile) {
  const Result r = run("run " + (dir_ / "nope.json").string());
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, InvalidJsonReportsPosition) {
  const fs::path cfg = write("bad.json", "{\n  \"version\": ,\n}");
  const Result r = run("run " + cfg.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(Cli, UnknownIdentifierReportsPosition) {
  const fs::path cfg = write("ident.json", R"({
    "version": 1, "name": "ident",
    "model": {"name": "oscillator"},
    "section": {"components": ["q1 + x"]},
    "domain": {"lo": [0], "hi": [1]},
    "checks": ["lagrangian"]
  })");
  const Result r = run("check-lagrangian " + cfg.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown identifier 'x' at position 5"), std::string::npos) << r.err;
}

TEST_F(Cli, ValidationErrors) {
  const std::string base = R"("version": 1, "name": "v", "model": {"name": "oscillator"},
    "section": {"components": ["q1"]}, "checks": ["rank"], )";
  EXPECT_EQ(run("run " + write("a.json", "{" + base + R"("domain": {"lo": [0], "hi": [1], "counts": 1}})").string()).code, 2);
  EXPECT_EQ(run("run " + write("b.json", "{" + base + R"("domain": {"lo": [0], "hi": [1]}, "tolerances": {"defect_tol": 0}})").string()).code, 2);
  EXPECT_EQ(run("run " + write("c.json", "{" + base + R"("domain": {"lo": [0], "hi": [1]}, "bogus": 1})").string()).code, 2);
  EXPECT_EQ(run("run " + write("d.json", "{" + base + R"("domain": {"lo": [0, 0], "hi": [1, 1]}})").string()).code, 2);
}

TEST_F(Cli, InlineLowerTriangleRejected) {
  const fs::path cfg = write("inline.json", R"({
    "version": 1, "name": "inline",
    "model": {"inline": {"base": ["q"], "fiber": ["p"],
                         "bivector": {"p,q": "1"}, "hamiltonian": "p^2"}},
    "section": {"components": ["q"]},
    "domain": {"lo": [0], "hi": [1]},
    "checks": ["rank"]
  })");
  EXPECT_EQ(run("run " + cfg.string()).code, 2);
}

TEST_F(Cli, ReportIsDeterministic) {
  const Result a = run("run " + bundled("forced-linear.json"));
  const Result b = run("run " + bundled("forced-linear.json"));
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Result c = run("--seed 5 cross-check " + bundled("nonholonomic-particle.json"));
  const Result d = run("--seed 5 cross-check " + bundled("nonholonomic-particle.json"));
  EXPECT_EQ(c.out, d.out);
}

TEST_F(Cli, ChecksAreSortedByName) {
  const json report = json::parse(run("run " + bundled("time-oscillator.json")).out);
  std::vector<std::string> names;
  for (const auto& c : report.at("checks")) names.push_back(c.at("check"));
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
}

TEST_F(Cli, EchoedConfigRoundTrips) {
  for (const auto& entry : fs::directory_iterator(UHJ_CONFIG_DIR)) {
    const json first = json::parse(run("run " + entry.path().string()).out);
    const fs::path echo = write("echo.json", first.at("config").dump(2));
    const Result again = run("run " + echo.string());
    ASSERT_NE(again.code, 2) << entry.path() << ": " << again.err;
    const json second = json::parse(again.out);
    EXPECT_EQ(first.at("config"), second.at("config")) << entry.path();
    EXPECT_EQ(first.at("checks"), second.at("checks")) << entry.path();
  }
}

TEST_F(Cli, OutFileMatchesStdout) {
  const fs::path out = dir_ / "report.json";
  const Result to_file = run("--out " + out.string() + " run " + bundled("oscillator-hj.json"));
  ASSERT_EQ(to_file.code, 0);
  EXPECT_EQ(read(out), run("run " + bundled("oscillator-hj.json")).out);
}

TEST_F(Cli, FlowCompareWritesCsv) {
  const fs::path csv = dir_ / "csv";
  const Result r =
      run("--csv-dir " + csv.string() + " flow-compare " + bundled("forced-linear.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  EXPECT_LE(check(report, "flow").at("summary").at("max_error").get<double>(), 1e-6);
  for (const char* leg : {"base", "lifted", "upstairs"}) {
    const fs::path p = csv / (std::string("forced-linear-") + leg + ".csv");
    ASSERT_TRUE(fs::exists(p)) << p;
    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("t,", 0), 0u) << header;
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, 1001u);
  }
}

TEST_F(Cli, RankScanCanonicalPlane) {
  const fs::path cfg = write("plane.json", R"({
    "version": 1, "name": "plane",
    "model": {"name": "canonical", "params": {"n": 2}, "hamiltonian": "p1*p2"},
    "section": {"components": ["0", "0"]},
    "domain": {"lo": [-1, -1], "hi": [1, 1], "counts": 3},
    "checks": ["rank"]
  })");
  const Result r = run("rank-scan " + cfg.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  const json& s = check(report, "rank").at("summary");
  EXPECT_EQ(s.at("min_rank"), 4);
  EXPECT_EQ(s.at("max_rank"), 4);
  EXPECT_TRUE(s.at("constant_rank").get<bool>());
}

TEST_F(Cli, RankScanNonholonomic) {
  const Result r = run("rank-scan " + bundled("nonholonomic-particle.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  const json& s = check(report, "rank").at("summary");
  EXPECT_EQ(s.at("min_rank"), 4);
  EXPECT_EQ(s.at("max_rank"), 4);
  EXPECT_EQ(s.at("total_dim"), 5);
}

TEST_F(Cli, GridOverride) {
  const Result r = run("--grid 7 check-lagrangian " + bundled("oscillator-hj.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(check(json::parse(r.out), "lagrangian").at("records").size(), 7u);
}

TEST_F(Cli, TolOverrideCanFailAPassingRun) {
  const Result r = run("--tol 1e-30 check-hj " + bundled("oscillator-hj.json"));
  EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, ListModels) {
  const Result r = run("list-models");
  ASSERT_EQ(r.code, 0);
  const json models = json::parse(r.out);
  ASSERT_EQ(models.size(), 6u);
  EXPECT_EQ(models.front().at("name"), "canonical");
}

TEST_F(Cli, Version) {
  const Result r = run("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.1.0"), std::string::npos);
}

TEST_F(Cli, CrossCheckAgrees) {
  const Result r = run("--seed 3 --samples 200 cross-check " + bundled("forced-linear.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  const json& s = check(report, "cross-check").at("summary");
  EXPECT_EQ(s.at("disagreements"), 0);
  EXPECT_EQ(s.at("samples"), 200);
}

}  // namespace
