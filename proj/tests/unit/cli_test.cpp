#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "dwqa/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(DWQA_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dwqa_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "config.json";
  dwqa::write_text_file(p, text);
  return p;
}

const char* kSmallSa = R"({
  "potential": {"h0": 0.2},
  "encoding": {"n": 21},
  "protocol": {"kind": "sa", "t_mcs": 20},
  "sweep": [2, 10],
  "runs": {"n_runs": 2, "n_reads": 10, "seed": 3, "n_resamples": 100}
})";

const char* kSmallTebd = R"({
  "potential": {"h0": 0.2},
  "encoding": {"n": 8},
  "protocol": {"kind": "tebd", "dt": 0.05, "chi_max": 8},
  "sweep": [1, 2, 4, 8],
  "runs": {"n_runs": 1, "n_reads": 1}
})";

}  // namespace

TEST(Cli, ExactPrintsSpectrumSummary) {
  const auto dir = scratch("exact");
  const auto r = run("exact --config " + write_config(dir, kSmallSa).string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* k : {"e0", "e1", "n_enc", "degeneracy"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_LT(j["e0"].get<double>(), j["e1"].get<double>());
}

TEST(Cli, EncodeWritesChainReadableByExact) {
  const auto dir = scratch("encode");
  const auto chain = dir / "chain.json";
  ASSERT_EQ(run("encode --config " + write_config(dir, kSmallSa).string() + " --out " + chain.string()).code, 0);
  EXPECT_EQ(run("exact --chain " + chain.string()).code, 0);
}

TEST(Cli, AnnealWritesSamples) {
  const auto dir = scratch("anneal");
  const auto out = dir / "samples.csv";
  ASSERT_EQ(run("anneal --protocol sa --config " + write_config(dir, kSmallSa).string() + " --out " +
                out.string()).code, 0);
  const auto t = dwqa::CsvTable::parse(dwqa::read_text_file(out));
  EXPECT_EQ(t.rows.size(), 20u);
  EXPECT_EQ(t.header.front(), "run_id");
  const auto eff = run("efftemp --config " + (dir / "config.json").string() + " --samples " + out.string());
  EXPECT_EQ(eff.code, 0);
}

TEST(Cli, SweepIsByteIdenticalAcrossRuns) {
  const auto dir = scratch("sweep");
  const auto cfg = write_config(dir, kSmallSa).string();
  ASSERT_EQ(run("sweep --config " + cfg + " --out " + (dir / "a").string()).code, 0);
  ASSERT_EQ(run("sweep --config " + cfg + " --out " + (dir / "b").string()).code, 0);
  EXPECT_EQ(dwqa::read_text_file(dir / "a" / "curve.csv"), dwqa::read_text_file(dir / "b" / "curve.csv"));
  ASSERT_EQ(run("sweep --config " + cfg + " --seed 4 --out " + (dir / "c").string()).code, 0);
  EXPECT_NE(dwqa::read_text_file(dir / "a" / "curve.csv"), dwqa::read_text_file(dir / "c" / "curve.csv"));
}

TEST(Cli, TebdCurveAndFit) {
  const auto dir = scratch("tebd");
  const auto curve = dir / "curve.csv";
  ASSERT_EQ(run("tebd --config " + write_config(dir, kSmallTebd).string() + " --out " + curve.string()).code, 0);
  const auto t = dwqa::CsvTable::parse(dwqa::read_text_file(curve));
  EXPECT_EQ(t.header, (std::vector<std::string>{"t_a", "rho", "p_const", "e_res", "p_gs", "truncation_error"}));
  const auto fit = run("fit --curve " + curve.string() + " --y rho --model power_law --lo 1 --hi 8");
  ASSERT_EQ(fit.code, 0);
  const auto j = nlohmann::json::parse(fit.out);
  EXPECT_EQ(j["n_points"].get<int>(), 4);
  EXPECT_GT(j["exponent"].get<double>(), 0.0);
}

TEST(Cli, ClassicalTable) {
  const auto dir = scratch("classical");
  const auto cfg = write_config(dir, R"({
    "potential": {"h0": 1.0}, "encoding": {"n": 211},
    "protocol": {"kind": "classical", "de_popsize": 20},
    "sweep": [4, 16], "runs": {"n_runs": 1, "n_reads": 20}})");
  const auto r = run("classical --algo de --config " + cfg.string());
  ASSERT_EQ(r.code, 0);
  const auto t = dwqa::CsvTable::parse(r.out);
  EXPECT_EQ(t.rows.size(), 2u);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("codes");
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("sweep --config " + (dir / "missing.json").string()).code, 2);
  EXPECT_EQ(run("sweep --config " + write_config(dir, R"({"sweep": []})").string()).code, 2);
  EXPECT_EQ(run("reproduce no-such-figure --out " + dir.string()).code, 2);
  EXPECT_EQ(run("anneal --protocol tebd --config " + (dir / "config.json").string()).code, 2);
  EXPECT_EQ(run("--help").code, 0);
}
