#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scatterlab/experiment.hpp"

using namespace scatterlab;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = SCATTERLAB_CONFIG_DIR;
const std::string kCli = SCATTERLAB_CLI;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("scatterlab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = kCli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "config accepted:\n" << text;
  return ConfigError("", std::nullopt, "");
}

}  // namespace

TEST(Config, ParsesExampleConfigs) {
  for (const auto& name : {"z8_ideal.yaml", "z64_thm4.yaml", "z16_random.yaml", "z4x6_random.yaml",
                           "mean_projector.yaml", "over_budget.yaml"}) {
    EXPECT_NO_THROW(load_config(kConfigs / name)) << name;
  }
  const auto c = load_config(kConfigs / "z4x6_random.yaml");
  EXPECT_EQ(c.group, (GroupSpec{4, 6}));
  EXPECT_EQ(c.bank.kind, "random");
  EXPECT_EQ(c.base_dir, kConfigs);
}

TEST(Config, UnknownFieldNamesLineAndField) {
  const auto e = config_error("group: 8\nbank:\n  kind: ideal\n  lowpass: [0]\ndepth: 2\n");
  EXPECT_EQ(e.field(), "bank.lowpass");
  EXPECT_EQ(e.line(), 4u);
}

TEST(Config, MissingAndInvalidFields) {
  EXPECT_EQ(config_error("group: 8\nbank: {kind: ideal}\n").field(), "depth");
  EXPECT_EQ(config_error("bank: {kind: ideal}\ndepth: 2\n").field(), "group");
  const auto e = config_error("group: 8\nbank: {kind: ideal}\ndepth: 0\n");
  EXPECT_EQ(e.field(), "depth");
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(config_error("group: 8\nbank: {kind: wavelet}\ndepth: 1\n").field(), "bank.kind");
  EXPECT_EQ(config_error("group: 8\nbank: {kind: ideal}\ndepth: 1\nbounds: [thm5]\n").field(), "bounds");
  EXPECT_EQ(config_error("group: 4xx6\nbank: {kind: ideal}\ndepth: 1\n").field(), "group");
  EXPECT_EQ(config_error("mode: generic\ngeneric: {dim: 4}\ndepth: 2\nbounds: [thm3]\n").field(), "bounds");
  EXPECT_TRUE(config_error("group: [8\n").line().has_value());
}

TEST(Config, FrequenciesWrapAndAcceptCoordinates) {
  const GroupSpec z8{8}, z46{4, 6};
  EXPECT_EQ(resolve_frequency(z8, FrequencyToken{{-1}}, "x"), 7u);
  EXPECT_EQ(resolve_frequency(z46, FrequencyToken{{1, -1}}, "x"), z46.to_index({1, 5}));
  EXPECT_THROW(resolve_frequency(z46, FrequencyToken{{1, 2, 3}}, "x"), ConfigError);
}

TEST(Runner, Z8IdealPipelineCertifies) {
  auto c = load_config(kConfigs / "z8_ideal.yaml");
  const auto rec = run_experiment(c);
  ASSERT_EQ(rec.signals.size(), 4u);
  EXPECT_TRUE(rec.passed());
  for (const auto& s : rec.signals) {
    EXPECT_EQ(s.ledger.depth(), 3u);
    ASSERT_NE(s.report.find("thm3"), nullptr);
    EXPECT_DOUBLE_EQ(s.report.find("thm3")->base, 6.0 / 7.0);
    for (std::size_t n = 1; n <= 3; ++n) {
      EXPECT_NEAR(s.ledger.cumulative_output(n) + s.ledger.propagated[n], s.ledger.input_energy,
                  1e-9 * s.ledger.input_energy);
    }
  }
}

TEST(Runner, GenericModeUsesWitnessBound) {
  const auto rec = run_experiment(load_config(kConfigs / "mean_projector.yaml"));
  EXPECT_TRUE(rec.passed());
  const auto* e = rec.signals[0].report.find("cor1");
  ASSERT_NE(e, nullptr);
  EXPECT_NEAR(e->base, 1.0 - 1.0 / 8.0, 1e-14);
}

TEST(Runner, BudgetRejectedBeforeRunning) {
  try {
    run_experiment(load_config(kConfigs / "over_budget.yaml"));
    FAIL();
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.depth(), 8u);
  }
}

TEST(Runner, OutputsHaveExpectedLayout) {
  const auto dir = scratch("layout");
  write_outputs(run_experiment(load_config(kConfigs / "z8_ideal.yaml")), dir);
  EXPECT_TRUE(fs::exists(dir / "certificate.txt"));
  const auto energies = slurp(dir / "signal_000" / "energies.csv");
  EXPECT_EQ(energies.substr(0, energies.find('\n')), "layer,num_paths,W_N,output_energy,cumulative_output");
  const auto bounds = slurp(dir / "signal_003" / "bounds.csv");
  EXPECT_EQ(bounds.substr(0, bounds.find('\n')), "layer,theorem,base,prefactor,bound_value,measured_W,margin");
  EXPECT_NE(slurp(dir / "certificate.txt").find("RESULT: PASS"), std::string::npos);
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// Command line

TEST(Cli, RunIsByteIdenticalAcrossRuns) {
  const auto dir = scratch("determinism");
  for (const auto& name : {"z16_random.yaml", "z64_thm4.yaml"}) {
    const auto cfg = (kConfigs / name).string();
    ASSERT_EQ(cli("run --config " + cfg + " --out " + (dir / "a").string(), dir / "log"), 0) << slurp(dir / "log");
    ASSERT_EQ(cli("run --config " + cfg + " --out " + (dir / "b").string(), dir / "log"), 0) << slurp(dir / "log");
    for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
      if (!entry.is_regular_file()) continue;
      const auto rel = fs::relative(entry.path(), dir / "a");
      EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / rel)) << rel;
    }
    fs::remove_all(dir / "a");
    fs::remove_all(dir / "b");
  }
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("exit");
  EXPECT_EQ(cli("run --config " + (kConfigs / "over_budget.yaml").string() + " --out " + (dir / "o").string(),
                dir / "log"),
            2);
  EXPECT_NE(slurp(dir / "log").find("depth 8"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "o"));

  std::ofstream(dir / "bad.yaml") << "group: 8\nbank: {kind: ideal, lows: [0]}\ndepth: 2\n";
  EXPECT_EQ(cli("run --config " + (dir / "bad.yaml").string(), dir / "log"), 1);
  EXPECT_NE(slurp(dir / "log").find("bank.lows"), std::string::npos);

  EXPECT_EQ(cli("frobnicate", dir / "log"), 1);
  EXPECT_EQ(cli("verify --filter nosuch", dir / "log"), 1);
  EXPECT_EQ(cli("verify --filter parseval --inject-fault lp", dir / "log"), 3);
  EXPECT_EQ(cli("verify", dir / "log"), 0) << slurp(dir / "log");
  fs::remove_all(dir);
}

TEST(Cli, GenFrameWritesLoadableBank) {
  const auto dir = scratch("genframe");
  ASSERT_EQ(cli("gen-frame --group 4x6 --kind random --m 3 --gap-radius 1 --seed 5 --out " + (dir / "b.txt").string(),
                dir / "log"),
            0)
      << slurp(dir / "log");
  const auto bank = io::load_bank(dir / "b.txt");
  EXPECT_EQ(bank.group(), (GroupSpec{4, 6}));
  EXPECT_LE(audit(bank).lp_deficiency, 1e-12);

  ASSERT_EQ(cli("gen-frame --group 12 --kind ideal --low 0,1,-1 --bands \"2,-2,3,-3,4,-4;5,-5,6\" --out " +
                    (dir / "i.txt").string(),
                dir / "log"),
            0);
  EXPECT_EQ(audit(io::load_bank(dir / "i.txt")).max_support, 6u);

  EXPECT_EQ(cli("gen-frame --group 8 --kind ideal --low 0 --bands \"1,2,3;3,4,5,6,7\"", dir / "log"), 1);
  EXPECT_NE(slurp(dir / "log").find("overlapping"), std::string::npos);

  // a file bank drives a run
  std::ofstream(dir / "run.yaml") << "group: 4x6\nbank: {kind: file, path: b.txt}\nsignals: {kind: delta}\n"
                                     "depth: 3\nbounds: [thm3, thm4]\n";
  EXPECT_EQ(cli("run --config " + (dir / "run.yaml").string() + " --out " + (dir / "out").string(), dir / "log"), 0)
      << slurp(dir / "log");
  EXPECT_TRUE(fs::exists(dir / "out" / "energies.csv"));
  fs::remove_all(dir);
}
