#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "support.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run instab(const std::string& args) {
  const std::string cmd = std::string(INSTAB_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  Run r{-1, {}};
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string toy() { return ib::test::data("toy.lag"); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, DeriveToyJson) {
  auto r = instab("derive " + toy());
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "1");
  EXPECT_TRUE(j.contains("brackets"));
}

TEST(Cli, DeriveIsDeterministic) {
  auto a = instab("derive " + toy() + " --seed 42");
  auto b = instab("derive " + toy() + " --seed 42");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OutFileAndSummary) {
  auto dir = std::filesystem::temp_directory_path() / "instab_cli_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "toy.json";
  auto r = instab("derive " + toy() + " --out " + path.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find('{'), std::string::npos);
  auto both = instab("derive " + toy() + " --out " + path.string() + " --json");
  EXPECT_EQ(both.out, slurp(path));
  std::filesystem::remove_all(dir);
}

TEST(Cli, VerifyOscillatorPasses) {
  EXPECT_EQ(instab("verify " + ib::test::data("oscillator.lag")).code, 0);
}

TEST(Cli, InjectedCorruptionFails) {
  auto r = instab("verify " + toy() + " --checks hamilton-equivalence --inject-test-corruption");
  EXPECT_EQ(r.code, 4);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["checks"][0]["status"], "fail");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(instab("lattice sd --n 1").code, 1);
  EXPECT_EQ(instab("derive /nonexistent/file.lag").code, 1);
  EXPECT_EQ(instab("verify " + toy() + " --checks bogus").code, 1);
  EXPECT_EQ(instab("bogus-subcommand").code, 1);
}

TEST(Cli, IdentificationFailureExitCode) {
  auto dir = std::filesystem::temp_directory_path() / "instab_cli_shifted";
  std::filesystem::create_directories(dir);
  auto path = dir / "shifted.lag";
  std::ofstream(path) << "system shifted\ncoord x even\ncoord y even\ncoord z even\n"
                         "L = dx^2/2 + (z + x^2/2)*dy - z*x^2/2\n";
  EXPECT_EQ(instab("derive " + path.string() + " --degree 0").code, 3);
  EXPECT_EQ(instab("derive " + path.string()).code, 3);
  std::filesystem::remove_all(dir);
}

TEST(Cli, GaugeSystemExitCode) {
  auto dir = std::filesystem::temp_directory_path() / "instab_cli_gauge";
  std::filesystem::create_directories(dir);
  auto path = dir / "gauge.lag";
  std::ofstream(path) << "system gauge\ncoord x even\ncoord y even\nL = (dx - y)^2/2\n";
  EXPECT_EQ(instab("oracle " + path.string()).code, 2);
  std::filesystem::remove_all(dir);
}

TEST(Cli, LatticeDocumentParses) {
  auto r = instab("lattice sd --n 2 --a 0.5 --m 2");
  ASSERT_EQ(r.code, 0);
  auto spec = ib::parse_system(r.out);
  EXPECT_EQ(spec.size(), 12u);
}

TEST(Cli, OracleToy) {
  auto r = instab("oracle " + toy() + " --samples 50");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_LT(j["deviation"].get<double>(), 1e-9);
}
