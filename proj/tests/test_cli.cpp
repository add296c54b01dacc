#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "netreal/io.hpp"
#include "netreal/report.hpp"

namespace netreal {
namespace {

struct RunResult {
  int status = -1;
  std::string out;  // stdout and stderr interleaved
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(NETREAL_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(NETREAL_DATA_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("netreal_cli_" + name)).string();
}

TEST(Cli, RiverDemoPasses) {
  const auto r = run("demo river");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("RESULT: PASS"), std::string::npos);
}

TEST(Cli, RiverDemoWithMisplacedQFails) {
  const auto r = run("demo river --q " + data("river_q_misplaced.json"));
  EXPECT_EQ(r.status, 1) << r.out;
  EXPECT_NE(r.out.find("[FAIL] imc_controller_compatible"), std::string::npos) << r.out;
}

TEST(Cli, RiverDemoJsonValidates) {
  const auto r = run("demo river --json");
  ASSERT_EQ(r.status, 0) << r.out;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(validate_report_json(j).empty());
  const auto text = run("demo river");
  for (const auto& s : j["stages"]) {
    EXPECT_NE(text.out.find((s["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") + s["name"].get<std::string>()),
              std::string::npos);
  }
}

TEST(Cli, ProductDemoPassesAndCarriesNotes) {
  const auto r = run("demo remark1");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("note: "), std::string::npos);
}

TEST(Cli, CheckVerdicts) {
  EXPECT_EQ(run("check " + data("river_nonminimal.json")).status, 0);
  const auto bad = run("check " + data("river_plant.json") + " --json");
  EXPECT_EQ(bad.status, 1) << bad.out;
  const Json j = Json::parse(bad.out);
  EXPECT_EQ(j["stages"][0]["name"], "compatibility");
  EXPECT_EQ(j["stages"][0]["detail"]["violations"].size(), 2u);
  EXPECT_EQ(run("check " + data("product_g1.json")).status, 1);
  EXPECT_EQ(run("check --d-mode edge " + data("product_g1.json")).status, 0);
}

TEST(Cli, InputErrorsExitTwo) {
  const std::string truncated = temp_path("truncated.json");
  const std::string text = io::read_text(data("river_plant.json"));
  io::write_text(truncated, text.substr(0, text.size() / 3));
  const auto r = run("check " + truncated);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("line "), std::string::npos) << r.out;

  Json j = Json::parse(text);
  j.erase("C");
  const std::string missing = temp_path("missing.json");
  io::write_text(missing, j.dump());
  const auto m = run("check " + missing);
  EXPECT_EQ(m.status, 2);
  EXPECT_NE(m.out.find("missing field 'C'"), std::string::npos) << m.out;

  EXPECT_EQ(run("check /nonexistent/system.json").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("check --d-mode loose " + data("river_plant.json")).status, 2);
  EXPECT_EQ(run("compose --op mul " + data("river_plant.json")).status, 2);
  std::filesystem::remove(truncated);
  std::filesystem::remove(missing);
}

TEST(Cli, ComposeReportsAndWrites) {
  const std::string out = temp_path("product.json");
  const auto r = run("compose --op mul " + data("river_nonminimal.json") + " " + data("river_q.json") + " -o " + out);
  EXPECT_EQ(r.status, 0) << r.out;
  const auto f = io::load_system(out);
  EXPECT_EQ(f.system.n(), 8);
  std::filesystem::remove(out);
  // D = 0 cannot be inverted.
  EXPECT_EQ(run("compose --op inv " + data("river_plant.json")).status, 1);
}

TEST(Cli, ImcThenCloseLoop) {
  const std::string k = temp_path("controller.json");
  const auto r = run("imc " + data("river_plant.json") + " " + data("river_q.json") + " -o " + k);
  EXPECT_EQ(r.status, 0) << r.out;
  const auto c = run("closeloop " + data("river_plant.json") + " " + k);
  EXPECT_EQ(c.status, 0) << c.out;
  EXPECT_EQ(run("imc " + data("river_plant.json") + " " + data("river_q_misplaced.json")).status, 1);
  std::filesystem::remove(k);
}

TEST(Cli, SimulateWritesCsv) {
  const auto r = run("simulate " + data("river_plant.json") + " --steps 3 --step-channel 0");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "y.0.0,y.1.0,y.2.0,x.0.0,x.1.0,x.2.0");
  const auto d = run("simulate " + data("river_nonminimal.json") + " --steps 5 --distributed -o " +
                     temp_path("sim.csv"));
  EXPECT_EQ(d.status, 0) << d.out;
  EXPECT_NE(d.out.find("[PASS] distributed_matches_centralized"), std::string::npos) << d.out;
  // The original realization does not fit the graph: precondition error.
  EXPECT_EQ(run("simulate " + data("river_plant.json") + " --steps 5 --distributed").status, 2);
  const auto imc = run("simulate " + data("river_plant.json") + " --steps 4 --step-channel 1 --imc-q " +
                       data("river_q.json"));
  EXPECT_EQ(imc.status, 0) << imc.out;
  std::filesystem::remove(temp_path("sim.csv"));
}

}  // namespace
}  // namespace netreal
