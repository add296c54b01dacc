#include <gtest/gtest.h>

#include "netreal/demos.hpp"
#include "netreal/io.hpp"

namespace netreal {
namespace {

const Stage& stage(const Report& rep, const std::string& name) {
  for (const auto& s : rep.stages) {
    if (s.name == name) return s;
  }
  throw std::runtime_error("no stage " + name);
}

TEST(RiverDemo, AllStagesPass) {
  const auto rep = run_demo_river();
  for (const auto& s : rep.stages) EXPECT_TRUE(s.pass) << s.name << ": " << s.detail.dump();
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.stages.size(), 10u);
  EXPECT_EQ(stage(rep, "imc_controller_compatible").detail["states"], 6);
  EXPECT_EQ(stage(rep, "witness_distributed_execution").detail["messages"], 200);
}

TEST(RiverDemo, MisplacedQBlockFailsCompatibility) {
  RiverDemoOptions opt;
  fixtures::RiverQValues v;
  v.misplace_e21 = true;
  opt.q = fixtures::river_demo_q(v);
  const auto rep = run_demo_river(opt);
  EXPECT_FALSE(rep.pass());
  EXPECT_FALSE(stage(rep, "imc_controller_compatible").pass);
  // Structure is the only thing that breaks; the algebra still holds.
  EXPECT_TRUE(stage(rep, "q_round_trip").pass);
  EXPECT_TRUE(stage(rep, "exact_model_simulation").pass);
}

TEST(RiverDemo, ReportValidatesAgainstSchema) {
  const Json j = run_demo_river().to_json();
  EXPECT_TRUE(validate_report_json(j).empty());
  EXPECT_EQ(j["pass"], true);
}

TEST(ProductDemo, StagesAndNotes) {
  const auto rep = run_demo_product();
  for (const auto& s : rep.stages) EXPECT_TRUE(s.pass) << s.name << ": " << s.detail.dump();
  const auto& v = stage(rep, "g1_strict_fails_on_direct_term").detail["violations"];
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0]["matrix"], "D");
  EXPECT_EQ(v[0]["block"], Json::parse("[2, 1]"));
  EXPECT_EQ(v[1]["matrix"], "D");
  EXPECT_EQ(v[1]["block"], Json::parse("[3, 1]"));
  EXPECT_EQ(rep.notes.size(), 2u);
  EXPECT_TRUE(validate_report_json(rep.to_json()).empty());
}

TEST(ReportSchema, ValidatorRejectsMalformedReports) {
  EXPECT_FALSE(validate_report_json(Json::array()).empty());
  EXPECT_FALSE(validate_report_json(Json::parse(R"({"stages": []})")).empty());
  EXPECT_FALSE(validate_report_json(Json::parse(R"({"stages": [{"name": "a", "pass": 1, "detail": {}}], "pass": true})"))
                   .empty());
  EXPECT_FALSE(validate_report_json(Json::parse(R"({"stages": [{"name": "a", "pass": false, "detail": {}}], "pass": true})"))
                   .empty());
  EXPECT_FALSE(validate_report_json(Json::parse(R"({"stages": [], "pass": true, "extra": 1})")).empty());
  EXPECT_TRUE(validate_report_json(Json::parse(R"({"stages": [], "pass": true})")).empty());
}

TEST(ReportSchema, ShippedSchemaMatchesValidatorKeys) {
  const Json schema = io::parse_json_text(io::read_text(NETREAL_SCHEMA_PATH), "schema");
  EXPECT_EQ(schema["required"], Json::parse(R"(["stages", "pass"])"));
  EXPECT_EQ(schema["properties"]["stages"]["items"]["required"], Json::parse(R"(["name", "pass", "detail"])"));
  EXPECT_EQ(schema["additionalProperties"], false);
}

TEST(Report, TextAndJsonCarrySameVerdicts) {
  const auto rep = run_demo_product();
  const std::string text = rep.to_text();
  const Json j = rep.to_json();
  for (const auto& s : j["stages"]) {
    const std::string line = (s["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") + s["name"].get<std::string>();
    EXPECT_NE(text.find(line), std::string::npos) << line;
  }
  EXPECT_NE(text.find(j["pass"].get<bool>() ? "RESULT: PASS" : "RESULT: FAIL"), std::string::npos);
}

}  // namespace
}  // namespace netreal
