#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "relgame_cli.hpp"

namespace relgame {
namespace {

using nlohmann::json;

std::string data(const std::string& name) { return std::string(RELGAME_TEST_DATA_DIR) + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "relgame");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("relgame_cli_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

TEST(CliValueTest, BridgeNetworkCoalitions) {
  const auto ab = run({"value", data("bridge.json"), "a,b"});
  EXPECT_EQ(ab.code, 0) << ab.err;
  EXPECT_TRUE(contains(ab.out, "extension value: 0.050000000000"));
  EXPECT_TRUE(contains(ab.out, "base value: 1"));

  const auto all = run({"value", data("bridge.json"), "a,b,c,d,e", "--json"});
  ASSERT_EQ(all.code, 0);
  const auto doc = json::parse(all.out);
  EXPECT_NEAR(doc["value"].get<double>(), 0.19875, 1e-12);
  EXPECT_EQ(doc["base_value"], 1);

  const auto none = run({"value", data("bridge.json"), ""});
  EXPECT_EQ(none.code, 0);
  EXPECT_TRUE(contains(none.out, "extension value: 0.000000000000"));
}

TEST(CliValueTest, SerialAndTyped) {
  const auto serial = run({"value", data("serial.json"), "c1,c2,c3,e", "--json"});
  ASSERT_EQ(serial.code, 0);
  EXPECT_NEAR(json::parse(serial.out)["value"].get<double>(), 0.5625, 1e-12);

  const auto typed = run({"value", data("typed-majority.json"), "voter1,voter2,voter3", "--json"});
  ASSERT_EQ(typed.code, 0) << typed.err;
  EXPECT_NEAR(json::parse(typed.out)["value"].get<double>(), 0.5, 1e-12);
}

TEST(CliValueTest, UsageErrors) {
  EXPECT_EQ(run({"value", data("bridge.json"), "a,zz"}).code, 1);
  EXPECT_EQ(run({"value", data("bridge.json"), "a,a"}).code, 1);
  EXPECT_EQ(run({"value", data("missing.json"), "a"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  const auto bad = temp_file("bad.json", R"({"format_version": 1, "game": "explicit", "labels": ["x"],
    "minimal_winning": [["x"]], "survival": [0.5], "extra": 1})");
  const auto r = run({"value", bad, "x"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "extra"));
}

TEST(CliValueTest, UnreachableTargetWarns) {
  const auto path = temp_file("unreachable.json", R"({"format_version": 1, "game": "network",
    "network": {"vertices": ["s", "m", "t"], "source": "s", "target": "t",
                "edges": [{"id": "a", "from": "s", "to": "m"}]},
    "survival": [0.9]})");
  const auto r = run({"value", path, "a"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.err, "unreachable"));
  EXPECT_TRUE(contains(r.out, "extension value: 0.000000000000"));
}

TEST(CliShapleyTest, ExactBridgeNetwork) {
  const auto r = run({"shapley", data("bridge.json"), "--exact", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_NEAR(doc["sum"].get<double>(), 0.19875, 1e-12);
  EXPECT_EQ(doc["agents"][4]["agent"], "e");
  EXPECT_NEAR(doc["agents"][4]["value"].get<double>(), 0.0356666666666667, 1e-12);
}

TEST(CliShapleyTest, EpsilonPlansSampleCount) {
  const auto r = run({"shapley", data("bridge.json"), "--epsilon", "0.01", "--delta", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "k=18445 delta=0.05 epsilon="));
  EXPECT_TRUE(contains(r.out, "seed=1"));
}

TEST(CliShapleyTest, OutputIdenticalAcrossWorkerCounts) {
  for (const char* mode : {"independent", "shared"}) {
    const auto base = run({"shapley", data("bridge.json"), "--samples", "20000", "--seed", "7", "--mode", mode});
    ASSERT_EQ(base.code, 0) << base.err;
    for (const char* w : {"2", "8"}) {
      const auto other = run({"shapley", data("bridge.json"), "--samples", "20000", "--seed", "7", "--mode",
                              mode, "--workers", w});
      EXPECT_EQ(other.out, base.out) << mode << " workers " << w;
    }
  }
}

TEST(CliShapleyTest, BadOptions) {
  EXPECT_EQ(run({"shapley", data("bridge.json"), "--samples", "0"}).code, 1);
  EXPECT_EQ(run({"shapley", data("bridge.json")}).code, 1);
  EXPECT_EQ(run({"shapley", data("bridge.json"), "--samples", "10", "--epsilon", "0.1"}).code, 1);
  EXPECT_EQ(run({"shapley", data("bridge.json"), "--exact", "--samples", "10"}).code, 1);
  EXPECT_EQ(run({"shapley", data("bridge.json"), "--samples", "10", "--mode", "odd"}).code, 1);
  EXPECT_EQ(run({"shapley", data("bridge.json"), "--epsilon", "0.1", "--delta", "1.5"}).code, 1);
  EXPECT_EQ(run({"shapley", data("bridge.json"), "--exact", "--cap-shapley", "4"}).code, 2);
}

TEST(CliCoreTest, Verdicts) {
  const auto bridge = run({"core", data("bridge.json"), "--json"});
  ASSERT_EQ(bridge.code, 0) << bridge.err;
  const auto doc = json::parse(bridge.out);
  EXPECT_EQ(doc["verdict"], "NonEmpty");
  EXPECT_EQ(doc["method"], "brute");
  EXPECT_EQ(doc["verified"], true);

  const auto no_e = run({"core", data("bridge-removed.json")});
  EXPECT_EQ(no_e.code, 0);
  EXPECT_TRUE(contains(no_e.out, "verdict: Empty"));

  const auto unanimity = run({"core", data("unanimity.json")});
  EXPECT_EQ(unanimity.code, 0);
  EXPECT_TRUE(contains(unanimity.out, "method: veto"));
  EXPECT_TRUE(contains(unanimity.out, "verified in core: yes"));

  const auto typed = run({"core", data("typed-majority.json"), "--json"});
  ASSERT_EQ(typed.code, 0) << typed.err;
  const auto tdoc = json::parse(typed.out);
  EXPECT_EQ(tdoc["method"], "typed");
  for (const auto& x : tdoc["imputation"]) EXPECT_NEAR(x.get<double>(), 0.5 / 3.0, 1e-12);
}

TEST(CliCoreTest, MethodSelection) {
  const auto veto = run({"core", data("bridge.json"), "--method", "veto"});
  EXPECT_EQ(veto.code, 0);
  EXPECT_TRUE(contains(veto.out, "verdict: Unknown"));
  EXPECT_TRUE(contains(veto.out, "no base veto agents"));
  EXPECT_EQ(run({"core", data("bridge.json"), "--method", "convex"}).code, 2);
  EXPECT_EQ(run({"core", data("bridge.json"), "--method", "typed"}).code, 1);
  EXPECT_EQ(run({"core", data("bridge.json"), "--method", "nope"}).code, 1);
  const auto capped = run({"core", data("bridge.json"), "--cap-core", "3"});
  EXPECT_EQ(capped.code, 0);
  EXPECT_TRUE(contains(capped.out, "verdict: Unknown"));
  EXPECT_TRUE(contains(capped.out, "brute:"));
  EXPECT_EQ(run({"core", data("bridge.json"), "--method", "brute", "--cap-core", "3"}).code, 2);
}

TEST(CliVetoTest, Lists) {
  const auto w = run({"veto", data("weighted.json")});
  EXPECT_EQ(w.code, 0) << w.err;
  EXPECT_TRUE(contains(w.out, "base veto agents: big"));
  EXPECT_TRUE(contains(w.out, "extension veto agents: big"));
  const auto bridge = run({"veto", data("bridge.json"), "--json"});
  EXPECT_TRUE(json::parse(bridge.out)["base"].empty());
}

TEST(CliCheckTest, Membership) {
  const auto blocked = run({"check", data("bridge.json"), "--imputation", "0.19875,0,0,0,0"});
  EXPECT_EQ(blocked.code, 0);
  EXPECT_TRUE(contains(blocked.out, "in core: no"));
  EXPECT_TRUE(contains(blocked.out, "blocking coalition: {c, d}"));

  const auto proposed = run({"check", data("bridge.json"), "--imputation", "0,0.05,0,0.05,0.09875", "--json"});
  ASSERT_EQ(proposed.code, 0);
  const auto doc = json::parse(proposed.out);
  EXPECT_EQ(doc["in_core"], false);
  EXPECT_EQ(doc["blocking"], json({"a", "c", "d", "e"}));

  const auto computed = json::parse(run({"core", data("bridge.json"), "--json"}).out)["imputation"];
  std::string text;
  for (const auto& x : computed) text += (text.empty() ? "" : ",") + nlohmann::json(x.get<double>()).dump();
  const auto ok = run({"check", data("bridge.json"), "--imputation", text});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(contains(ok.out, "in core: yes"));

  EXPECT_EQ(run({"check", data("bridge.json"), "--imputation", "0.1,0,0,0,0"}).code, 1);
  EXPECT_EQ(run({"check", data("bridge.json"), "--imputation", "x,0,0,0,0"}).code, 1);
}

TEST(CliFixtureTest, RoundTripThroughJson) {
  for (const char* name : {"bridge.json", "bridge-removed.json", "serial.json", "unanimity.json",
                           "typed-majority.json", "weighted.json"}) {
    const auto spec = io::load_game_spec(data(name));
    const auto again = io::parse_game_spec(io::to_json(spec));
    EXPECT_EQ(again.labels, spec.labels) << name;
    EXPECT_EQ(again.survival, spec.survival) << name;
    EXPECT_EQ(io::to_json(again), io::to_json(spec)) << name;
    if (!spec.is_typed()) {
      const auto g1 = spec.reliability_game({});
      const auto g2 = again.reliability_game({});
      for (Mask m = 0; m < (Mask{1} << spec.num_agents()); ++m) EXPECT_EQ(g1.base.wins(m), g2.base.wins(m));
    }
  }
}

}  // namespace
}  // namespace relgame
