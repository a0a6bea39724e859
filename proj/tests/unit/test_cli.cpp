#include "kkmass/cli/run.hpp"
#include "kkmass/models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kkmass::cli {
namespace {

namespace fs = std::filesystem;

const std::string kQuad = R"("quadrature": {"polar": 6, "azimuthal": 12, "fiber": 4})";

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("kkmass_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

struct Invocation {
  int code;
  std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "kkmass");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const Check* find_check(const Report& r, const std::string& name) {
  for (const Check& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

TEST(Config, TaskNamesRoundTrip) {
  for (Task t : {Task::Mass, Task::Decay, Task::VerifyIdentities, Task::BoundaryLimit, Task::Sweep}) {
    EXPECT_EQ(parse_task(to_string(t)), t);
  }
  EXPECT_THROW(parse_task("integrate"), ConfigError);
}

TEST(Config, ParsesFullConfiguration) {
  const RunConfig c = parse_config(R"({
    "model": {"name": "perturbed_product", "fiber_periods": [2.0], "shape": "mixing",
              "parameters": {"epsilon": 0.2, "tau": 1.5}},
    "task": "mass",
    "radii": [10, 20, 40],
    "quadrature": {"polar": 4, "azimuthal": 8, "fiber": 2},
    "step": {"step": 0.001, "relative": false},
    "threads": 3, "seed": 9, "samples_per_shell": 5,
    "oracle": {"mass": 0.5, "tolerance": 0.1}
  })", Task::Mass);
  EXPECT_EQ(c.model.name, ModelName::PerturbedProduct);
  EXPECT_EQ(c.model.shape, PerturbationShape::Mixing);
  EXPECT_EQ(c.model.get("tau", 0.0), 1.5);
  EXPECT_EQ(c.model.fiber_periods, std::vector<double>{2.0});
  EXPECT_EQ(c.radii, (std::vector<double>{10, 20, 40}));
  EXPECT_EQ(c.quadrature.polar, 4);
  EXPECT_EQ(c.step.step, 0.001);
  EXPECT_FALSE(c.step.relative);
  EXPECT_EQ(c.threads, 3);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.samples_per_shell, 5);
  ASSERT_TRUE(c.oracle.has_value());
  EXPECT_EQ(c.oracle->value, 0.5);
}

TEST(Config, LadderShorthand) {
  const RunConfig c = parse_config(R"({"model": {"name": "flat"}, "ladder": {"r0": 5, "count": 3}})", Task::Mass);
  EXPECT_EQ(c.radii, (std::vector<double>{5, 10, 20}));
}

TEST(Config, DefaultRadiiClearTheExcisedBall) {
  EXPECT_EQ(default_radii(Chart{3, {}, 0.0}), (std::vector<double>{62.5, 125, 250, 500, 1000}));
  EXPECT_EQ(default_radii(Chart{3, {}, 10.0}).front(), 80.0);
}

TEST(Config, ErrorsNameTheSourceAndField) {
  auto message = [](const std::string& text, Task task = Task::Mass) {
    try {
      parse_config(text, task, "cfg.json");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"model": {"name": "flat"}, "radii": [1, 2)").find("cfg.json: parse error"), std::string::npos);
  EXPECT_NE(message(R"({"model": {"name": "flat"}, "bogus": 1})").find("'bogus'"), std::string::npos);
  EXPECT_NE(message(R"({"model": {"name": "flat", "parameters": {"k": "x"}}})").find("model.parameters.k"),
            std::string::npos);
  EXPECT_NE(message(R"({"model": {"name": "kerr"}})").find("model.name"), std::string::npos);
  EXPECT_NE(message(R"({"model": {"name": "flat"}, "task": "decay"})").find("task"), std::string::npos);
  EXPECT_NE(message(R"({"radii": [1, 2, 3]})").find("model"), std::string::npos);
  EXPECT_NE(message(R"({"model": {"name": "flat"}, "threads": 0})").find("threads"), std::string::npos);
  EXPECT_THROW(load_config("/nonexistent/kkmass.json", Task::Mass), ConfigError);
}

TEST(Run, FlatMassPasses) {
  const Report r = run(parse_config(R"({"model": {"name": "product_flat", "fiber_periods": [2.0]}, )" + kQuad + "}",
                                    Task::Mass));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.body["status"], "pass");
  EXPECT_EQ(r.body["results"]["limit"], 0.0);
  EXPECT_EQ(r.body["normalization"]["fiber_volume"], 2.0);
}

TEST(Run, ReissnerNordstromReportsTheNormalizationRatio) {
  const Report r = run(parse_config(R"({"model": {"name": "euclidean_rn", "parameters": {"m": 1, "q": 1}}, )" + kQuad +
                                        "}",
                                    Task::Mass));
  const double ratio = r.body["results"]["rn"]["flux_over_closed_form"];
  EXPECT_NEAR(ratio, rn_circle_length(1.0, 1.0), 0.01 * rn_circle_length(1.0, 1.0));
  const Check* c = find_check(r, "rn mass matches closed form");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_FALSE(r.passed());
}

TEST(Run, DeclaredOracleIsChecked) {
  const Report r = run(parse_config(R"({"model": {"name": "schwarzschild_slice", "parameters": {"m": 2}},
                                        "oracle": {"mass": 2.0, "tolerance": 0.01}, )" +
                                        kQuad + "}",
                                    Task::Mass));
  const Check* c = find_check(r, "declared mass oracle");
  ASSERT_NE(c, nullptr);
  EXPECT_TRUE(c->passed);
  EXPECT_TRUE(r.passed());
}

TEST(Run, DecayTaskRecoversPlantedRate) {
  const Report r = run(parse_config(R"({"model": {"name": "perturbed_product", "fiber_periods": [1.0],
      "shape": "anisotropic", "parameters": {"epsilon": 0.3, "tau": 1.5}}, "ladder": {"r0": 10}})",
                                    Task::Decay));
  EXPECT_TRUE(r.passed());
}

TEST(Run, VerifyIdentitiesPasses) {
  const Report r = run(parse_config(
      R"({"model": {"name": "schwarzschild_slice", "parameters": {"m": 1}}, "identities": {"points": 1}})",
      Task::VerifyIdentities));
  EXPECT_TRUE(r.passed()) << render_text(r);
}

TEST(Run, SweepIsMonotoneAtFixedCircle) {
  const Report r = run(parse_config(R"({"model": {"name": "euclidean_rn", "parameters": {"m": 1, "q": 1}},
      "sweep": {"parameter": "m", "values": [1, 0, -1], "fixed_circle": 25.888}, )" +
                                        kQuad + "}",
                                    Task::Sweep));
  EXPECT_TRUE(r.passed()) << render_text(r);
  EXPECT_EQ(r.body["results"]["rows"].size(), 3u);
}

TEST(Run, BodyIsIndependentOfThreadCount) {
  const std::string text = R"({"model": {"name": "perturbed_product", "fiber_periods": [1.0],
      "shape": "mixing", "parameters": {"epsilon": 0.3, "tau": 1.5}}, )" + kQuad + "}";
  RunConfig c = parse_config(text, Task::Mass);
  const std::string one = run(c).body.dump();
  for (int t : {2, 8}) {
    c.threads = t;
    EXPECT_EQ(run(c).body.dump(), one);
  }
}

TEST(Cli, ExitCodes) {
  const std::string flat = write_temp("flat.json", R"({"model": {"name": "flat"}, )" + kQuad + "}");
  const std::string rn =
      write_temp("rn.json", R"({"model": {"name": "euclidean_rn", "parameters": {"m": 1, "q": 1}}, )" + kQuad + "}");
  const std::string bad = write_temp("bad.json", R"({"model": {"name": "flat"}, "radii": [1, 2)");

  EXPECT_EQ(invoke({"mass", "--config", flat}).code, 0);
  EXPECT_EQ(invoke({"mass", "--config", rn}).code, 1);
  const Invocation b = invoke({"mass", "--config", bad});
  EXPECT_EQ(b.code, 2);
  EXPECT_NE(b.err.find("parse error"), std::string::npos);
  EXPECT_EQ(invoke({"mass"}).code, 2);
  EXPECT_EQ(invoke({"integrate", "--config", flat}).code, 2);
  EXPECT_EQ(invoke({"mass", "--config", flat, "--threads", "0"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"decay", "--config", flat}).code, 0);
}

TEST(Cli, WritesVersionedJsonReport) {
  const std::string cfg = write_temp("schw.json",
                                     R"({"model": {"name": "schwarzschild_slice", "parameters": {"m": 1}}, )" + kQuad + "}");
  const fs::path out = fs::temp_directory_path() / "kkmass_test_report.json";
  fs::remove(out);
  const Invocation inv = invoke({"mass", "--config", cfg, "--out", out.string(), "--threads", "2"});
  EXPECT_EQ(inv.code, 0);
  EXPECT_NE(inv.out.find("status: pass"), std::string::npos);
  std::ifstream in(out);
  ASSERT_TRUE(in.good());
  const nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["execution"]["threads"], 2);
  EXPECT_EQ(j["body"]["task"], "mass");
  EXPECT_FALSE(j["body"]["inputs"].contains("threads"));
}

}  // namespace
}  // namespace kkmass::cli
