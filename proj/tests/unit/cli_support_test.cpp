#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lift/catalog.hpp"
#include "lift/verify.hpp"
#include "manifest.hpp"
#include "report.hpp"

namespace {

using lift::cli::ManifestError;
using lift::cli::parse_manifest;

constexpr const char* kWarped = R"(
[run]
samples = 7
seed = 5
tol = 1e-9
suites = ["theorem", "lemmas"]

[[manifold]]
name = "warped2"
dim = 2
coords = ["x", "y"]
fiber = [-1.5, 1.5]

[manifold.metric]
g_11 = "1 + x^2"
g_1_2 = "0.1"
g_22 = "1"

[manifold.domain]
x = [-1.0, 1.0]
y = [-0.5, 0.5]
)";

TEST(Manifest, ParsesManifoldAndRunBlocks) {
  const auto m = parse_manifest(kWarped);
  ASSERT_EQ(m.manifolds.size(), 1u);
  const auto& w = m.manifolds[0];
  EXPECT_EQ(w.name, "warped2");
  EXPECT_EQ(w.dim, 2);
  EXPECT_EQ(w.coords, (std::vector<std::string>{"x", "y"}));
  EXPECT_DOUBLE_EQ(w.metric_component(0, 0).eval(std::vector<double>{2.0, 0.0}), 5.0);
  EXPECT_DOUBLE_EQ(w.metric_component(1, 0).eval(std::vector<double>{2.0, 0.0}), 0.1);
  EXPECT_EQ(w.domain[1].lo, -0.5);
  EXPECT_EQ(w.fiber.hi, 1.5);
  EXPECT_EQ(m.run.samples, 7);
  EXPECT_EQ(m.run.seed, 5u);
  EXPECT_EQ(m.run.tolerance, 1e-9);
  EXPECT_EQ(m.run.suites, (std::vector<lift::Suite>{lift::Suite::Theorem, lift::Suite::Lemmas}));
}

TEST(Manifest, DefaultsFiberBox) {
  const auto m = parse_manifest(R"(
[[manifold]]
name = "f"
dim = 1
coords = ["t"]
metric = { g_11 = "1" }
domain = { t = [0.0, 1.0] }
)");
  EXPECT_EQ(m.manifolds[0].fiber.lo, -2.0);
  EXPECT_EQ(m.manifolds[0].fiber.hi, 2.0);
  EXPECT_FALSE(m.run.samples.has_value());
}

TEST(Manifest, RejectsUnknownKeysAtEveryLevel) {
  EXPECT_THROW(parse_manifest("colour = 1\n"), ManifestError);
  EXPECT_THROW(parse_manifest("[run]\nsample = 3\n"), ManifestError);
  const std::string base = R"(
[[manifold]]
name = "f"
dim = 1
coords = ["t"]
domain = { t = [0.0, 1.0] }
)";
  EXPECT_THROW(parse_manifest(base + "curvature = 1\nmetric = { g_11 = \"1\" }\n"), ManifestError);
  EXPECT_THROW(parse_manifest(base + "metric = { g_11 = \"1\", h_11 = \"2\" }\n"), ManifestError);
}

TEST(Manifest, RejectsBadValues) {
  const auto with = [](const std::string& metric, const std::string& extra = "") {
    return R"(
[[manifold]]
name = "f"
dim = 2
coords = ["x", "y"]
domain = { x = [0.0, 1.0], y = [0.0, 1.0] }
)" + extra + "metric = { " + metric + " }\n";
  };
  EXPECT_NO_THROW(parse_manifest(with("g_11 = \"1\", g_22 = \"1\"")));
  EXPECT_THROW(parse_manifest(with("g_11 = \"1 + * x\", g_22 = \"1\"")), ManifestError);
  EXPECT_THROW(parse_manifest(with("g_11 = \"z\", g_22 = \"1\"")), ManifestError);
  EXPECT_THROW(parse_manifest(with("g_11 = \"1\"")), ManifestError);
  EXPECT_THROW(parse_manifest(with("g_11 = \"1\", g_22 = \"1\", g_21 = \"0\"")), ManifestError);
  EXPECT_THROW(parse_manifest(with("g_11 = \"1\", g_22 = \"1\", g_13 = \"0\"")), ManifestError);
  EXPECT_THROW(parse_manifest(with("g_11 = \"1\", g_22 = \"1\"", "fiber = [1.0, -1.0]\n")), ManifestError);
  EXPECT_THROW(parse_manifest("[run]\nsamples = 0\n"), ManifestError);
  EXPECT_THROW(parse_manifest("[run]\nsuites = [\"everything\"]\n"), ManifestError);
  EXPECT_THROW(parse_manifest("[[manifold]\n"), ManifestError);
  EXPECT_THROW(parse_manifest(std::string(kWarped) + std::string(kWarped).substr(std::string(kWarped).find("[[manifold]]"))),
               ManifestError);
}

TEST(Report, JsonSchema) {
  lift::SampleConfig cfg;
  cfg.samples = 3;
  cfg.threads = 1;
  const auto report = lift::run_suites(lift::builtin_catalog(), cfg, std::vector{lift::Suite::Theorem});
  const auto j = lift::cli::to_json(report);
  ASSERT_TRUE(j.contains("meta"));
  EXPECT_EQ(j["meta"]["seed"], 42);
  EXPECT_EQ(j["meta"]["samples"], 3);
  EXPECT_EQ(j["meta"]["tol"], 1e-8);
  EXPECT_EQ(j["meta"]["version"], lift::cli::kVersion);
  ASSERT_EQ(j["results"].size(), 3u);
  for (const auto& r : j["results"]) {
    for (const char* key : {"manifold", "property", "anchor", "max_residual", "argmax_point", "pass"}) {
      EXPECT_TRUE(r.contains(key)) << key;
    }
    EXPECT_EQ(r["property"], "theorem");
    EXPECT_EQ(r["argmax_point"].size(), 4u);
  }
  EXPECT_EQ(j["pass"], report.pass());
  EXPECT_EQ(nlohmann::json::parse(lift::cli::render_json(report)), j);
}

TEST(Report, TextTableHasOneRowPerResult) {
  lift::SampleConfig cfg;
  cfg.samples = 2;
  cfg.threads = 1;
  const auto report = lift::run_suites(lift::builtin_catalog(), cfg, std::vector{lift::Suite::Theorem});
  const std::string text = lift::cli::render_text(report);
  for (const char* name : {"flat2", "sphere2", "halfplane2"}) EXPECT_NE(text.find(name), std::string::npos);
  std::size_t rows = 0;
  for (std::size_t pos = 0; (pos = text.find("theorem", pos)) != std::string::npos; ++pos) ++rows;
  EXPECT_GE(rows, 3u);
}

}  // namespace
