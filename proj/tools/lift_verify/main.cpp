#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lift/catalog.hpp"
#include "lift/errors.hpp"
#include "lift/verify.hpp"
#include "manifest.hpp"
#include "report.hpp"

namespace {

using namespace lift;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

struct Options {
  std::string manifest;
  std::vector<std::string> suites;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string format = "text";
  std::string out;
  bool no_catalog = false;
  bool flip_curvature_sign = false;
  std::string check_id;
};

void add_run_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--manifest", o.manifest, "TOML manifest with [[manifold]] and [run] blocks")->check(CLI::ExistingFile);
  cmd->add_option("--samples", o.samples, "Samples per manifold")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Sampling seed");
  cmd->add_option("--tol", o.tol, "Tolerance for identities against zero")->check(CLI::PositiveNumber);
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--out", o.out, "Write the report to this file instead of stdout");
  cmd->add_flag("--no-catalog", o.no_catalog, "Skip the built-in catalog manifolds");
  cmd->add_flag("--flip-curvature-sign", o.flip_curvature_sign,
                "Use -R in the BNW frame formulas (the checks are expected to fail)");
}

// LIFT_VERIFY_THREADS caps the worker count.
int thread_cap() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("LIFT_VERIFY_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
      std::cerr << "lift-verify: ignoring LIFT_VERIFY_THREADS='" << env << "'\n";
    }
  }
  return n;
}

struct Plan {
  std::vector<ManifoldSpec> manifolds;
  SampleConfig cfg;
  std::vector<Suite> suites;
};

Plan make_plan(const Options& o) {
  Plan plan;
  cli::Manifest manifest;
  if (!o.manifest.empty()) manifest = cli::load_manifest(o.manifest);
  if (!o.no_catalog) plan.manifolds = builtin_catalog();
  for (auto& m : manifest.manifolds) {
    const bool clash = std::any_of(plan.manifolds.begin(), plan.manifolds.end(),
                                   [&](const ManifoldSpec& c) { return c.name == m.name; });
    if (clash) throw cli::ManifestError("manifest manifold '" + m.name + "' shadows a catalog manifold");
    plan.manifolds.push_back(std::move(m));
  }
  if (plan.manifolds.empty()) throw cli::ManifestError("no manifolds to check");

  plan.cfg.samples = o.samples.value_or(manifest.run.samples.value_or(plan.cfg.samples));
  plan.cfg.seed = o.seed.value_or(manifest.run.seed.value_or(plan.cfg.seed));
  plan.cfg.tolerance = o.tol.value_or(manifest.run.tolerance.value_or(plan.cfg.tolerance));
  plan.cfg.curvature_sign = o.flip_curvature_sign ? CurvatureSign::Flipped : CurvatureSign::Standard;
  plan.cfg.threads = thread_cap();

  for (const auto& s : o.suites) plan.suites.push_back(parse_suite(s));
  if (plan.suites.empty()) plan.suites = manifest.run.suites;
  if (plan.suites.empty()) plan.suites = {Suite::Properties, Suite::Lemmas, Suite::Theorem};
  return plan;
}

PropertyReport run_check(const Plan& plan, const std::string& id) {
  PropertyReport report;
  report.config = plan.cfg;
  const auto props = property_ids();
  const auto& lemmas = lemma_items();
  const bool is_property = std::find(props.begin(), props.end(), id) != props.end();
  const bool is_lemma =
      std::any_of(lemmas.begin(), lemmas.end(), [&](const LemmaItem& l) { return l.id == id; });
  if (!is_property && !is_lemma && id != "theorem") {
    throw UnknownPropertyError("unknown check '" + id + "'; see 'lift-verify check --help'");
  }
  for (const auto& m : plan.manifolds) {
    if (id == "theorem") {
      report.results.push_back(check_theorem(m, plan.cfg));
    } else if (is_property) {
      auto r = check_property(m, plan.cfg, id);
      report.results.insert(report.results.end(), r.begin(), r.end());
    } else {
      for (auto& r : check_lemma_suite(m, plan.cfg)) {
        if (r.property == id) report.results.push_back(std::move(r));
      }
    }
  }
  return report;
}

int emit(const PropertyReport& report, const Options& o) {
  const std::string text = o.format == "json" ? cli::render_json(report) : cli::render_text(report);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::cerr << "lift-verify: cannot write " << o.out << "\n";
      return kExitInput;
    }
    f << text;
  }
  return report.pass() ? kExitPass : kExitFail;
}

void print_catalog() {
  for (const auto& m : builtin_catalog()) {
    std::cout << m.name << "  dim " << m.dim << "  coords (";
    for (std::size_t i = 0; i < m.coords.size(); ++i) std::cout << (i ? ", " : "") << m.coords[i];
    std::cout << ")\n  metric";
    for (int i = 0; i < m.dim; ++i) {
      for (int j = i; j < m.dim; ++j) {
        std::cout << "  g_" << i + 1 << j + 1 << " = " << m.metric_component(i, j).to_string();
      }
    }
    std::cout << "\n  domain";
    for (int i = 0; i < m.dim; ++i) {
      const auto& b = m.domain[static_cast<std::size_t>(i)];
      std::cout << "  " << m.coords[static_cast<std::size_t>(i)] << " in [" << b.lo << ", " << b.hi << "]";
    }
    std::cout << "  fiber [" << m.fiber.lo << ", " << m.fiber.hi << "]\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of cotangent bundle lifts of the Levi-Civita connection", "lift-verify"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cli::kVersion));

  Options o;
  auto* run = app.add_subcommand("run", "Run verification suites and print a report");
  add_run_flags(run, o);
  run->add_option("--suite", o.suites, "properties, lemmas or theorem (repeatable; default all)")
      ->check(CLI::IsMember({"properties", "lemmas", "theorem"}));

  auto* catalog = app.add_subcommand("catalog", "List the built-in manifolds");

  auto* check = app.add_subcommand("check", "Run a single property, identity or the theorem");
  std::string ids = "theorem";
  for (const auto& p : property_ids()) ids += ", " + p;
  check->add_option("id", o.check_id, "One of: " + ids + ", or an identity name from the lemma suite")->required();
  add_run_flags(check, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (catalog->parsed()) {
      print_catalog();
      return kExitPass;
    }
    const Plan plan = make_plan(o);
    if (check->parsed()) return emit(run_check(plan, o.check_id), o);
    return emit(run_suites(plan.manifolds, plan.cfg, plan.suites), o);
  } catch (const cli::ManifestError& e) {
    std::cerr << "lift-verify: " << e.what() << "\n";
    return kExitInput;
  } catch (const UnknownPropertyError& e) {
    std::cerr << "lift-verify: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "lift-verify: domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lift-verify: " << e.what() << "\n";
    return kExitInput;
  }
}
