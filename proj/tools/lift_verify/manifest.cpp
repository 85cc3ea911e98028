#include "manifest.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml++/toml.hpp>

namespace lift::cli {
namespace {

[[noreturn]] void fail(std::string_view source, const std::string& what) {
  throw ManifestError(std::string(source) + ": " + what);
}

void reject_unknown(const toml::table& t, const std::set<std::string>& known, std::string_view where,
                    std::string_view source) {
  for (const auto& [key, value] : t) {
    if (!known.count(std::string(key.str()))) {
      fail(source, "unknown key '" + std::string(key.str()) + "' in " + std::string(where));
    }
  }
}

Interval interval(const toml::node& node, const std::string& what, std::string_view source) {
  const auto* arr = node.as_array();
  if (!arr || arr->size() != 2) fail(source, what + " must be a two-element array [lo, hi]");
  auto lo = (*arr)[0].value<double>();
  auto hi = (*arr)[1].value<double>();
  if (!lo || !hi) fail(source, what + " must hold numbers");
  if (!(*lo < *hi)) fail(source, what + " must satisfy lo < hi");
  return {*lo, *hi};
}

// "g_12" (single-digit indices) or "g_1_2", 1-based.
std::pair<int, int> metric_indices(std::string_view key, int dim, std::string_view source) {
  const std::string k(key);
  auto bad = [&] { fail(source, "metric key '" + k + "' is not of the form g_ij or g_i_j"); };
  if (k.size() < 4 || k.rfind("g_", 0) != 0) bad();
  const std::string rest = k.substr(2);
  int i = 0;
  int j = 0;
  if (const auto sep = rest.find('_'); sep != std::string::npos) {
    try {
      std::size_t used = 0;
      i = std::stoi(rest.substr(0, sep), &used);
      if (used != sep) bad();
      j = std::stoi(rest.substr(sep + 1), &used);
      if (used != rest.size() - sep - 1) bad();
    } catch (const std::logic_error&) {
      bad();
    }
  } else {
    if (rest.size() != 2 || !std::isdigit(static_cast<unsigned char>(rest[0])) ||
        !std::isdigit(static_cast<unsigned char>(rest[1]))) {
      bad();
    }
    i = rest[0] - '0';
    j = rest[1] - '0';
  }
  if (i < 1 || j < 1 || i > dim || j > dim) fail(source, "metric key '" + k + "' is out of range for dim " + std::to_string(dim));
  if (i > j) fail(source, "metric key '" + k + "': give the upper triangle only (i <= j)");
  return {i - 1, j - 1};
}

ManifoldSpec parse_manifold(const toml::table& t, std::string_view source) {
  reject_unknown(t, {"name", "dim", "coords", "metric", "domain", "fiber"}, "[[manifold]]", source);
  const auto name = t["name"].value<std::string>();
  if (!name || name->empty()) fail(source, "[[manifold]] needs a nonempty name");
  const std::string where = "manifold '" + *name + "'";
  const auto dim = t["dim"].value<std::int64_t>();
  if (!dim || *dim < 1) fail(source, where + ": dim must be a positive integer");

  std::vector<std::string> coords;
  const auto* carr = t["coords"].as_array();
  if (!carr) fail(source, where + ": coords must be an array of names");
  for (const auto& c : *carr) {
    auto s = c.value<std::string>();
    if (!s) fail(source, where + ": coords must be strings");
    coords.push_back(*s);
  }
  if (static_cast<std::int64_t>(coords.size()) != *dim) fail(source, where + ": coords does not have dim entries");

  const auto* metric = t["metric"].as_table();
  if (!metric) fail(source, where + ": missing [manifold.metric]");
  std::map<std::pair<int, int>, std::string> upper;
  for (const auto& [key, value] : *metric) {
    const auto ij = metric_indices(key.str(), static_cast<int>(*dim), source);
    auto expr = value.value<std::string>();
    if (!expr) {
      if (auto num = value.value<double>()) {
        std::ostringstream os;
        os.precision(17);
        os << *num;
        expr = os.str();
      } else {
        fail(source, where + ": metric entry " + std::string(key.str()) + " must be an expression string");
      }
    }
    if (!upper.emplace(ij, *expr).second) fail(source, where + ": duplicate metric entry " + std::string(key.str()));
  }

  const auto* domain = t["domain"].as_table();
  if (!domain) fail(source, where + ": missing [manifold.domain]");
  std::set<std::string> known(coords.begin(), coords.end());
  reject_unknown(*domain, known, "domain of " + where, source);
  std::vector<Interval> box;
  for (const auto& c : coords) {
    const auto* node = domain->get(c);
    if (!node) fail(source, where + ": no domain interval for coordinate " + c);
    box.push_back(interval(*node, where + " domain." + c, source));
  }

  Interval fiber{-2.0, 2.0};
  if (const auto* f = t.get("fiber")) fiber = interval(*f, where + " fiber", source);

  try {
    return make_manifold(*name, coords, upper, box, fiber);
  } catch (const std::exception& e) {
    fail(source, e.what());
  }
}

RunSettings parse_run(const toml::table& t, std::string_view source) {
  reject_unknown(t, {"samples", "seed", "tol", "suites"}, "[run]", source);
  RunSettings r;
  if (const auto* n = t.get("samples")) {
    auto v = n->value<std::int64_t>();
    if (!v || *v < 1) fail(source, "[run] samples must be a positive integer");
    r.samples = static_cast<int>(*v);
  }
  if (const auto* n = t.get("seed")) {
    auto v = n->value<std::int64_t>();
    if (!v || *v < 0) fail(source, "[run] seed must be a nonnegative integer");
    r.seed = static_cast<std::uint64_t>(*v);
  }
  if (const auto* n = t.get("tol")) {
    auto v = n->value<double>();
    if (!v || !(*v > 0.0)) fail(source, "[run] tol must be a positive number");
    r.tolerance = *v;
  }
  if (const auto* n = t.get("suites")) {
    const auto* arr = n->as_array();
    if (!arr) fail(source, "[run] suites must be an array");
    for (const auto& s : *arr) {
      auto name = s.value<std::string>();
      if (!name) fail(source, "[run] suites must hold strings");
      try {
        r.suites.push_back(parse_suite(*name));
      } catch (const std::invalid_argument& e) {
        fail(source, e.what());
      }
    }
  }
  return r;
}

}  // namespace

Manifest parse_manifest(std::string_view text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " at line " << e.source().begin.line << ", column " << e.source().begin.column;
    fail(source, os.str());
  }
  reject_unknown(root, {"manifold", "run"}, "the top level", source);

  Manifest m;
  if (const auto* node = root.get("manifold")) {
    const auto* arr = node->as_array();
    if (!arr) fail(source, "manifold must be an array of tables ([[manifold]])");
    for (const auto& entry : *arr) {
      const auto* t = entry.as_table();
      if (!t) fail(source, "manifold must be an array of tables ([[manifold]])");
      m.manifolds.push_back(parse_manifold(*t, source));
    }
  }
  if (const auto* node = root.get("run")) {
    const auto* t = node->as_table();
    if (!t) fail(source, "run must be a table");
    m.run = parse_run(*t, source);
  }
  std::set<std::string> names;
  for (const auto& spec : m.manifolds) {
    if (!names.insert(spec.name).second) fail(source, "duplicate manifold name '" + spec.name + "'");
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError(path.string() + ": cannot open manifest");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_manifest(os.str(), path.string());
}

}  // namespace lift::cli
