#include "vemsad/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include "vemsad/error.hpp"

namespace vemsad {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"problem", {"name", "mu", "lambda", "theta", "M"}},
      {"mesh", {"family", "n", "seed", "lloyd_iterations"}},
      {"discretisation", {"k1", "k2"}},
      {"refinement", {"mode", "levels", "dof_budget", "delta"}},
      {"picard", {"tolerance", "max_iterations", "divergence_window"}},
      {"estimator", {"printed_pressure_sign", "tangential_jumps"}},
      {"output", {"directory", "indicators", "vtk", "svg"}},
  };
  return s;
}

class Reader {
public:
  Reader(const pt::ptree& tree, std::string source) : tree_(tree), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& what) const {
    raise(ErrorCode::ConfigError, source_ + ": [" + section + "] " + key + ": " + what);
  }

  [[nodiscard]] std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_child_optional(key);
    if (!v) return std::nullopt;
    return v->data();
  }

  [[nodiscard]] std::string required(const std::string& section, const std::string& key) const {
    auto v = raw(section, key);
    if (!v) fail(section, key, "missing required key");
    if (v->empty()) fail(section, key, "empty value");
    return *v;
  }

  template <class T>
  void number(const std::string& section, const std::string& key, T& out) const {
    if (const auto v = raw(section, key)) out = parse<T>(section, key, *v);
  }

  template <class T>
  [[nodiscard]] T parse(const std::string& section, const std::string& key, const std::string& text) const {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) fail(section, key, "cannot parse '" + text + "' as a number");
    return value;
  }

  void flag(const std::string& section, const std::string& key, bool& out) const {
    const auto v = raw(section, key);
    if (!v) return;
    if (*v == "true" || *v == "1" || *v == "yes") {
      out = true;
    } else if (*v == "false" || *v == "0" || *v == "no") {
      out = false;
    } else {
      fail(section, key, "expected true or false, got '" + *v + "'");
    }
  }

private:
  const pt::ptree& tree_;
  std::string source_;
};

void check_schema(const pt::ptree& tree, const std::string& source) {
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (body.empty()) raise(ErrorCode::ConfigError, source + ": key '" + section + "' outside any section");
    if (it == schema().end()) raise(ErrorCode::ConfigError, source + ": unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) raise(ErrorCode::ConfigError, source + ": [" + section + "] " + key + ": unknown key");
    }
  }
}

}  // namespace

AdaptConfig ExperimentConfig::adapt_config() const {
  AdaptConfig a;
  a.orders = orders;
  a.mode = mode;
  a.max_levels = levels;
  a.dof_budget = dof_budget;
  a.marking.delta = delta;
  a.picard = picard;
  a.estimator = estimator;
  return a;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    raise(ErrorCode::ConfigError, source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  check_schema(tree, source);
  const Reader r(tree, source);

  ExperimentConfig c;
  c.problem = r.required("problem", "name");
  if (c.problem == "example2") c.params = example2_parameters();
  r.number("problem", "mu", c.params.mu);
  r.number("problem", "lambda", c.params.lambda);
  r.number("problem", "theta", c.params.theta);
  r.number("problem", "M", c.params.M);
  try {
    (void)make_problem(c.problem, c.params);
  } catch (const Error& e) {
    r.fail("problem", "name", e.what());
  }
  try {
    c.params.validate();
  } catch (const Error& e) {
    r.fail("problem", "parameters", e.what());
  }

  const std::string family = r.required("mesh", "family");
  try {
    c.family = parse_mesh_family(family);
  } catch (const Error& e) {
    r.fail("mesh", "family", e.what());
  }
  c.n = r.parse<int>("mesh", "n", r.required("mesh", "n"));
  if (c.n < 1) r.fail("mesh", "n", "must be >= 1");
  r.number("mesh", "seed", c.voronoi.seed);
  r.number("mesh", "lloyd_iterations", c.voronoi.lloyd_iterations);
  if (c.voronoi.lloyd_iterations < 0) r.fail("mesh", "lloyd_iterations", "must be >= 0");

  r.number("discretisation", "k1", c.orders.k1);
  r.number("discretisation", "k2", c.orders.k2);
  if (c.orders.k1 != c.orders.k2 + 1) {
    c.warnings.push_back("k1 = " + std::to_string(c.orders.k1) + ", k2 = " + std::to_string(c.orders.k2) +
                         ": the balanced choice is k1 = k2 + 1");
  }

  const std::string mode = r.required("refinement", "mode");
  if (mode == "uniform") {
    c.mode = RefinementMode::Uniform;
  } else if (mode == "adaptive") {
    c.mode = RefinementMode::Adaptive;
  } else {
    r.fail("refinement", "mode", "expected uniform or adaptive, got '" + mode + "'");
  }
  r.number("refinement", "levels", c.levels);
  if (c.levels < 1) r.fail("refinement", "levels", "must be >= 1");
  r.number("refinement", "dof_budget", c.dof_budget);
  if (c.dof_budget < 0) r.fail("refinement", "dof_budget", "must be >= 0");
  r.number("refinement", "delta", c.delta);
  if (!(c.delta >= 0.0 && c.delta <= 1.0)) r.fail("refinement", "delta", "must lie in [0, 1]");

  r.number("picard", "tolerance", c.picard.tolerance);
  r.number("picard", "max_iterations", c.picard.max_iterations);
  r.number("picard", "divergence_window", c.picard.divergence_window);
  try {
    c.picard.validate();
  } catch (const Error& e) {
    r.fail("picard", "settings", e.what());
  }

  r.flag("estimator", "printed_pressure_sign", c.estimator.printed_pressure_sign);
  r.flag("estimator", "tangential_jumps", c.estimator.tangential_jumps);

  c.output_dir = r.required("output", "directory");
  r.flag("output", "indicators", c.write_indicators);
  r.flag("output", "vtk", c.write_vtk);
  r.flag("output", "svg", c.write_svg);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace vemsad
