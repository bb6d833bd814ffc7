#include "lagmesh/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lagmesh/errors.hpp"

namespace lagmesh {
namespace {

namespace pt = boost::property_tree;

template <typename T>
T get_value(const pt::ptree& section, const std::string& key, T fallback) {
  const auto child = section.get_child_optional(key);
  if (!child) return fallback;
  const auto value = child->get_value_optional<T>();
  if (!value) throw ConfigError("bad value for '" + key + "': '" + child->data() + "'");
  return *value;
}

bool get_bool(const pt::ptree& section, const std::string& key, bool fallback) {
  const auto child = section.get_child_optional(key);
  if (!child) return fallback;
  const std::string& v = child->data();
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': '" + v + "'");
}

const std::set<std::string>& known_keys(const std::string& section) {
  static const std::set<std::string> pipeline{"spec", "n", "chart_angle", "seed"};
  static const std::set<std::string> solver{"tol", "max_iter", "max_halvings", "inner_tol", "iso_tol"};
  static const std::set<std::string> certify{"immersion_tol", "embedding_check", "oversample"};
  static const std::set<std::string> output{"dir", "projection"};
  static const std::set<std::string> study{"n_list"};
  static const std::set<std::string> none;
  if (section == "pipeline") return pipeline;
  if (section == "solver") return solver;
  if (section == "certify") return certify;
  if (section == "output") return output;
  if (section == "study") return study;
  return none;
}

PipelineConfig from_tree(const pt::ptree& tree) {
  for (const auto& [name, section] : tree) {
    const auto& keys = known_keys(name);
    if (keys.empty()) throw ConfigError("unknown section [" + name + "]");
    for (const auto& [key, value] : section) {
      if (!keys.count(key)) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
    }
  }
  const pt::ptree empty;
  const auto section = [&](const char* name) -> const pt::ptree& {
    const auto child = tree.get_child_optional(name);
    return child ? *child : empty;
  };

  PipelineConfig c;
  const pt::ptree& pipeline = section("pipeline");
  c.spec = get_value<std::string>(pipeline, "spec", c.spec);
  c.n = get_value<int>(pipeline, "n", c.n);
  c.chart_angle = get_value<double>(pipeline, "chart_angle", c.chart_angle);
  c.seed = get_value<std::uint64_t>(pipeline, "seed", c.seed);

  const pt::ptree& solver = section("solver");
  c.solver.tol = get_value<double>(solver, "tol", c.solver.tol);
  c.solver.max_iter = get_value<int>(solver, "max_iter", c.solver.max_iter);
  c.solver.max_halvings = get_value<int>(solver, "max_halvings", c.solver.max_halvings);
  c.solver.inner_tol = get_value<double>(solver, "inner_tol", c.solver.inner_tol);
  c.iso_tol = get_value<double>(solver, "iso_tol", c.iso_tol);

  const pt::ptree& certify = section("certify");
  c.immersion_tol = get_value<double>(certify, "immersion_tol", c.immersion_tol);
  c.embedding_check = get_bool(certify, "embedding_check", c.embedding_check);
  c.oversample = get_value<int>(certify, "oversample", c.oversample);

  const pt::ptree& output = section("output");
  c.out_dir = get_value<std::string>(output, "dir", c.out_dir);
  if (const auto proj = output.get_optional<std::string>("projection")) {
    const std::vector<int> coords = parse_int_list(*proj);
    if (coords.size() != 3) throw ConfigError("projection needs three coordinates");
    c.projection = std::array<int, 3>{coords[0], coords[1], coords[2]};
  }

  if (const auto list = section("study").get_optional<std::string>("n_list")) {
    c.n_list = parse_int_list(*list);
  }
  c.validate();
  return c;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad integer list '" + text + "'");
    }
  }
  return out;
}

void PipelineConfig::validate() const {
  if (!(solver.tol > 0.0)) throw ConfigError("solver tol must be positive");
  if (!(solver.inner_tol > 0.0)) throw ConfigError("solver inner_tol must be positive");
  if (solver.max_iter < 0) throw ConfigError("solver max_iter must be nonnegative");
  if (solver.max_halvings < 0) throw ConfigError("solver max_halvings must be nonnegative");
  if (iso_tol < 0.0) throw ConfigError("iso_tol must be nonnegative");
  if (n < 1) throw ConfigError("n must be positive");
  if (!(immersion_tol > 0.0)) throw ConfigError("immersion_tol must be positive");
  if (oversample < 1) throw ConfigError("oversample must be at least 1");
  for (int v : n_list) {
    if (v < 1) throw ConfigError("n_list entries must be positive");
  }
  if (projection) {
    for (int c : *projection) {
      if (c < 0) throw ConfigError("projection coordinates must be nonnegative");
    }
  }
}

PipelineConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return from_tree(tree);
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_reference() {
  const PipelineConfig d;
  std::ostringstream out;
  out << "Config file keys (defaults in parentheses):\n"
      << "  [pipeline] spec (" << d.spec << "): clifford | flat-plane | product:<a>,<b> with a,b in {circle, figure8}\n"
      << "             n (" << d.n << "), chart_angle (" << d.chart_angle << " rad), seed (" << d.seed << ")\n"
      << "  [solver]   tol (" << d.solver.tol << "), max_iter (" << d.solver.max_iter << "), max_halvings ("
      << d.solver.max_halvings << "), inner_tol (" << d.solver.inner_tol << "), iso_tol (0 = 10*tol/N^2)\n"
      << "  [certify]  immersion_tol (" << d.immersion_tol << "), embedding_check (false), oversample ("
      << d.oversample << ")\n"
      << "  [output]   dir (" << d.out_dir << "), projection (none; e.g. 0,1,2)\n"
      << "  [study]    n_list (8,16,32,64)\n";
  return out.str();
}

}  // namespace lagmesh
