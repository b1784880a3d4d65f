#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "infoprice/app.hpp"
#include "infoprice/errors.hpp"

namespace infoprice {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"model", {"mu", "sigma_y", "sigma_z", "s0", "y0"}},
      {"investor", {"gamma", "x0"}},
      {"horizon", {"t_end", "steps"}},
      {"mc", {"paths", "seed"}},
  };
  return keys;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string text = trimmed(raw);
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw ConfigError("'" + key + "' is not a valid number: '" + text + "'");
  }
  return value;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  double real(const std::string& section, const std::string& key) const {
    const auto raw = find(section, key);
    if (!raw) throw ConfigError("missing key '" + section + "." + key + "'");
    return parse_number<double>(section + "." + key, *raw);
  }

  template <class T>
  T integer(const std::string& section, const std::string& key, T fallback) const {
    const auto raw = find(section, key);
    return raw ? parse_number<T>(section + "." + key, *raw) : fallback;
  }

 private:
  std::optional<std::string> find(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto node = sec->get_child_optional(key);
    if (!node) return std::nullopt;
    return node->data();
  }

  const pt::ptree& tree_;
};

}  // namespace

RunConfig parse_run_config(std::istream& in, const ConfigOverrides& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("top-level key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
    }
  }

  const Reader r(tree);
  RunConfig cfg;
  cfg.params.mu = r.real("model", "mu");
  cfg.params.sigma_y = r.real("model", "sigma_y");
  cfg.params.sigma_z = r.real("model", "sigma_z");
  cfg.params.s0 = r.real("model", "s0");
  cfg.params.y0 = r.real("model", "y0");
  cfg.params.gamma = r.real("investor", "gamma");
  cfg.params.x0 = r.real("investor", "x0");
  cfg.params.t_end = r.real("horizon", "t_end");
  cfg.steps = r.integer<std::size_t>("horizon", "steps", 1000);
  cfg.mc.n_paths = r.integer<std::size_t>("mc", "paths", 100000);
  cfg.mc.seed = r.integer<std::uint64_t>("mc", "seed", 0);

  if (overrides.steps) cfg.steps = *overrides.steps;
  if (overrides.paths) cfg.mc.n_paths = *overrides.paths;
  if (overrides.seed) cfg.mc.seed = *overrides.seed;
  if (overrides.workers) cfg.mc.workers = *overrides.workers;
  if (overrides.antithetic) cfg.mc.antithetic = *overrides.antithetic;
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;

  validate(cfg.params);
  if (cfg.steps == 0) throw DomainError("steps", "must be positive");
  if (cfg.mc.n_paths < 2) throw DomainError("paths", "need at least two paths");
  if (cfg.mc.antithetic && cfg.mc.n_paths % 2 != 0) {
    throw DomainError("paths", "antithetic sampling needs an even path count");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in, overrides);
}

}  // namespace infoprice
