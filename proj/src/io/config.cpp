#include "seqauction/io/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace seqauction {

ConfigError::ConfigError(const std::string& source, int line, const std::string& msg)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + msg), line_(line) {}

namespace {

// Type or range problem with one value; the caller adds source and line.
struct BadValue {
  std::string msg;
};

double num(const YAML::Node& n) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw BadValue{"expected a number"};
  }
}

int integer(const YAML::Node& n) {
  try {
    return n.as<int>();
  } catch (const YAML::Exception&) {
    throw BadValue{"expected an integer"};
  }
}

bool boolean(const YAML::Node& n) {
  try {
    return n.as<bool>();
  } catch (const YAML::Exception&) {
    throw BadValue{"expected true or false"};
  }
}

std::string text(const YAML::Node& n) {
  if (!n.IsScalar()) throw BadValue{"expected a string"};
  return n.as<std::string>();
}

std::string one_of(const YAML::Node& n, std::initializer_list<const char*> allowed) {
  std::string s = text(n);
  std::string list;
  for (const char* a : allowed) {
    if (s == a) return s;
    list += std::string(list.empty() ? "" : ", ") + a;
  }
  throw BadValue{"expected one of: " + list};
}

double positive(double v) {
  if (!(v > 0.0)) throw BadValue{"must be positive"};
  return v;
}

int at_least(int v, int lo) {
  if (v < lo) throw BadValue{"must be at least " + std::to_string(lo)};
  return v;
}

double unit(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw BadValue{"must lie in [0,1]"};
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

struct Key {
  std::string name;
  const char* help;
  std::function<void(RunConfig&, const YAML::Node&)> set;
  std::function<std::string(const RunConfig&)> get;
};

void fidelity_keys(std::vector<Key>& keys, const std::string& p, Fidelity& (*pick)(RunConfig&),
                   const Fidelity& (*cpick)(const RunConfig&)) {
  auto name = [&](const char* k) { return p + "_" + k; };
  keys.push_back({name("integration"), "exact | mc",
                  [pick](RunConfig& c, const YAML::Node& n) {
                    pick(c).integration = parse_integration(one_of(n, {"exact", "mc"}));
                  },
                  [cpick](const RunConfig& c) { return to_string(cpick(c).integration); }});
  keys.push_back({name("samples"), "Monte-Carlo draws per (class, bidder)",
                  [pick](RunConfig& c, const YAML::Node& n) { pick(c).samples = at_least(integer(n), 1); },
                  [cpick](const RunConfig& c) { return fmt(cpick(c).samples); }});
  keys.push_back({name("pattern_steps"), "pattern-search iterations",
                  [pick](RunConfig& c, const YAML::Node& n) { pick(c).pattern_steps = at_least(integer(n), 0); },
                  [cpick](const RunConfig& c) { return fmt(cpick(c).pattern_steps); }});
}

}  // namespace

// The schema lives in one table so that parsing, canonical output and help
// text cannot drift apart.
static const std::vector<Key>& keys() {
  static const std::vector<Key> k = [] {
    std::vector<Key> v;
    auto add = [&](const char* name, const char* help, std::function<void(RunConfig&, const YAML::Node&)> set,
                   std::function<std::string(const RunConfig&)> get) {
      v.push_back(Key{name, help, std::move(set), std::move(get)});
    };
    add("environment", "sequential_sales | split_award",
        [](RunConfig& c, const YAML::Node& n) { c.env.kind = one_of(n, {"sequential_sales", "split_award"}); },
        [](const RunConfig& c) { return c.env.kind; });
    add("bidders", "number of bidders",
        [](RunConfig& c, const YAML::Node& n) { c.env.bidders = at_least(integer(n), 2); },
        [](const RunConfig& c) { return fmt(c.env.bidders); });
    add("goods", "identical goods sold in sequence (sequential_sales)",
        [](RunConfig& c, const YAML::Node& n) { c.env.goods = at_least(integer(n), 1); },
        [](const RunConfig& c) { return fmt(c.env.goods); });
    add("payment", "first | second (sequential_sales)",
        [](RunConfig& c, const YAML::Node& n) { c.env.payment = one_of(n, {"first", "second"}); },
        [](const RunConfig& c) { return c.env.payment; });
    add("lower", "lower end of the uniform type prior",
        [](RunConfig& c, const YAML::Node& n) { c.env.lower = num(n); },
        [](const RunConfig& c) { return fmt(c.env.lower); });
    add("upper", "upper end of the uniform type prior",
        [](RunConfig& c, const YAML::Node& n) { c.env.upper = num(n); },
        [](const RunConfig& c) { return fmt(c.env.upper); });
    add("cost", "split-award cost share C of half the contract",
        [](RunConfig& c, const YAML::Node& n) { c.env.cost = num(n); },
        [](const RunConfig& c) { return fmt(c.env.cost); });
    add("grid", "tiles per type dimension (integer or list)",
        [](RunConfig& c, const YAML::Node& n) {
          c.solver.grid.clear();
          if (n.IsSequence()) {
            for (const auto& e : n) c.solver.grid.push_back(at_least(integer(e), 1));
          } else {
            c.solver.grid.push_back(at_least(integer(n), 1));
          }
          if (c.solver.grid.empty()) throw BadValue{"needs at least one entry"};
        },
        [](const RunConfig& c) {
          std::string s;
          for (int g : c.solver.grid) s += (s.empty() ? "" : ",") + fmt(g);
          return s;
        });
    add("seed", "base random seed",
        [](RunConfig& c, const YAML::Node& n) {
          try {
            c.solver.seed = n.as<std::uint64_t>();
          } catch (const YAML::Exception&) {
            throw BadValue{"expected a non-negative integer"};
          }
        },
        [](const RunConfig& c) { return std::to_string(c.solver.seed); });
    add("iterations", "high-fidelity (outer) iterations",
        [](RunConfig& c, const YAML::Node& n) { c.solver.iterations = at_least(integer(n), 0); },
        [](const RunConfig& c) { return fmt(c.solver.iterations); });
    add("inner_iterations", "cap on low-fidelity (inner) iterations",
        [](RunConfig& c, const YAML::Node& n) { c.solver.inner_iterations = at_least(integer(n), 0); },
        [](const RunConfig& c) { return fmt(c.solver.inner_iterations); });
    add("inner_threshold", "inner loop stops once the max tile loss is below this fraction of the bid range",
        [](RunConfig& c, const YAML::Node& n) { c.solver.inner_threshold = unit(num(n)); },
        [](const RunConfig& c) { return fmt(c.solver.inner_threshold); });
    fidelity_keys(v, "inner", [](RunConfig& c) -> Fidelity& { return c.solver.inner; },
                  [](const RunConfig& c) -> const Fidelity& { return c.solver.inner; });
    fidelity_keys(v, "outer", [](RunConfig& c) -> Fidelity& { return c.solver.outer; },
                  [](const RunConfig& c) -> const Fidelity& { return c.solver.outer; });
    add("pattern_init_step", "initial pattern step as a fraction of the bid range",
        [](RunConfig& c, const YAML::Node& n) {
          const double s = num(n);
          if (!(s > 0.0 && s <= 1.0)) throw BadValue{"must lie in (0,1]"};
          c.solver.inner.init_step = c.solver.outer.init_step = s;
        },
        [](const RunConfig& c) { return fmt(c.solver.inner.init_step); });
    add("pattern_shrink", "step shrink factor after an unsuccessful pattern",
        [](RunConfig& c, const YAML::Node& n) {
          const double s = num(n);
          if (!(s > 0.0 && s < 1.0)) throw BadValue{"must lie in (0,1)"};
          c.solver.inner.shrink = c.solver.outer.shrink = s;
        },
        [](const RunConfig& c) { return fmt(c.solver.inner.shrink); });
    add("pattern_points", "pattern points per search direction",
        [](RunConfig& c, const YAML::Node& n) {
          c.solver.inner.points_per_direction = c.solver.outer.points_per_direction = at_least(integer(n), 1);
        },
        [](const RunConfig& c) { return fmt(c.solver.inner.points_per_direction); });
    add("gamma_min", "smallest update weight",
        [](RunConfig& c, const YAML::Node& n) { c.solver.update.gamma_min = unit(num(n)); },
        [](const RunConfig& c) { return fmt(c.solver.update.gamma_min); });
    add("gamma_max", "largest update weight",
        [](RunConfig& c, const YAML::Node& n) { c.solver.update.gamma_max = unit(num(n)); },
        [](const RunConfig& c) { return fmt(c.solver.update.gamma_max); });
    add("gamma_c", "slope c of the arctan update weight",
        [](RunConfig& c, const YAML::Node& n) { c.solver.update.c = positive(num(n)); },
        [](const RunConfig& c) { return fmt(c.solver.update.c); });
    add("update_mode", "per_tile | per_strategy",
        [](RunConfig& c, const YAML::Node& n) {
          c.solver.update.per_tile = one_of(n, {"per_tile", "per_strategy"}) == "per_tile";
        },
        [](const RunConfig& c) { return std::string(c.solver.update.per_tile ? "per_tile" : "per_strategy"); });
    add("monotone", "project bids onto monotone functions of the type after each update",
        [](RunConfig& c, const YAML::Node& n) { c.solver.monotone = boolean(n); },
        [](const RunConfig& c) { return fmt(c.solver.monotone); });
    add("symmetric", "average tables of interchangeable bidders after each iteration",
        [](RunConfig& c, const YAML::Node& n) { c.solver.symmetric = boolean(n); },
        [](const RunConfig& c) { return fmt(c.solver.symmetric); });
    add("update_order", "sequential | simultaneous",
        [](RunConfig& c, const YAML::Node& n) {
          c.solver.order = parse_update_order(one_of(n, {"sequential", "simultaneous"}));
        },
        [](const RunConfig& c) { return to_string(c.solver.order); });
    add("continuation", "cached | full",
        [](RunConfig& c, const YAML::Node& n) {
          c.solver.continuation = parse_continuation(one_of(n, {"cached", "full"}));
        },
        [](const RunConfig& c) { return to_string(c.solver.continuation); });
    add("belief_rule", "round_down | reset_to_prior | keep_last",
        [](RunConfig& c, const YAML::Node& n) {
          c.solver.belief_rule = parse_belief_rule(one_of(n, {"round_down", "reset_to_prior", "keep_last"}));
        },
        [](const RunConfig& c) { return to_string(c.solver.belief_rule); });
    add("class_budget", "maximum number of history classes",
        [](RunConfig& c, const YAML::Node& n) { c.solver.class_budget = at_least(integer(n), 1); },
        [](const RunConfig& c) { return fmt(c.solver.class_budget); });
    fidelity_keys(v, "verify", [](RunConfig& c) -> Fidelity& { return c.verifier.fidelity; },
                  [](const RunConfig& c) -> const Fidelity& { return c.verifier.fidelity; });
    add("verify_continuation", "cached | full",
        [](RunConfig& c, const YAML::Node& n) {
          c.verifier.continuation = parse_continuation(one_of(n, {"cached", "full"}));
        },
        [](const RunConfig& c) { return to_string(c.verifier.continuation); });
    add("verify_restarts", "extra pattern-search starts per vertex",
        [](RunConfig& c, const YAML::Node& n) { c.verifier.restarts = at_least(integer(n), 0); },
        [](const RunConfig& c) { return fmt(c.verifier.restarts); });
    add("verify_scan", "uniform scan points per bid component",
        [](RunConfig& c, const YAML::Node& n) { c.verifier.scan = at_least(integer(n), 1); },
        [](const RunConfig& c) { return fmt(c.verifier.scan); });
    add("verify_margin_se", "standard errors added to the reported margin",
        [](RunConfig& c, const YAML::Node& n) { c.verifier.margin_se = num(n); },
        [](const RunConfig& c) { return fmt(c.verifier.margin_se); });
    add("output_dir", "directory for all output files",
        [](RunConfig& c, const YAML::Node& n) { c.output_dir = text(n); },
        [](const RunConfig& c) { return c.output_dir; });
    add("checkpoint_every", "write a numbered checkpoint every k iterations (0: only the latest)",
        [](RunConfig& c, const YAML::Node& n) { c.checkpoint_every = at_least(integer(n), 0); },
        [](const RunConfig& c) { return fmt(c.checkpoint_every); });
    add("export_classes", "write the history-class dump after solving",
        [](RunConfig& c, const YAML::Node& n) { c.export_classes = boolean(n); },
        [](const RunConfig& c) { return fmt(c.export_classes); });
    add("export_bid_functions", "write learned and analytical bid functions on compare",
        [](RunConfig& c, const YAML::Node& n) { c.export_bid_functions = boolean(n); },
        [](const RunConfig& c) { return fmt(c.export_bid_functions); });
    add("compare_points", "type grid points per class in the bid-function export",
        [](RunConfig& c, const YAML::Node& n) { c.compare_points = at_least(integer(n), 2); },
        [](const RunConfig& c) { return fmt(c.compare_points); });
    return v;
  }();
  return k;
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const Key& k : keys()) out += k.name + "=" + k.get(*this) + "\n";
  return out;
}

std::string RunConfig::hash() const {
  // Where results go does not change them.
  std::string s;
  for (const Key& k : keys())
    if (k.name != "output_dir") s += k.name + "=" + k.get(*this) + "\n";
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < 8 && i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::vector<std::pair<std::string, std::string>> config_schema() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Key& k : keys()) out.emplace_back(k.name, k.help);
  return out;
}

RunConfig parse_config(const std::string& text_in, const std::string& source,
                       const std::vector<std::string>& overrides) {
  std::map<std::string, const Key*> by_name;
  for (const Key& k : keys()) by_name[k.name] = &k;
  RunConfig cfg;
  std::map<std::string, int> line_of;

  YAML::Node root;
  try {
    root = YAML::Load(text_in);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line + 1, e.msg);
  }
  if (root && !root.IsNull()) {
    if (!root.IsMap()) throw ConfigError(source, root.Mark().line + 1, "expected a mapping of keys to values");
    for (const auto& kv : root) {
      const int line = kv.first.Mark().line + 1;
      const std::string key = kv.first.as<std::string>();
      auto it = by_name.find(key);
      if (it == by_name.end()) throw ConfigError(source, line, "unknown key '" + key + "'");
      if (line_of.count(key)) throw ConfigError(source, line, "duplicate key '" + key + "'");
      line_of[key] = line;
      try {
        it->second->set(cfg, kv.second);
      } catch (const BadValue& b) {
        throw ConfigError(source, line, key + ": " + b.msg);
      } catch (const ContractViolation& e) {
        throw ConfigError(source, line, key + ": " + e.what());
      }
    }
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override", 0, "expected key=value, got '" + o + "'");
    const std::string key = o.substr(0, eq);
    auto it = by_name.find(key);
    if (it == by_name.end()) throw ConfigError("override", 0, "unknown key '" + key + "'");
    try {
      it->second->set(cfg, YAML::Load(o.substr(eq + 1)));
    } catch (const BadValue& b) {
      throw ConfigError("override", 0, key + ": " + b.msg);
    } catch (const YAML::Exception& e) {
      throw ConfigError("override", 0, key + ": " + e.what());
    }
    line_of[key] = 0;
  }

  // Split award only has a first-price rule, so the key may be omitted there.
  if (cfg.env.kind == "split_award" && !line_of.count("payment")) cfg.env.payment = "first";
  auto where = [&](const char* key) {
    auto it = line_of.find(key);
    return it == line_of.end() ? 0 : it->second;
  };
  if (cfg.solver.update.gamma_min > cfg.solver.update.gamma_max)
    throw ConfigError(source, where(line_of.count("gamma_min") ? "gamma_min" : "gamma_max"),
                      "gamma_min must not exceed gamma_max");
  if (!(cfg.env.lower < cfg.env.upper)) throw ConfigError(source, where("upper"), "upper must exceed lower");
  if (cfg.env.kind == "sequential_sales" && cfg.env.goods >= cfg.env.bidders)
    throw ConfigError(source, where("goods"), "goods must be fewer than bidders");
  if (cfg.env.kind == "split_award" && !(cfg.env.cost > 0.0 && cfg.env.cost < 1.0))
    throw ConfigError(source, where("cost"), "cost must lie in (0,1)");
  try {
    cfg.solver.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(source, 0, e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, overrides);
}

}  // namespace seqauction
