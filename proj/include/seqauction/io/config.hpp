#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "seqauction/env/registry.hpp"
#include "seqauction/solver/config.hpp"
#include "seqauction/verifier/verifier.hpp"

namespace seqauction {

// Invalid configuration; `line` is 1-based, 0 when the problem has no single
// source line (for example a command-line override).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  EnvironmentParams env;
  SolverConfig solver;
  VerifierConfig verifier;
  std::string output_dir = "out";
  int checkpoint_every = 0;
  bool export_classes = true;
  bool export_bid_functions = true;
  int compare_points = 101;

  // One `key=value` line per schema key, in schema order.
  std::string canonical() const;
  // First 16 hex digits of the SHA-256 of canonical(), output_dir left out.
  std::string hash() const;
};

// Flat YAML mapping; `overrides` are `key=value` strings applied on top.
RunConfig parse_config(const std::string& text, const std::string& source,
                       const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Schema keys with a one-line description, for --help output.
std::vector<std::pair<std::string, std::string>> config_schema();

}  // namespace seqauction
