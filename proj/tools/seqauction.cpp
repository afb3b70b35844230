#include <CLI11.hpp>
#include <tbb/global_control.h>

#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "seqauction/io/commands.hpp"
#include "seqauction/io/config.hpp"

namespace {

// SEQAUCTION_WORKERS caps the worker pool; unset or 0 leaves the default.
std::unique_ptr<tbb::global_control> limit_workers() {
  const char* v = std::getenv("SEQAUCTION_WORKERS");
  if (!v || !*v) return nullptr;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) {
    std::cerr << "ignoring SEQAUCTION_WORKERS=" << v << "\n";
    return nullptr;
  }
  if (n == 0) return nullptr;
  return std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism,
                                               static_cast<std::size_t>(n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise-constant equilibrium search and verification for sequential auctions"};
  app.require_subcommand(1);
  std::string config, checkpoint;
  std::vector<std::string> overrides;

  auto* solve = app.add_subcommand("solve", "run the search and write checkpoints");
  solve->add_option("config", config, "YAML config file")->required()->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "bound epsilon for a checkpoint");
  verify->add_option("config", config, "YAML config file")->required()->check(CLI::ExistingFile);
  verify->add_option("checkpoint", checkpoint, "strategy CSV")->required()->check(CLI::ExistingFile);

  auto* compare = app.add_subcommand("compare", "distances to the analytical equilibrium");
  compare->add_option("config", config, "YAML config file")->required()->check(CLI::ExistingFile);
  compare->add_option("checkpoint", checkpoint, "strategy CSV")->required()->check(CLI::ExistingFile);

  for (auto* sub : {solve, verify, compare})
    sub->add_option("--set", overrides, "override a config key (key=value), repeatable");

  auto* schema = app.add_subcommand("schema", "list config keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? seqauction::kExitOk : seqauction::kExitUserError;
  }

  const auto workers = limit_workers();
  if (*schema) {
    for (const auto& [key, help] : seqauction::config_schema()) std::cout << key << "\t" << help << "\n";
    return seqauction::kExitOk;
  }
  if (*solve) return seqauction::cmd_solve(config, overrides, std::cerr);
  if (*verify) return seqauction::cmd_verify(config, checkpoint, overrides, std::cerr);
  return seqauction::cmd_compare(config, checkpoint, overrides, std::cerr);
}
