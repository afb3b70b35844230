#pragma once

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqauction/env/l2.hpp"
#include "seqauction/env/registry.hpp"
#include "seqauction/solver/search.hpp"
#include "seqauction/verifier/verifier.hpp"

namespace seqauction {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Provenance stamped on every output file.
struct FileStamp {
  std::string config_hash;
  std::uint64_t seed = 0;
};

std::string hex_id(ClassId id);
ClassId parse_hex_id(const std::string& s);

// Strategy checkpoint: one row per (bidder, class, tile, bid component),
// sorted, doubles printed with 17 significant digits so loading and writing
// again reproduces the file byte for byte.
void write_strategy(std::ostream& os, const PCStrategyProfile& sigma, const FileStamp& stamp);

struct LoadedStrategy {
  FileStamp stamp;
  PCStrategyProfile sigma;
};

// Rejects files whose tile bounds differ from `tilings`.
LoadedStrategy read_strategy(std::istream& is, const std::vector<std::shared_ptr<const Tiling>>& tilings);

void write_trace(std::ostream& os, const std::vector<TraceRow>& trace, const FileStamp& stamp);

// JSON lines; the first line is a header object carrying the stamp.
void write_classes(std::ostream& os, const ClassGraph& g, const FileStamp& stamp);

void write_vertex_losses(std::ostream& os, const VertexLossTable& table, const FileStamp& stamp);

void write_report(std::ostream& os, const EpsilonReport& report, const std::string& table_file,
                  const FileStamp& stamp);

void write_class_distances(std::ostream& os, const std::vector<ClassDistance>& rows, const FileStamp& stamp);

// One row per round: setting, bidders, rounds, payment rule and distances.
void write_round_distances(std::ostream& os, const EnvironmentParams& env, const std::vector<RoundDistance>& rows,
                           const FileStamp& stamp);

// Learned and analytical bids on a uniform type grid for every class and
// bidder with an oracle.
void write_bid_functions(std::ostream& os, const ClassGraph& g, const PCStrategyProfile& sigma, int points,
                         const FileStamp& stamp);

}  // namespace seqauction
