#include "seqauction/io/serialize.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace seqauction {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void comment(std::ostream& os, const FileStamp& s) {
  os << "# config_hash=" << s.config_hash << " seed=" << s.seed << "\n";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw FormatError("line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int line) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw FormatError("line " + std::to_string(line) + ": bad integer '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

std::string hex_id(ClassId id) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, id);
  return buf;
}

ClassId parse_hex_id(const std::string& s) {
  if (s.size() != 16) throw FormatError("class id must have 16 hex digits: '" + s + "'");
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 16);
  if (*end != '\0') throw FormatError("bad class id '" + s + "'");
  return static_cast<ClassId>(v);
}

void write_strategy(std::ostream& os, const PCStrategyProfile& sigma, const FileStamp& stamp) {
  comment(os, stamp);
  const int d = sigma.size() == 0 ? 1 : sigma[0].tiling().dim();
  os << "bidder,history_class_id";
  for (int k = 0; k < d; ++k) os << ",tile_lower_" << k;
  for (int k = 0; k < d; ++k) os << ",tile_upper_" << k;
  os << ",bundle_id,bid\n";
  for (int i = 0; i < sigma.size(); ++i) {
    const Tiling& tiling = sigma[i].tiling();
    std::vector<std::string> bounds(tiling.size());
    for (int t = 0; t < tiling.size(); ++t) {
      const Hyperrectangle r = tiling.tile(t);
      std::string s;
      for (double x : r.lower) s += "," + num(x);
      for (double x : r.upper) s += "," + num(x);
      bounds[t] = std::move(s);
    }
    for (const auto& [id, table] : sigma[i].tables()) {
      const std::string prefix = std::to_string(i) + "," + hex_id(id);
      for (int t = 0; t < table.tiles(); ++t)
        for (int k = 0; k < table.q; ++k) os << prefix << bounds[t] << "," << k << "," << num(table.get(t, k)) << "\n";
    }
  }
}

LoadedStrategy read_strategy(std::istream& is, const std::vector<std::shared_ptr<const Tiling>>& tilings) {
  LoadedStrategy out;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  int d = 0;
  // (bidder, class) -> (tile, component) -> bid
  std::map<std::pair<int, ClassId>, std::map<std::pair<int, int>, double>> cells;

  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (lineno == 1) {
        char hash[65] = {0};
        unsigned long long seed = 0;
        if (std::sscanf(line.c_str(), "# config_hash=%64s seed=%llu", hash, &seed) == 2) {
          out.stamp.config_hash = hash;
          out.stamp.seed = seed;
        }
      }
      continue;
    }
    const auto cols = split(line);
    if (!have_header) {
      if (cols.size() < 6 || cols[0] != "bidder" || cols[1] != "history_class_id")
        throw FormatError("line " + std::to_string(lineno) + ": missing column header");
      d = static_cast<int>(cols.size() - 4) / 2;
      have_header = true;
      continue;
    }
    if (static_cast<int>(cols.size()) != 4 + 2 * d)
      throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(4 + 2 * d) + " columns");
    const int bidder = parse_int(cols[0], lineno);
    if (bidder < 0 || bidder >= static_cast<int>(tilings.size()))
      throw FormatError("line " + std::to_string(lineno) + ": bidder out of range");
    const Tiling& tiling = *tilings[bidder];
    if (tiling.dim() != d) throw FormatError("line " + std::to_string(lineno) + ": type dimension mismatch");
    TypePoint lo(d), hi(d);
    for (int k = 0; k < d; ++k) {
      lo[k] = parse_double(cols[2 + k], lineno);
      hi[k] = parse_double(cols[2 + d + k], lineno);
    }
    if (!tiling.space().contains(lo)) throw FormatError("line " + std::to_string(lineno) + ": tile outside the type space");
    const int t = locate_tile(tiling, lo);
    const Hyperrectangle r = tiling.tile(t);
    if (r.lower != lo || r.upper != hi)
      throw FormatError("line " + std::to_string(lineno) + ": tile bounds do not match the configured tiling");
    const int comp = parse_int(cols[2 + 2 * d], lineno);
    if (comp < 0) throw FormatError("line " + std::to_string(lineno) + ": negative bundle id");
    auto& slot = cells[{bidder, parse_hex_id(cols[1])}];
    if (!slot.emplace(std::make_pair(t, comp), parse_double(cols[3 + 2 * d], lineno)).second)
      throw FormatError("line " + std::to_string(lineno) + ": duplicate row");
  }
  if (!have_header) throw FormatError("empty strategy file");

  for (std::size_t i = 0; i < tilings.size(); ++i) out.sigma.strategies.emplace_back(static_cast<int>(i), tilings[i]);
  for (const auto& [key, m] : cells) {
    const int tiles = tilings[key.first]->size();
    int q = 0;
    for (const auto& [tc, v] : m) q = std::max(q, tc.second + 1);
    if (static_cast<int>(m.size()) != tiles * q)
      throw FormatError("class " + hex_id(key.second) + " of bidder " + std::to_string(key.first) +
                        " does not cover every tile and bundle");
    BidTable table;
    table.q = q;
    table.bids.resize(static_cast<std::size_t>(tiles) * q);
    for (const auto& [tc, v] : m) table.bids[static_cast<std::size_t>(tc.first) * q + tc.second] = v;
    out.sigma[key.first].set_table(key.second, std::move(table));
  }
  return out;
}

void write_trace(std::ostream& os, const std::vector<TraceRow>& trace, const FileStamp& stamp) {
  comment(os, stamp);
  os << "iteration,phase,bidder,round,history_class_id,max_immediate_loss\n";
  for (const TraceRow& r : trace)
    os << r.iteration << "," << (r.outer ? "outer" : "inner") << "," << r.bidder << "," << r.round << ","
       << hex_id(r.cls) << "," << num(r.max_loss) << "\n";
}

void write_classes(std::ostream& os, const ClassGraph& g, const FileStamp& stamp) {
  using nlohmann::json;
  os << json{{"config_hash", stamp.config_hash}, {"seed", stamp.seed}}.dump() << "\n";
  for (int c = 0; c < g.size(); ++c) {
    const HistoryClass& h = g.at(c);
    json allocs = json::array();
    for (const Allocation& x : h.history.rounds) allocs.push_back({{"kind", x.kind}, {"winners", x.winners}});
    json beliefs = json::array();
    for (int i = 0; i < static_cast<int>(h.beliefs.beliefs.size()); ++i) {
      if (!h.beliefs.active[i] || h.beliefs.beliefs[i].support == kNoSet) {
        beliefs.push_back(nullptr);
        continue;
      }
      json runs = json::array();
      for (auto [b, e] : g.space().bidder(i).set(h.beliefs.beliefs[i].support).runs()) runs.push_back({b, e});
      beliefs.push_back(runs);
    }
    json children = json::array();
    for (int ch : h.children()) children.push_back(hex_id(g.at(ch).id));
    os << json{{"id", hex_id(h.id)},
               {"round", h.round},
               {"allocations", allocs},
               {"belief_support", beliefs},
               {"terminal", h.terminal},
               {"reach", h.reach},
               {"children", children}}
              .dump()
       << "\n";
  }
}

void write_vertex_losses(std::ostream& os, const VertexLossTable& table, const FileStamp& stamp) {
  comment(os, stamp);
  os << "# integration=" << table.integration << " samples=" << table.samples
     << " pattern_steps=" << table.pattern_steps << "\n";
  os << "history_class_id,bidder,tile,vertex,loss,se,ibr_utility,sigma_utility\n";
  for (const VertexLoss& r : table.rows)
    os << hex_id(r.cls) << "," << r.bidder << "," << r.tile << "," << r.vertex << "," << num(r.loss) << ","
       << num(r.se) << "," << num(r.ibr_utility) << "," << num(r.sigma_utility) << "\n";
}

void write_report(std::ostream& os, const EpsilonReport& report, const std::string& table_file,
                  const FileStamp& stamp) {
  nlohmann::json path = nlohmann::json::array();
  for (ClassId id : report.worst_path) path.push_back(hex_id(id));
  const nlohmann::json j{{"config_hash", stamp.config_hash},
                         {"seed", stamp.seed},
                         {"epsilon", report.epsilon},
                         {"epsilon_with_margin", report.epsilon_with_margin},
                         {"per_bidder", report.per_bidder},
                         {"per_bidder_with_margin", report.per_bidder_with_margin},
                         {"worst_bidder", report.worst_bidder},
                         {"worst_path", path},
                         {"table_file", table_file},
                         {"integration", report.table.integration},
                         {"samples", report.table.samples},
                         {"pattern_steps", report.table.pattern_steps}};
  os << j.dump(2) << "\n";
}

void write_class_distances(std::ostream& os, const std::vector<ClassDistance>& rows, const FileStamp& stamp) {
  comment(os, stamp);
  os << "round,history_class_id,reach,distance_belief_measure,distance_prior_measure,interior_variant\n";
  for (const ClassDistance& r : rows)
    os << r.round << "," << hex_id(r.id) << "," << num(r.reach) << "," << num(r.belief) << "," << num(r.prior) << ","
       << num(r.interior) << "\n";
}

void write_round_distances(std::ostream& os, const EnvironmentParams& env, const std::vector<RoundDistance>& rows,
                           const FileStamp& stamp) {
  comment(os, stamp);
  const bool sales = env.kind == "sequential_sales";
  os << "setting,n,rounds,payment_rule,round,distance_belief_measure,distance_prior_measure,interior_variant,classes\n";
  for (const RoundDistance& r : rows)
    os << env.kind << "," << env.bidders << "," << (sales ? env.goods : 2) << ","
       << (sales ? env.payment : std::string("first")) << "," << r.round << "," << num(r.belief) << ","
       << num(r.prior) << "," << num(r.interior) << "," << r.classes << "\n";
}

void write_bid_functions(std::ostream& os, const ClassGraph& g, const PCStrategyProfile& sigma, int points,
                         const FileStamp& stamp) {
  comment(os, stamp);
  os << "round,history_class_id,bidder,bundle_id,theta,learned,analytical\n";
  const AuctionEnvironment& env = g.env();
  for (int c = 0; c < g.size(); ++c) {
    const HistoryClass& h = g.at(c);
    if (h.terminal) continue;
    for (int i = 0; i < env.num_bidders(); ++i) {
      if (!h.beliefs.active[i] || !sigma[i].has(h.id)) continue;
      const Tiling& tiling = sigma[i].tiling();
      if (tiling.dim() != 1) continue;
      const TypeSpace space = tiling.space();
      const BidTable& table = sigma[i].table(h.id);
      for (int p = 0; p < points; ++p) {
        double theta = space.lower[0] + (space.upper[0] - space.lower[0]) * p / (points - 1);
        const auto oracle = env.oracle(i, h.history, theta);
        if (!oracle) break;
        const int t = locate_tile(tiling, {theta});
        os << h.round + 1 << "," << hex_id(h.id) << "," << i << "," << oracle->component << "," << num(theta) << ","
           << num(table.get(t, oracle->component)) << "," << num(oracle->bid) << "\n";
      }
    }
  }
}

}  // namespace seqauction
