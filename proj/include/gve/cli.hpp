#pragma once
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gve/graph.hpp"
#include "gve/louvain.hpp"

namespace gve::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kInputError = 2,
  kRuntimeError = 3,
};


/** Measurements of one graph at one thread count over a number of repeats. */
struct RunReport {
  std::string graph;
  VertexId vertices = 0;
  EdgeOffset edges = 0;
  int threads = 1;
  int repeats = 0;
  std::vector<double> times_ms;     // algorithm time per repeat, loading excluded
  double mean_time_ms = 0;
  double geomean_time_ms = 0;
  double modularity = 0;            // arithmetic mean over repeats
  std::size_t communities = 0;      // of the last repeat
  int passes = 0;
  std::vector<int> iterations_per_pass;
  std::vector<VertexId> communities_per_pass;
  double local_moving_ms = 0;       // phase splits, mean over repeats
  double aggregation_ms = 0;
  double other_ms = 0;
};


/// Run detection `repeats` times; the result of the last run is stored in *last when given.
RunReport benchmark(const CsrGraph& g, const std::string& name, const LouvainParams& params,
                    int repeats, LouvainResult* last = nullptr);

/// `vertex community` lines, ascending vertex id.
void write_membership(std::ostream& out, std::span<const VertexId> membership);
Membership read_membership(std::istream& in);

/// One `key: value` line per field.
void write_report(std::ostream& out, const RunReport& report);
std::map<std::string, std::string> parse_report(std::istream& in);

inline constexpr const char* scale_csv_header = "threads,total,local_moving,aggregation,other,modularity";
void write_scale_csv(std::ostream& out, std::span<const RunReport> reports);

/// Loads by explicit format ("mtx", "edgelist") or by file extension ("auto").
CsrGraph load_graph(const std::string& path, const std::string& format, bool weighted);

/// Entry point of the command-line tool. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gve::cli
