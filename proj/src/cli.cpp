#include "gve/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace gve::cli {

namespace {

std::string format_double(double x, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

template <class Range, class F>
std::string join(const Range& r, F&& fmt) {
  std::string s;
  for (const auto& x : r) {
    if (!s.empty()) s += ' ';
    s += fmt(x);
  }
  return s;
}

std::string ms(double x) { return format_double(x, "%.6f"); }

// Thrown for a graph that has nothing to detect.
struct EmptyGraph : std::runtime_error {
  EmptyGraph() : std::runtime_error("graph has no edges") {}
};

}  // namespace


CsrGraph load_graph(const std::string& path, const std::string& format, bool weighted) {
  std::string fmt = format;
  if (fmt == "auto") fmt = std::filesystem::path(path).extension() == ".mtx" ? "mtx" : "edgelist";
  if (fmt == "mtx") return build_csr(load_matrix_market(path));
  if (fmt == "edgelist") return build_csr(load_edge_list(path, weighted));
  throw std::invalid_argument("unknown format '" + format + "'");
}


RunReport benchmark(const CsrGraph& g, const std::string& name, const LouvainParams& params,
                    int repeats, LouvainResult* last) {
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (!(g.total_weight() > 0)) throw EmptyGraph();
  RunReport r;
  r.graph = name;
  r.vertices = g.order();
  r.edges = g.edge_count();
  r.threads = params.thread_count;
  r.repeats = repeats;
  double log_sum = 0, q_sum = 0;
  LouvainResult res;
  for (int k = 0; k < repeats; ++k) {
    res = louvain(g, params);
    double t = res.total_seconds * 1e3;
    r.times_ms.push_back(t);
    r.mean_time_ms += t / repeats;
    log_sum += std::log(std::max(t, 1e-9));
    q_sum += res.modularity;
    r.local_moving_ms += res.local_moving_seconds * 1e3 / repeats;
    r.aggregation_ms += res.aggregation_seconds * 1e3 / repeats;
    r.other_ms += res.other_seconds * 1e3 / repeats;
  }
  r.geomean_time_ms = std::exp(log_sum / repeats);
  r.modularity = q_sum / repeats;
  r.communities = res.community_count();
  r.passes = res.passes;
  for (const auto& st : res.pass_stats) {
    r.iterations_per_pass.push_back(st.iterations);
    r.communities_per_pass.push_back(st.community_count);
  }
  if (last) *last = std::move(res);
  return r;
}


void write_membership(std::ostream& out, std::span<const VertexId> membership) {
  for (std::size_t i = 0; i < membership.size(); ++i) out << i << ' ' << membership[i] << '\n';
}

Membership read_membership(std::istream& in) {
  Membership memb;
  std::uint64_t u, c;
  std::size_t line = 0;
  while (in >> u >> c) {
    if (u != line) throw LoadError("expected vertex " + std::to_string(line), line + 1);
    memb.push_back(static_cast<VertexId>(c));
    ++line;
  }
  if (!in.eof()) throw LoadError("malformed membership line", line + 1);
  return memb;
}


void write_report(std::ostream& out, const RunReport& r) {
  auto num = [](auto x) { return std::to_string(x); };
  out << "graph: " << r.graph << '\n'
      << "vertices: " << r.vertices << '\n'
      << "edges: " << r.edges << '\n'
      << "threads: " << r.threads << '\n'
      << "repeats: " << r.repeats << '\n'
      << "times_ms: " << join(r.times_ms, ms) << '\n'
      << "mean_time_ms: " << ms(r.mean_time_ms) << '\n'
      << "geomean_time_ms: " << ms(r.geomean_time_ms) << '\n'
      << "modularity: " << format_double(r.modularity) << '\n'
      << "communities: " << r.communities << '\n'
      << "passes: " << r.passes << '\n'
      << "iterations_per_pass: " << join(r.iterations_per_pass, num) << '\n'
      << "communities_per_pass: " << join(r.communities_per_pass, num) << '\n'
      << "local_moving_ms: " << ms(r.local_moving_ms) << '\n'
      << "aggregation_ms: " << ms(r.aggregation_ms) << '\n'
      << "other_ms: " << ms(r.other_ms) << '\n';
}

std::map<std::string, std::string> parse_report(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    kv[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return kv;
}


void write_scale_csv(std::ostream& out, std::span<const RunReport> reports) {
  out << scale_csv_header << '\n';
  for (const auto& r : reports)
    out << r.threads << ',' << ms(r.geomean_time_ms) << ',' << ms(r.local_moving_ms) << ','
        << ms(r.aggregation_ms) << ',' << ms(r.other_ms) << ',' << format_double(r.modularity) << '\n';
}




// COMMAND LINE
// ------------

namespace {

struct Options {
  std::string input;
  std::string format = "auto";
  bool weighted = false;
  bool seedless = false;
  LouvainParams params;
  std::vector<int> thread_list{1, 2, 4, 8};
  int repeats = 1;
  std::string output;
  std::string report;
};

void add_common(CLI::App* cmd, Options& o, bool thread_list) {
  cmd->add_option("--input", o.input, "Graph file")->required();
  cmd->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"auto", "mtx", "edgelist"}));
  cmd->add_flag("--weighted", o.weighted, "Edge-list lines carry a weight column");
  cmd->add_flag("--seedless", o.seedless, "Accepted for compatibility; detection uses no randomness");
  if (thread_list)
    cmd->add_option("--threads", o.thread_list, "Comma-separated thread counts")->delimiter(',');
  else
    cmd->add_option("--threads", o.params.thread_count, "Threads (1 = sequential)");
  cmd->add_option("--max-passes", o.params.max_passes, "Pass cap")->capture_default_str();
  cmd->add_option("--max-iterations", o.params.max_iterations, "Local-moving iterations per pass")->capture_default_str();
  cmd->add_option("--tolerance", o.params.initial_tolerance, "Convergence tolerance of the first pass")->capture_default_str();
  cmd->add_option("--tolerance-drop", o.params.tolerance_drop, "Tolerance divisor per pass")->capture_default_str();
  cmd->add_option("--aggregation-tolerance", o.params.aggregation_tolerance, "Stop when communities/vertices reaches this")
      ->capture_default_str();
  cmd->add_option("--chunk-size", o.params.chunk_size, "Dynamic schedule chunk")->capture_default_str();
  cmd->add_flag("!--no-pruning", o.params.vertex_pruning, "Disable vertex pruning");
  cmd->add_option("--repeats", o.repeats, "Runs to average over")->capture_default_str();
  cmd->add_option("--output", o.output, "Membership file (scale: CSV file)");
  cmd->add_option("--report", o.report, "Report file");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

int cmd_run(const Options& o, std::ostream& out) {
  auto g = load_graph(o.input, o.format, o.weighted);
  LouvainResult last;
  auto report = benchmark(g, std::filesystem::path(o.input).filename().string(), o.params, o.repeats, &last);
  if (!o.output.empty()) {
    auto f = open_output(o.output);
    write_membership(f, last.membership);
  }
  if (!o.report.empty()) {
    auto f = open_output(o.report);
    write_report(f, report);
  }
  write_report(out, report);
  return kSuccess;
}

int cmd_scale(const Options& o, std::ostream& out) {
  for (int t : o.thread_list)
    if (t < 1) throw std::invalid_argument("thread counts must be positive");
  auto g = load_graph(o.input, o.format, o.weighted);
  auto name = std::filesystem::path(o.input).filename().string();
  std::vector<RunReport> reports;
  for (int t : o.thread_list) {
    auto params = o.params;
    params.thread_count = t;
    reports.push_back(benchmark(g, name, params, o.repeats));
  }
  if (!o.report.empty()) {
    auto f = open_output(o.report);
    for (std::size_t k = 0; k < reports.size(); ++k) {
      if (k) f << '\n';
      write_report(f, reports[k]);
    }
  }
  if (!o.output.empty()) {
    auto f = open_output(o.output);
    write_scale_csv(f, reports);
  }
  write_scale_csv(out, reports);
  return kSuccess;
}

}  // namespace


int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shared-memory parallel Louvain community detection", "gve-louvain"};
  app.require_subcommand(1);
  Options run_opts, bench_opts, scale_opts;
  bench_opts.repeats = 5;
  scale_opts.repeats = 5;
  auto* run_cmd = app.add_subcommand("run", "Detect communities and write memberships");
  auto* bench_cmd = app.add_subcommand("bench", "Repeat detection and report mean runtimes");
  auto* scale_cmd = app.add_subcommand("scale", "Strong-scaling sweep over thread counts, as CSV");
  add_common(run_cmd, run_opts, false);
  add_common(bench_cmd, bench_opts, false);
  add_common(scale_cmd, scale_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  const Options& o = run_cmd->parsed() ? run_opts : bench_cmd->parsed() ? bench_opts : scale_opts;
  try {
    o.params.validate();
    if (o.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  try {
    if (scale_cmd->parsed()) return cmd_scale(o, out);
    return cmd_run(o, out);
  } catch (const LoadError& e) {
    err << "error: " << o.input << ": " << e.what() << '\n';
    return kInputError;
  } catch (const EmptyGraph& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace gve::cli
