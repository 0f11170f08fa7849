#pragma once
// Graph fixtures and generators shared by the test binaries.
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gve/graph.hpp"
#include "gve/metrics.hpp"

#ifndef GVE_TEST_DATA_DIR
#define GVE_TEST_DATA_DIR "tests/data"
#endif

namespace gve::test {

inline std::string data_path(const std::string& name) { return std::string(GVE_TEST_DATA_DIR) + "/" + name; }

inline CsrGraph graph_from(VertexId order, std::vector<EdgeEntry> entries) {
  return build_csr(EdgeList{order, false, std::move(entries)});
}

inline CsrGraph triangle() { return graph_from(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}); }

// Two triangles {0,1,2} and {3,4,5} joined by the edge 2-3; m = 7.
inline CsrGraph barbell() {
  return graph_from(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}});
}

// Two disjoint cliques of size k: {0..k-1} and {k..2k-1}.
inline CsrGraph two_cliques(VertexId k = 4) {
  std::vector<EdgeEntry> e;
  for (VertexId base : {VertexId(0), k})
    for (VertexId i = 0; i < k; ++i)
      for (VertexId j = i + 1; j < k; ++j) e.push_back({base + i, base + j, 1});
  return graph_from(2 * k, e);
}

inline CsrGraph karate() { return build_csr(load_matrix_market(data_path("karate.mtx"))); }


/// Erdos-Renyi graph with integer weights in [1, max_weight] and optional self-loops.
inline CsrGraph random_graph(VertexId n, double p, std::uint64_t seed, int max_weight = 5,
                             double loop_probability = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<EdgeEntry> e;
  for (VertexId i = 0; i < n; ++i) {
    if (coin(rng) < loop_probability) e.push_back({i, i, double(weight(rng))});
    for (VertexId j = i + 1; j < n; ++j)
      if (coin(rng) < p) e.push_back({i, j, double(weight(rng))});
  }
  return graph_from(n, e);
}

inline bool is_connected(const CsrGraph& g) {
  if (g.order() == 0) return true;
  std::vector<bool> seen(g.order());
  std::vector<VertexId> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto v : g.neighbors(u))
      if (!seen[v]) { seen[v] = true; ++count; stack.push_back(v); }
  }
  return count == g.order();
}

/// Connected unit-weight graphs with 3..8 vertices from a fixed seed sequence.
inline std::vector<CsrGraph> tiny_connected_graphs(std::size_t count = 60) {
  std::vector<CsrGraph> out;
  for (std::uint64_t seed = 1; out.size() < count; ++seed) {
    std::mt19937_64 rng(seed);
    VertexId n = 3 + rng() % 6;
    double p = 0.25 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
    auto g = random_graph(n, p, seed * 7919, 1, 0);
    if (is_connected(g)) out.push_back(std::move(g));
  }
  return out;
}

/// Random membership with ids in [0, n).
inline Membership random_membership(VertexId n, VertexId communities, std::mt19937_64& rng) {
  Membership m(n);
  for (auto& c : m) c = static_cast<VertexId>(rng() % std::max<VertexId>(1, communities));
  return m;
}


/**
 * Planted-partition graph in the spirit of LFR: power-law degrees, community
 * sizes uniform in [min_size, max_size], a fraction `mixing` of each
 * vertex's edges leaving its community. Duplicate pairs merge by summation.
 */
inline CsrGraph clustered_graph(VertexId n, double average_degree, double mixing, std::uint64_t seed,
                                VertexId min_size = 20, VertexId max_size = 200) {
  std::mt19937_64 rng(seed);
  std::vector<VertexId> start;  // first vertex of each community
  for (VertexId v = 0; v < n;) {
    start.push_back(v);
    v += std::uniform_int_distribution<VertexId>(min_size, max_size)(rng);
  }
  start.push_back(n);
  std::vector<EdgeEntry> e;
  e.reserve(std::size_t(n * average_degree / 2) + n);
  // Truncated power law with exponent 2.5 on [1, 50], rescaled to the target mean.
  std::uniform_real_distribution<double> unit(0, 1);
  auto draw = [&] { return std::pow(1 - unit(rng) * (1 - std::pow(50.0, -1.5)), -1 / 1.5); };
  double mean = 0;
  for (int k = 0; k < 10000; ++k) mean += draw() / 10000;
  for (std::size_t c = 0; c + 1 < start.size(); ++c) {
    VertexId lo = start[c], hi = start[c + 1];
    for (VertexId u = lo; u < hi; ++u) {
      double half = draw() * average_degree / mean / 2;
      int stubs = int(half) + (unit(rng) < half - int(half));
      for (int s = 0; s < stubs; ++s) {
        VertexId v = unit(rng) < mixing ? VertexId(rng() % n) : VertexId(lo + rng() % (hi - lo));
        if (v != u) e.push_back({u, v, 1});
      }
    }
  }
  return graph_from(n, std::move(e));
}

}  // namespace gve::test
