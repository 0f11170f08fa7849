#include "gve/metrics.hpp"

#include <algorithm>
#include <string>

namespace gve {

namespace {

void check_membership(const CsrGraph& g, std::span<const VertexId> membership) {
  if (membership.size() != g.order())
    throw std::invalid_argument("membership size " + std::to_string(membership.size()) +
                                " does not match graph order " + std::to_string(g.order()));
  for (auto c : membership)
    if (c >= g.order()) throw std::invalid_argument("community id " + std::to_string(c) + " out of range");
}

}  // namespace


CommunityWeights community_weights(const CsrGraph& g, std::span<const VertexId> membership) {
  check_membership(g, membership);
  CommunityWeights cw{std::vector<Weight>(g.order()), std::vector<Weight>(g.order())};
  for (VertexId i = 0; i < g.order(); ++i) {
    auto c = membership[i];
    auto nbrs = g.neighbors(i);
    auto wts = g.edge_weights(i);
    for (std::size_t e = 0; e < nbrs.size(); ++e) {
      Weight w = nbrs[e] == i ? 2 * wts[e] : wts[e];
      cw.big_sigma[c] += w;
      if (membership[nbrs[e]] == c) cw.sigma[c] += w;
    }
  }
  return cw;
}


double modularity(const CommunityWeights& cw, Weight m) {
  if (!(m > 0)) throw UndefinedModularity();
  double q = 0;
  for (std::size_t c = 0; c < cw.sigma.size(); ++c) {
    double frac = cw.big_sigma[c] / (2 * m);
    q += cw.sigma[c] / (2 * m) - frac * frac;
  }
  return q;
}

double modularity(const CsrGraph& g, std::span<const VertexId> membership) {
  if (!(g.total_weight() > 0)) throw UndefinedModularity();
  return modularity(community_weights(g, membership), g.total_weight());
}


double modularity_edge_form(const CsrGraph& g, std::span<const VertexId> membership) {
  check_membership(g, membership);
  Weight m = g.total_weight();
  if (!(m > 0)) throw UndefinedModularity();
  const VertexId n = g.order();
  std::vector<Weight> k(n);
  for (VertexId i = 0; i < n; ++i) k[i] = weighted_degree(g, i);
  double sum = 0;
  for (VertexId i = 0; i < n; ++i) {
    // Adjacency term; A_ii is twice the self-loop weight.
    auto nbrs = g.neighbors(i);
    auto wts = g.edge_weights(i);
    for (std::size_t e = 0; e < nbrs.size(); ++e) {
      if (membership[nbrs[e]] != membership[i]) continue;
      sum += nbrs[e] == i ? 2 * wts[e] : wts[e];
    }
    // Null-model term over every pair, diagonal included.
    for (VertexId j = 0; j < n; ++j)
      if (membership[i] == membership[j]) sum -= k[i] * k[j] / (2 * m);
  }
  return sum / (2 * m);
}


double delta_modularity(Weight m, Weight k_i, Weight k_i_to_c, Weight k_i_to_d,
                        Weight sigma_c, Weight sigma_d) {
  if (!(m > 0)) throw UndefinedModularity();
  return (k_i_to_c - k_i_to_d) / m - k_i * (k_i + sigma_c - sigma_d) / (2 * m * m);
}


std::size_t count_communities(std::span<const VertexId> membership) {
  if (membership.empty()) return 0;
  auto top = *std::max_element(membership.begin(), membership.end());
  std::vector<bool> seen(std::size_t(top) + 1);
  std::size_t n = 0;
  for (auto c : membership)
    if (!seen[c]) { seen[c] = true; ++n; }
  return n;
}

}  // namespace gve
