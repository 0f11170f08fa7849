#include "gve/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace gve::oracle {

PartitionEnumerator::PartitionEnumerator(VertexId n) : labels_(n, 0), prefix_max_(n, 0) {
  if (n > max_enumeration_order) throw std::invalid_argument("PartitionEnumerator: order too large");
}

bool PartitionEnumerator::next() {
  const std::size_t n = labels_.size();
  for (std::size_t k = n; k-- > 1;) {
    if (labels_[k] <= prefix_max_[k - 1]) {
      ++labels_[k];
      prefix_max_[k] = std::max(prefix_max_[k - 1], labels_[k]);
      for (std::size_t j = k + 1; j < n; ++j) {
        labels_[j] = 0;
        prefix_max_[j] = prefix_max_[k];
      }
      return true;
    }
  }
  return false;
}


std::uint64_t bell_number(VertexId n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (VertexId i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}


std::pair<Membership, double> best_partition_exhaustive(const CsrGraph& g) {
  if (g.order() > max_enumeration_order)
    throw std::invalid_argument("best_partition_exhaustive: order " + std::to_string(g.order()) + " exceeds " +
                                std::to_string(max_enumeration_order));
  PartitionEnumerator parts(g.order());
  Membership best = parts.current();
  double best_q = modularity_edge_form(g, best);
  while (parts.next()) {
    double q = modularity_edge_form(g, parts.current());
    if (q > best_q + 1e-12) {
      best_q = q;
      best = parts.current();
    }
  }
  return {best, best_q};
}


namespace {

using AdjacencyMap = std::vector<std::map<VertexId, Weight>>;

AdjacencyMap to_maps(const CsrGraph& g) {
  AdjacencyMap adj(g.order());
  for (VertexId i = 0; i < g.order(); ++i) {
    auto nbrs = g.neighbors(i);
    auto wts = g.edge_weights(i);
    for (std::size_t e = 0; e < nbrs.size(); ++e) adj[i][nbrs[e]] += wts[e];
  }
  return adj;
}

Weight degree_of(const AdjacencyMap& adj, VertexId i) {
  Weight k = 0;
  for (auto [j, w] : adj[i]) k += j == i ? 2 * w : w;
  return k;
}

}  // namespace


LouvainResult naive_louvain(const CsrGraph& g) {
  if (!(g.total_weight() > 0)) throw UndefinedModularity();
  const Weight m = g.total_weight();
  AdjacencyMap adj = to_maps(g);
  LouvainResult res;
  res.membership.resize(g.order());
  std::iota(res.membership.begin(), res.membership.end(), VertexId(0));

  while (true) {
    const VertexId n = static_cast<VertexId>(adj.size());
    std::vector<Weight> k(n), sigma(n);
    Membership memb(n);
    for (VertexId i = 0; i < n; ++i) {
      k[i] = sigma[i] = degree_of(adj, i);
      memb[i] = i;
    }

    // Local moving until an iteration makes no move.
    int iterations = 0;
    bool any_move = false;
    while (true) {
      ++iterations;
      bool moved = false;
      for (VertexId i = 0; i < n; ++i) {
        std::map<VertexId, Weight> links;
        for (auto [j, w] : adj[i])
          if (j != i && w != 0) links[memb[j]] += w;
        VertexId d = memb[i];
        Weight k_d = links.count(d) ? links[d] : 0;
        VertexId best = d;
        double best_dq = 0;
        for (auto [c, k_c] : links) {
          if (c == d) continue;
          double dq = delta_modularity(m, k[i], k_c, k_d, sigma[c], sigma[d]);
          if (dq > best_dq) {
            best = c;
            best_dq = dq;
          }
        }
        if (best != d) {
          sigma[d] -= k[i];
          sigma[best] += k[i];
          memb[i] = best;
          moved = true;
        }
      }
      if (!moved) break;
      any_move = true;
    }
    PassStats st;
    st.iterations = iterations;
    st.vertex_count = n;

    // Renumber by ascending old id.
    std::map<VertexId, VertexId> ids;
    for (auto c : memb) ids.emplace(c, 0);
    VertexId next_id = 0;
    for (auto& [c, id] : ids) id = next_id++;
    for (auto& c : memb) c = ids[c];
    st.community_count = next_id;
    for (auto& c : res.membership) c = memb[c];
    res.pass_stats.push_back(st);
    if (!any_move) break;

    // Rebuild the community graph from scratch.
    AdjacencyMap coarse(next_id);
    for (VertexId i = 0; i < n; ++i)
      for (auto [j, w] : adj[i]) {
        VertexId ci = memb[i], cj = memb[j];
        if (ci != cj) coarse[ci][cj] += w;
        else coarse[ci][ci] += i == j ? w : w / 2;
      }
    adj = std::move(coarse);
  }
  res.passes = static_cast<int>(res.pass_stats.size());
  res.modularity = modularity(g, res.membership);
  return res;
}


double best_single_move_gain(const CsrGraph& g, std::span<const VertexId> membership) {
  auto cw = community_weights(g, membership);
  const Weight m = g.total_weight();
  double best = -std::numeric_limits<double>::infinity();
  for (VertexId i = 0; i < g.order(); ++i) {
    std::map<VertexId, Weight> links;
    auto nbrs = g.neighbors(i);
    auto wts = g.edge_weights(i);
    for (std::size_t e = 0; e < nbrs.size(); ++e)
      if (nbrs[e] != i) links[membership[nbrs[e]]] += wts[e];
    VertexId d = membership[i];
    Weight k_i = weighted_degree(g, i);
    Weight k_d = links.count(d) ? links[d] : 0;
    for (auto [c, k_c] : links) {
      if (c == d) continue;
      best = std::max(best, delta_modularity(m, k_i, k_c, k_d, cw.big_sigma[c], cw.big_sigma[d]));
    }
  }
  return best;
}

}  // namespace gve::oracle
