#pragma once
#include <span>
#include <stdexcept>
#include <vector>

#include "gve/graph.hpp"

namespace gve {

/// Community id of each vertex, indexed by vertex.
using Membership = std::vector<VertexId>;


/** Modularity is undefined on a graph without edge weight (m = 0). */
class UndefinedModularity : public std::domain_error {
 public:
  UndefinedModularity() : std::domain_error("modularity is undefined: graph has no edges") {}
};


/**
 * Per-community aggregates over ordered vertex pairs.
 * sigma[c] counts each internal edge twice and a self-loop's weight twice;
 * big_sigma[c] is the sum of K_i over members. Indexed by community id.
 */
struct CommunityWeights {
  std::vector<Weight> sigma;
  std::vector<Weight> big_sigma;
};


CommunityWeights community_weights(const CsrGraph& g, std::span<const VertexId> membership);

/// Q = sum over communities of sigma/2m - (Sigma/2m)^2.
double modularity(const CsrGraph& g, std::span<const VertexId> membership);

/// Q from community aggregates directly (used by the algorithm on super-vertex graphs).
double modularity(const CommunityWeights& cw, Weight m);

/**
 * Q via the pairwise form: (1/2m) sum over vertex pairs in the same community
 * of [A_ij - K_i K_j / 2m], where A_ii is twice the self-loop weight.
 * Quadratic in the vertex count; meant for cross-checking.
 */
double modularity_edge_form(const CsrGraph& g, std::span<const VertexId> membership);

/**
 * Change in modularity when vertex i moves from community d to community c.
 *
 *   dQ = (k_i_to_c - k_i_to_d)/m - k_i (k_i + sigma_c - sigma_d) / (2 m^2)
 *
 * sigma_d is the current total of i's own community (i included) and sigma_c
 * the target total (i not included). Edge weights from i exclude its self-loop.
 */
double delta_modularity(Weight m, Weight k_i, Weight k_i_to_c, Weight k_i_to_d,
                        Weight sigma_c, Weight sigma_d);

/// Number of distinct community ids in use.
std::size_t count_communities(std::span<const VertexId> membership);

}  // namespace gve
