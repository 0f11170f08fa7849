#pragma once
#include <optional>
#include <utility>

#include "gve/graph.hpp"
#include "gve/louvain.hpp"
#include "gve/metrics.hpp"

// Slow reference implementations for cross-checking the optimized code.
namespace gve::oracle {

inline constexpr VertexId max_enumeration_order = 12;

/**
 * Enumerates every set partition of {0..n-1} as a restricted growth string:
 * a[0] = 0 and a[k] <= 1 + max(a[0..k-1]).
 */
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(VertexId n);

  const Membership& current() const noexcept { return labels_; }
  /// Advance to the next partition; false once all have been visited.
  bool next();

 private:
  Membership labels_;
  std::vector<VertexId> prefix_max_;
};

/// Number of set partitions of an n-element set.
std::uint64_t bell_number(VertexId n);

/// Globally best partition by enumeration (order <= 12), scored with the pairwise form.
std::pair<Membership, double> best_partition_exhaustive(const CsrGraph& g);

/**
 * Textbook sequential Louvain: vertices in index order, no pruning, no
 * iteration or pass caps, zero tolerance, aggregation rebuilt from ordered
 * maps. Ties go to the lowest community id.
 */
LouvainResult naive_louvain(const CsrGraph& g);

/**
 * Largest single-vertex delta modularity available from a membership, found
 * by trying every vertex against every neighboring community and
 * recomputing community totals from scratch.
 */
double best_single_move_gain(const CsrGraph& g, std::span<const VertexId> membership);

}  // namespace gve::oracle
