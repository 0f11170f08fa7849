#pragma once
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <new>
#include <span>
#include <utility>
#include <vector>

#include "gve/graph.hpp"
#include "gve/metrics.hpp"

namespace gve {

/**
 * Tunable knobs of the algorithm. Defaults are the tuned values; thread_count
 * of 1 selects the sequential path, which is bit-reproducible.
 */
struct LouvainParams {
  int max_passes = 10;
  int max_iterations = 20;            // local-moving iterations per pass
  double initial_tolerance = 0.01;    // convergence threshold of the first pass
  double tolerance_drop = 10;         // threshold divided by this after every pass
  double aggregation_tolerance = 0.8; // stop when communities/vertices >= this
  int chunk_size = 2048;              // vertices claimed at once by a thread
  int thread_count = 1;
  bool vertex_pruning = true;
  bool track_pass_modularity = false; // record Q after each pass (costs one extra scan)

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};


/**
 * Per-thread collision-free map from community id to accumulated weight.
 * A dense list of touched keys plus a value array as long as the current
 * graph's vertex count; clear() only resets the touched entries. The value
 * array is cache-line aligned and padded so that accumulators owned by
 * different threads never share a line.
 */
class alignas(64) ScanAccumulator {
 public:
  ScanAccumulator() = default;
  explicit ScanAccumulator(VertexId capacity) { resize(capacity); }

  /// Set the logical key range to [0, size). Reallocates only when growing.
  void resize(VertexId size);
  VertexId size() const noexcept { return size_; }

  void add(VertexId c, Weight w) {
    if (values_[c] == 0) keys_.push_back(c);
    values_[c] += w;
  }
  void clear() noexcept {
    for (auto c : keys_) values_[c] = 0;
    keys_.clear();
  }

  Weight value(VertexId c) const noexcept { return values_[c]; }
  std::span<const VertexId> keys() const noexcept { return keys_; }
  std::span<VertexId> keys() noexcept { return keys_; }

 private:
  struct AlignedFree {
    void operator()(Weight* p) const noexcept { ::operator delete[](p, std::align_val_t{64}); }
  };
  std::vector<VertexId> keys_;
  std::unique_ptr<Weight[], AlignedFree> values_;
  VertexId size_ = 0;
  std::size_t capacity_ = 0;
};


/**
 * Processed/unprocessed marker per vertex for vertex pruning. Reads and
 * writes are relaxed atomics: stale reads are tolerated.
 */
class PruneFlags {
 public:
  PruneFlags() = default;
  explicit PruneFlags(VertexId n) { reset(n); }

  /// Resize to n vertices, all marked unprocessed.
  void reset(VertexId n);
  VertexId size() const noexcept { return static_cast<VertexId>(flags_.size()); }

  bool is_unprocessed(VertexId i) const noexcept {
    return std::atomic_ref<std::uint8_t>(const_cast<std::uint8_t&>(flags_[i])).load(std::memory_order_relaxed) != 0;
  }
  void mark_processed(VertexId i) noexcept {
    std::atomic_ref<std::uint8_t>(flags_[i]).store(0, std::memory_order_relaxed);
  }
  void mark_unprocessed(VertexId i) noexcept {
    std::atomic_ref<std::uint8_t>(flags_[i]).store(1, std::memory_order_relaxed);
  }

 private:
  std::vector<std::uint8_t> flags_;
};


struct PassStats {
  int iterations = 0;
  VertexId vertex_count = 0;     // order of the graph this pass ran on
  VertexId community_count = 0;  // communities left after local-moving
  double tolerance = 0;
  double modularity = 0;         // NaN unless LouvainParams::track_pass_modularity
  double local_moving_seconds = 0;
  double aggregation_seconds = 0;
  double other_seconds = 0;
};


struct LouvainResult {
  Membership membership;          // dense community ids on the input vertices
  double modularity = 0;
  bool modularity_defined = true; // false for graphs without edges
  int passes = 0;
  std::vector<PassStats> pass_stats;
  double total_seconds = 0;
  double local_moving_seconds = 0;
  double aggregation_seconds = 0;
  double other_seconds = 0;

  std::size_t community_count() const { return count_communities(membership); }
};


/// Called for every applied move: (vertex, from, to, delta modularity at decision time).
using MoveObserver = std::function<void(VertexId, VertexId, VertexId, double)>;


LouvainResult louvain(const CsrGraph& g, const LouvainParams& params = {});

/**
 * Local-moving phase on g. membership, vertex_weights (K) and
 * community_weights (Sigma) must be mutually consistent on entry; all three
 * are updated in place. accumulators needs one entry per thread, each sized
 * to g.order(). Returns the number of iterations performed.
 */
int local_move(const CsrGraph& g, std::span<VertexId> membership,
               std::span<const Weight> vertex_weights, std::span<Weight> community_weights,
               double tolerance, const LouvainParams& params, PruneFlags& flags,
               std::span<ScanAccumulator> accumulators, const MoveObserver* observer = nullptr);

/**
 * Accumulate the weight from i to each community among its neighbors into
 * acc (which must be cleared). The self-loop of i is skipped unless
 * self_allowed; returns the self-loop weight that was accumulated.
 * Zero-weight entries contribute no key.
 */
Weight scan_communities(const CsrGraph& g, std::span<const VertexId> membership, VertexId i,
                        bool self_allowed, ScanAccumulator& acc);

/**
 * Best community for a vertex from a populated accumulator: the argmax of
 * delta modularity over scanned keys, ties to the lowest id. Returns
 * (current, 0) when no move improves modularity.
 */
std::pair<VertexId, double> best_community(const ScanAccumulator& acc, VertexId current, Weight k_i,
                                           std::span<const Weight> sigma, Weight m);

/// Relabel communities densely, in ascending order of old id. Returns the count.
VertexId renumber(std::span<VertexId> membership, int threads = 1);
std::pair<Membership, VertexId> renumber(Membership membership);

/// result[i] = level[top[i]]. Throws std::out_of_range.
Membership lookup_dendrogram(std::span<const VertexId> top, std::span<const VertexId> level);
void lookup_dendrogram_in_place(std::span<VertexId> top, std::span<const VertexId> level, int threads = 1);

/**
 * out[k] = sum of in[j] for j < k; returns the grand total. in and out may
 * alias. The parallel result is identical to the sequential one.
 */
template <class T>
T exclusive_scan(std::span<const T> in, std::span<T> out, int threads = 1);

/**
 * Collapse each community of a dense membership into a super-vertex.
 * Edge weights between super-vertices are the summed inter-community
 * weights; a community's internal weight becomes a self-loop. The result is
 * a holey CSR whose slices are over-estimated from member degrees.
 */
CsrGraph aggregate(const CsrGraph& g, std::span<const VertexId> membership,
                   std::span<ScanAccumulator> accumulators, int threads = 1, int chunk_size = 2048);

}  // namespace gve
