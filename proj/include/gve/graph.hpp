#pragma once
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gve {

using VertexId = std::uint32_t;
using EdgeOffset = std::size_t;
using Weight = double;


/**
 * Raised by the loaders when an input file cannot be parsed.
 * Carries the one-based line number where the problem was found (0 if the
 * problem is not tied to a line, e.g. a missing file).
 */
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};


struct EdgeEntry {
  VertexId source;
  VertexId target;
  Weight weight;

  friend bool operator==(const EdgeEntry&, const EdgeEntry&) = default;
};


/** Zero-based edge entries as read from disk, before symmetrization. */
struct EdgeList {
  VertexId order = 0;       // declared (or inferred) vertex count
  bool one_based = false;   // source file used one-based indices
  std::vector<EdgeEntry> entries;
};


/**
 * Storage backing a CsrGraph. offsets has order+1 entries; the adjacency of
 * vertex i lives in [offsets[i], offsets[i] + degrees[i]). Slots between
 * offsets[i] + degrees[i] and offsets[i+1] are unused (holey CSR).
 */
struct CsrParts {
  std::vector<EdgeOffset> offsets;
  std::vector<VertexId> degrees;
  std::vector<VertexId> targets;
  std::vector<Weight> weights;
};


/**
 * Undirected weighted graph in compressed sparse row form.
 *
 * Every undirected edge {i, j} with i != j is stored in both directions; a
 * self-loop is stored once but its weight counts twice towards the weighted
 * degree, so that the weighted degrees sum to exactly 2m.
 * Immutable after construction.
 */
class CsrGraph {
 public:
  CsrGraph();
  explicit CsrGraph(CsrParts parts);

  VertexId order() const noexcept { return static_cast<VertexId>(degrees_.size()); }
  /// Number of stored (directed) adjacency entries, excluding holes.
  EdgeOffset entry_count() const noexcept { return entry_count_; }
  /// Number of undirected edges, self-loops included.
  EdgeOffset edge_count() const noexcept { return (entry_count_ + self_loop_count_) / 2; }
  /// m: half the sum of weighted degrees.
  Weight total_weight() const noexcept { return total_weight_; }
  bool is_holey() const noexcept;

  VertexId degree(VertexId i) const noexcept { return degrees_[i]; }
  std::span<const VertexId> neighbors(VertexId i) const noexcept {
    return {targets_.data() + offsets_[i], degrees_[i]};
  }
  std::span<const Weight> edge_weights(VertexId i) const noexcept {
    return {weights_.data() + offsets_[i], degrees_[i]};
  }

  std::span<const EdgeOffset> offsets() const noexcept { return offsets_; }
  std::span<const VertexId> degrees() const noexcept { return degrees_; }

  /// Hand back the storage so it can be reused for another graph.
  CsrParts release() &&;

  /// Throws std::logic_error describing the first broken invariant.
  void validate() const;

  friend bool operator==(const CsrGraph& a, const CsrGraph& b);

 private:
  std::vector<EdgeOffset> offsets_;
  std::vector<VertexId> degrees_;
  std::vector<VertexId> targets_;
  std::vector<Weight> weights_;
  EdgeOffset entry_count_ = 0;
  EdgeOffset self_loop_count_ = 0;
  Weight total_weight_ = 0;
};


EdgeList load_matrix_market(const std::filesystem::path& path);
EdgeList load_edge_list(const std::filesystem::path& path, bool weighted);

EdgeList parse_matrix_market(std::istream& in);
EdgeList parse_edge_list(std::istream& in, bool weighted);

/**
 * Symmetrize, merge duplicates by weight summation and sort each adjacency
 * slice by neighbor index. Self-loops become a single entry.
 */
CsrGraph build_csr(const EdgeList& edges);

/// Edge list holding each undirected edge once (i <= j).
EdgeList extract_edges(const CsrGraph& g);

/// K_i, with a self-loop counted twice. Throws std::out_of_range.
Weight weighted_degree(const CsrGraph& g, VertexId i);

/// K_i for every vertex; parallel over vertices when threads > 1.
void weighted_degrees(const CsrGraph& g, std::span<Weight> out, int threads = 1);

}  // namespace gve
