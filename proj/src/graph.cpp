#include "gve/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include <omp.h>

namespace gve {

LoadError::LoadError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}


namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <class T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw LoadError("invalid " + std::string(what) + " '" + std::string(token) + "'", line);
  return value;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path.string() + "'", 0);
  return in;
}

}  // namespace


EdgeList parse_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw LoadError("empty file", 1);
  ++lineno;
  auto header = split_tokens(line);
  if (header.size() != 5 || lowercase(header[0]) != "%%matrixmarket")
    throw LoadError("missing %%MatrixMarket header", lineno);
  if (lowercase(header[1]) != "matrix" || lowercase(header[2]) != "coordinate")
    throw LoadError("only 'matrix coordinate' objects are supported", lineno);
  auto field = lowercase(header[3]);
  auto symmetry = lowercase(header[4]);
  if (field != "real" && field != "integer" && field != "pattern")
    throw LoadError("unsupported field '" + field + "'", lineno);
  if (symmetry != "general" && symmetry != "symmetric")
    throw LoadError("unsupported symmetry '" + symmetry + "'", lineno);
  bool pattern = field == "pattern";

  // Size line, after any comments.
  std::vector<std::string_view> size;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.starts_with('%') || is_blank(line)) continue;
    size = split_tokens(line);
    break;
  }
  if (size.size() != 3) throw LoadError("expected 'rows cols entries' size line", lineno);
  auto rows = parse_number<std::uint64_t>(size[0], lineno, "row count");
  auto cols = parse_number<std::uint64_t>(size[1], lineno, "column count");
  auto nnz  = parse_number<std::uint64_t>(size[2], lineno, "entry count");
  auto order = std::max(rows, cols);
  if (order > UINT32_MAX) throw LoadError("graph too large", lineno);

  EdgeList out;
  out.order = static_cast<VertexId>(order);
  out.one_based = true;
  out.entries.reserve(nnz);
  while (out.entries.size() < nnz && std::getline(in, line)) {
    ++lineno;
    if (line.starts_with('%') || is_blank(line)) continue;
    auto tokens = split_tokens(line);
    if (tokens.size() != (pattern ? 2u : 3u))
      throw LoadError("expected " + std::string(pattern ? "2" : "3") + " fields", lineno);
    auto u = parse_number<std::uint64_t>(tokens[0], lineno, "row index");
    auto v = parse_number<std::uint64_t>(tokens[1], lineno, "column index");
    if (u < 1 || u > rows || v < 1 || v > cols)
      throw LoadError("index (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range", lineno);
    Weight w = pattern ? 1.0 : parse_number<double>(tokens[2], lineno, "weight");
    if (!(w >= 0)) throw LoadError("negative weight", lineno);
    out.entries.push_back({static_cast<VertexId>(u - 1), static_cast<VertexId>(v - 1), w});
  }
  if (out.entries.size() < nnz)
    throw LoadError("expected " + std::to_string(nnz) + " entries, found " + std::to_string(out.entries.size()), lineno);
  return out;
}


EdgeList parse_edge_list(std::istream& in, bool weighted) {
  EdgeList out;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t max_index = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens[0].starts_with('#') || tokens[0].starts_with('%')) continue;
    if (tokens.size() < 2) throw LoadError("expected 'u v" + std::string(weighted ? " w'" : "'"), lineno);
    auto u = parse_number<std::uint64_t>(tokens[0], lineno, "vertex index");
    auto v = parse_number<std::uint64_t>(tokens[1], lineno, "vertex index");
    if (u >= UINT32_MAX || v >= UINT32_MAX) throw LoadError("vertex index too large", lineno);
    Weight w = 1.0;
    if (weighted) {
      if (tokens.size() < 3) throw LoadError("missing weight", lineno);
      w = parse_number<double>(tokens[2], lineno, "weight");
      if (!(w >= 0)) throw LoadError("negative weight", lineno);
    }
    max_index = std::max({max_index, u, v});
    any = true;
    out.entries.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
  }
  out.order = any ? static_cast<VertexId>(max_index + 1) : 0;
  return out;
}


EdgeList load_matrix_market(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_matrix_market(in);
}

EdgeList load_edge_list(const std::filesystem::path& path, bool weighted) {
  auto in = open_or_throw(path);
  return parse_edge_list(in, weighted);
}




// CSR GRAPH
// ---------

CsrGraph::CsrGraph() : offsets_(1, 0) {}

CsrGraph::CsrGraph(CsrParts parts)
    : offsets_(std::move(parts.offsets)),
      degrees_(std::move(parts.degrees)),
      targets_(std::move(parts.targets)),
      weights_(std::move(parts.weights)) {
  if (offsets_.size() != degrees_.size() + 1 || targets_.size() != weights_.size() ||
      offsets_.back() > targets_.size())
    throw std::invalid_argument("CsrGraph: inconsistent array sizes");
  Weight sum = 0;
  for (VertexId i = 0; i < order(); ++i) {
    auto begin = offsets_[i];
    entry_count_ += degrees_[i];
    for (auto e = begin; e < begin + degrees_[i]; ++e) {
      bool loop = targets_[e] == i;
      self_loop_count_ += loop;
      sum += loop ? 2 * weights_[e] : weights_[e];
    }
  }
  total_weight_ = sum / 2;
}

bool CsrGraph::is_holey() const noexcept {
  for (VertexId i = 0; i < order(); ++i)
    if (offsets_[i] + degrees_[i] != offsets_[i + 1]) return true;
  return false;
}

CsrParts CsrGraph::release() && {
  CsrParts parts{std::move(offsets_), std::move(degrees_), std::move(targets_), std::move(weights_)};
  *this = CsrGraph();
  return parts;
}

void CsrGraph::validate() const {
  auto fail = [](const std::string& what) { throw std::logic_error("CsrGraph: " + what); };
  if (offsets_.empty() || offsets_[0] != 0) fail("offsets[0] must be 0");
  for (VertexId i = 0; i < order(); ++i) {
    if (offsets_[i] > offsets_[i + 1]) fail("offsets must be non-decreasing");
    if (offsets_[i] + degrees_[i] > offsets_[i + 1]) fail("degree exceeds slice of vertex " + std::to_string(i));
    auto nbrs = neighbors(i);
    auto wts = edge_weights(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] >= order()) fail("neighbor out of range");
      if (!(wts[k] >= 0)) fail("negative weight");
      if (k > 0 && nbrs[k - 1] >= nbrs[k]) fail("adjacency of " + std::to_string(i) + " not strictly ascending");
      auto j = nbrs[k];
      if (j == i) continue;
      auto back = neighbors(j);
      auto it = std::lower_bound(back.begin(), back.end(), i);
      if (it == back.end() || *it != i) fail("missing mirror of edge " + std::to_string(i) + "-" + std::to_string(j));
      if (edge_weights(j)[it - back.begin()] != wts[k]) fail("asymmetric weight on edge " + std::to_string(i) + "-" + std::to_string(j));
    }
  }
}

bool operator==(const CsrGraph& a, const CsrGraph& b) {
  if (a.order() != b.order()) return false;
  for (VertexId i = 0; i < a.order(); ++i) {
    auto an = a.neighbors(i), bn = b.neighbors(i);
    auto aw = a.edge_weights(i), bw = b.edge_weights(i);
    if (!std::equal(an.begin(), an.end(), bn.begin(), bn.end())) return false;
    if (!std::equal(aw.begin(), aw.end(), bw.begin(), bw.end())) return false;
  }
  return true;
}


CsrGraph build_csr(const EdgeList& edges) {
  for (const auto& e : edges.entries)
    if (e.source >= edges.order || e.target >= edges.order)
      throw std::invalid_argument("build_csr: edge index out of range");

  // Directed entries, both directions for non-loops.
  std::vector<EdgeEntry> directed;
  directed.reserve(2 * edges.entries.size());
  for (const auto& e : edges.entries) {
    directed.push_back(e);
    if (e.source != e.target) directed.push_back({e.target, e.source, e.weight});
  }
  std::sort(directed.begin(), directed.end(), [](const EdgeEntry& a, const EdgeEntry& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });

  CsrParts parts;
  parts.offsets.assign(std::size_t(edges.order) + 1, 0);
  parts.degrees.assign(edges.order, 0);
  parts.targets.reserve(directed.size());
  parts.weights.reserve(directed.size());
  for (std::size_t k = 0; k < directed.size();) {
    auto [u, v, w] = directed[k];
    Weight sum = 0;
    for (; k < directed.size() && directed[k].source == u && directed[k].target == v; ++k)
      sum += directed[k].weight;
    parts.targets.push_back(v);
    parts.weights.push_back(sum);
    ++parts.degrees[u];
  }
  for (VertexId i = 0; i < edges.order; ++i)
    parts.offsets[i + 1] = parts.offsets[i] + parts.degrees[i];
  return CsrGraph(std::move(parts));
}


EdgeList extract_edges(const CsrGraph& g) {
  EdgeList out;
  out.order = g.order();
  for (VertexId i = 0; i < g.order(); ++i) {
    auto nbrs = g.neighbors(i);
    auto wts = g.edge_weights(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k)
      if (i <= nbrs[k]) out.entries.push_back({i, nbrs[k], wts[k]});
  }
  return out;
}


Weight weighted_degree(const CsrGraph& g, VertexId i) {
  if (i >= g.order()) throw std::out_of_range("weighted_degree: vertex " + std::to_string(i) + " out of range");
  auto nbrs = g.neighbors(i);
  auto wts = g.edge_weights(i);
  Weight k = 0;
  for (std::size_t e = 0; e < nbrs.size(); ++e)
    k += nbrs[e] == i ? 2 * wts[e] : wts[e];
  return k;
}

void weighted_degrees(const CsrGraph& g, std::span<Weight> out, int threads) {
  const std::int64_t n = g.order();
  #pragma omp parallel for schedule(static, 2048) num_threads(threads) if(threads > 1)
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = weighted_degree(g, static_cast<VertexId>(i));
}

}  // namespace gve
