#include "gve/louvain.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace gve {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Loads/stores through atomic_ref only on the parallel path.
template <bool Parallel, class T>
T load(const T& x) noexcept {
  if constexpr (Parallel) return std::atomic_ref<T>(const_cast<T&>(x)).load(std::memory_order_relaxed);
  else return x;
}

template <bool Parallel, class T>
void store(T& x, T v) noexcept {
  if constexpr (Parallel) std::atomic_ref<T>(x).store(v, std::memory_order_relaxed);
  else x = v;
}

template <bool Parallel, class T>
T fetch_add(T& x, T v) noexcept {
  if constexpr (Parallel) return std::atomic_ref<T>(x).fetch_add(v, std::memory_order_relaxed);
  else { T old = x; x += v; return old; }
}

inline double delta_q(Weight m, Weight k_i, Weight k_c, Weight k_d, Weight s_c, Weight s_d) noexcept {
  return (k_c - k_d) / m - k_i * (k_i + s_c - s_d) / (2 * m * m);
}


template <bool Parallel>
Weight scan_impl(const CsrGraph& g, const VertexId* membership, VertexId i, bool self_allowed,
                 ScanAccumulator& acc) {
  auto nbrs = g.neighbors(i);
  auto wts = g.edge_weights(i);
  Weight self = 0;
  for (std::size_t e = 0; e < nbrs.size(); ++e) {
    VertexId j = nbrs[e];
    Weight w = wts[e];
    if (w == 0) continue;
    if (j == i) {
      if (!self_allowed) continue;
      self += w;
    }
    acc.add(load<Parallel>(membership[j]), w);
  }
  return self;
}


template <bool Parallel>
std::pair<VertexId, double> best_impl(const ScanAccumulator& acc, VertexId d, Weight k_i,
                                      const Weight* sigma, Weight m) {
  VertexId best = d;
  double best_dq = 0;
  Weight k_d = acc.value(d);
  Weight s_d = load<Parallel>(sigma[d]);
  for (VertexId c : acc.keys()) {
    if (c == d) continue;
    double dq = delta_q(m, k_i, acc.value(c), k_d, load<Parallel>(sigma[c]), s_d);
    if (dq > best_dq || (dq == best_dq && dq > 0 && c < best)) {
      best = c;
      best_dq = dq;
    }
  }
  return {best, best_dq};
}


template <bool Parallel>
int local_move_impl(const CsrGraph& g, VertexId* membership, const Weight* k, Weight* sigma,
                    double tolerance, const LouvainParams& p, PruneFlags& flags,
                    std::span<ScanAccumulator> accs, const MoveObserver* observer) {
  const Weight m = g.total_weight();
  const std::int64_t n = g.order();
  const bool prune = p.vertex_pruning;

  auto visit = [&](VertexId i, ScanAccumulator& acc) -> double {
    if (prune) {
      if (!flags.is_unprocessed(i)) return 0;
      flags.mark_processed(i);
    }
    acc.clear();
    scan_impl<Parallel>(g, membership, i, false, acc);
    VertexId d = load<Parallel>(membership[i]);
    auto [c, dq] = best_impl<Parallel>(acc, d, k[i], sigma, m);
    if (c == d) return 0;
    fetch_add<Parallel>(sigma[d], -k[i]);
    fetch_add<Parallel>(sigma[c], k[i]);
    store<Parallel>(membership[i], c);
    if (prune)
      for (VertexId j : g.neighbors(i)) flags.mark_unprocessed(j);
    if (observer) (*observer)(i, d, c, dq);
    return dq;
  };

  int l = 0;
  while (l < p.max_iterations) {
    double total = 0;
    if constexpr (Parallel) {
      #pragma omp parallel num_threads(p.thread_count) reduction(+:total)
      {
        auto& acc = accs[omp_get_thread_num()];
        #pragma omp for schedule(dynamic, p.chunk_size)
        for (std::int64_t i = 0; i < n; ++i) total += visit(static_cast<VertexId>(i), acc);
      }
    } else {
      for (std::int64_t i = 0; i < n; ++i) total += visit(static_cast<VertexId>(i), accs[0]);
    }
    ++l;
    if (total <= tolerance) break;
  }
  return l;
}


struct AggregationBuffers {
  std::vector<EdgeOffset> community_offsets;  // community-vertices CSR
  std::vector<EdgeOffset> cursor;
  std::vector<VertexId> community_vertices;
};

// Builds the super-vertex graph into out, reusing its storage.
template <bool Parallel>
void aggregate_impl(const CsrGraph& g, const VertexId* membership, VertexId communities,
                    AggregationBuffers& buf, std::span<ScanAccumulator> accs, int threads,
                    int chunk, CsrParts& out) {
  const std::int64_t n = g.order();
  const std::int64_t nc = communities;
  buf.community_offsets.assign(std::size_t(nc) + 1, 0);
  buf.community_vertices.resize(n);
  out.offsets.assign(std::size_t(nc) + 1, 0);
  out.degrees.assign(nc, 0);

  // Community vertices: count, scan, then claim slots.
  auto* coff = buf.community_offsets.data();
  #pragma omp parallel for schedule(static, 2048) num_threads(threads) if(Parallel)
  for (std::int64_t i = 0; i < n; ++i) fetch_add<Parallel>(coff[membership[i]], EdgeOffset(1));
  std::span<EdgeOffset> coff_all(buf.community_offsets);
  coff_all[nc] = exclusive_scan<EdgeOffset>(coff_all.first(nc), coff_all.first(nc), Parallel ? threads : 1);
  buf.cursor.assign(buf.community_offsets.begin(), buf.community_offsets.end() - 1);
  auto* cursor = buf.cursor.data();
  auto* cverts = buf.community_vertices.data();
  #pragma omp parallel for schedule(static, 2048) num_threads(threads) if(Parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    auto slot = fetch_add<Parallel>(cursor[membership[i]], EdgeOffset(1));
    cverts[slot] = static_cast<VertexId>(i);
  }

  // Super-vertex offsets from an over-estimate of each super-vertex degree.
  auto* yoff = out.offsets.data();
  #pragma omp parallel for schedule(static, 2048) num_threads(threads) if(Parallel)
  for (std::int64_t c = 0; c < nc; ++c) {
    EdgeOffset d = 0;
    for (auto s = coff[c]; s < coff[c + 1]; ++s) d += g.degree(cverts[s]);
    yoff[c] = d;
  }
  std::span<EdgeOffset> yoff_all(out.offsets);
  yoff_all[nc] = exclusive_scan<EdgeOffset>(yoff_all.first(nc), yoff_all.first(nc), Parallel ? threads : 1);
  out.targets.resize(yoff_all[nc]);
  out.weights.resize(yoff_all[nc]);

  // Edges of each super-vertex.
  auto emit = [&](VertexId c, ScanAccumulator& acc) {
    acc.clear();
    Weight loops = 0;
    for (auto s = coff[c]; s < coff[c + 1]; ++s)
      loops += scan_impl<false>(g, membership, cverts[s], true, acc);
    auto keys = acc.keys();
    std::sort(keys.begin(), keys.end());
    auto base = yoff[c];
    for (std::size_t k = 0; k < keys.size(); ++k) {
      VertexId d = keys[k];
      // Stored once; counted twice in the degree, giving sigma_c.
      out.targets[base + k] = d;
      out.weights[base + k] = d == c ? (acc.value(c) + loops) / 2 : acc.value(d);
    }
    out.degrees[c] = static_cast<VertexId>(keys.size());
  };
  if constexpr (Parallel) {
    #pragma omp parallel num_threads(threads)
    {
      auto& acc = accs[omp_get_thread_num()];
      #pragma omp for schedule(dynamic, chunk)
      for (std::int64_t c = 0; c < nc; ++c) emit(static_cast<VertexId>(c), acc);
    }
  } else {
    for (std::int64_t c = 0; c < nc; ++c) emit(static_cast<VertexId>(c), accs[0]);
  }
}

}  // namespace




// PARAMETERS AND DATA STRUCTURES
// ------------------------------

void LouvainParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("LouvainParams: " + what); };
  if (max_passes < 1) fail("max_passes must be >= 1");
  if (max_iterations < 1) fail("max_iterations must be >= 1");
  if (!(initial_tolerance >= 0)) fail("initial_tolerance must be >= 0");
  if (!(tolerance_drop >= 1)) fail("tolerance_drop must be >= 1");
  if (!(aggregation_tolerance > 0 && aggregation_tolerance <= 1)) fail("aggregation_tolerance must be in (0, 1]");
  if (chunk_size < 1) fail("chunk_size must be >= 1");
  if (thread_count < 1) fail("thread_count must be >= 1");
}


void ScanAccumulator::resize(VertexId size) {
  clear();
  if (size > capacity_) {
    // Round up to whole cache lines, plus one line of padding.
    std::size_t cap = (std::size_t(size) + 7) / 8 * 8 + 8;
    values_.reset(new (std::align_val_t{64}) Weight[cap]());
    capacity_ = cap;
  }
  size_ = size;
}


void PruneFlags::reset(VertexId n) {
  flags_.assign(n, 1);
}




// LOCAL-MOVING PHASE
// ------------------

Weight scan_communities(const CsrGraph& g, std::span<const VertexId> membership, VertexId i,
                        bool self_allowed, ScanAccumulator& acc) {
  return scan_impl<false>(g, membership.data(), i, self_allowed, acc);
}

std::pair<VertexId, double> best_community(const ScanAccumulator& acc, VertexId current, Weight k_i,
                                           std::span<const Weight> sigma, Weight m) {
  if (!(m > 0)) throw UndefinedModularity();
  return best_impl<false>(acc, current, k_i, sigma.data(), m);
}

int local_move(const CsrGraph& g, std::span<VertexId> membership,
               std::span<const Weight> vertex_weights, std::span<Weight> community_weights,
               double tolerance, const LouvainParams& params, PruneFlags& flags,
               std::span<ScanAccumulator> accumulators, const MoveObserver* observer) {
  params.validate();
  const auto n = g.order();
  if (membership.size() < n || vertex_weights.size() < n || community_weights.size() < n)
    throw std::invalid_argument("local_move: per-vertex arrays shorter than graph order");
  if (params.vertex_pruning && flags.size() < n)
    throw std::invalid_argument("local_move: prune flags shorter than graph order");
  auto threads = std::size_t(params.thread_count);
  if (accumulators.size() < threads)
    throw std::invalid_argument("local_move: need one accumulator per thread");
  for (std::size_t t = 0; t < threads; ++t)
    if (accumulators[t].size() < n) throw std::invalid_argument("local_move: accumulator too small");
  if (n == 0 || !(g.total_weight() > 0)) return 0;
  if (params.thread_count > 1)
    return local_move_impl<true>(g, membership.data(), vertex_weights.data(), community_weights.data(),
                                 tolerance, params, flags, accumulators, observer);
  return local_move_impl<false>(g, membership.data(), vertex_weights.data(), community_weights.data(),
                                tolerance, params, flags, accumulators, observer);
}




// RENUMBER, DENDROGRAM, SCAN
// --------------------------

template <class T>
T exclusive_scan(std::span<const T> in, std::span<T> out, int threads) {
  if (out.size() < in.size()) throw std::invalid_argument("exclusive_scan: output too short");
  const std::size_t n = in.size();
  if (threads <= 1 || n < 4096) {
    T sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
      T v = in[k];
      out[k] = sum;
      sum += v;
    }
    return sum;
  }
  std::vector<T> partial(threads + 1, 0);
  int used = 1;
  #pragma omp parallel num_threads(threads)
  {
    int t = omp_get_thread_num(), nt = omp_get_num_threads();
    #pragma omp single
    used = nt;
    std::size_t begin = n * t / nt, end = n * (t + 1) / nt;
    T sum = 0;
    for (std::size_t k = begin; k < end; ++k) sum += in[k];
    partial[t + 1] = sum;
    #pragma omp barrier
    #pragma omp single
    for (int s = 1; s <= nt; ++s) partial[s] += partial[s - 1];
    sum = partial[t];
    for (std::size_t k = begin; k < end; ++k) {
      T v = in[k];
      out[k] = sum;
      sum += v;
    }
  }
  return partial[used];
}

template EdgeOffset exclusive_scan<EdgeOffset>(std::span<const EdgeOffset>, std::span<EdgeOffset>, int);
template VertexId exclusive_scan<VertexId>(std::span<const VertexId>, std::span<VertexId>, int);


VertexId renumber(std::span<VertexId> membership, int threads) {
  if (membership.empty()) return 0;
  const std::int64_t n = membership.size();
  VertexId top = 0;
  for (auto c : membership) top = std::max(top, c);
  std::vector<VertexId> ids(std::size_t(top) + 1, 0);
  auto* idp = ids.data();
  #pragma omp parallel for schedule(static, 2048) num_threads(threads) if(threads > 1)
  for (std::int64_t i = 0; i < n; ++i) store<true>(idp[membership[i]], VertexId(1));
  VertexId count = exclusive_scan<VertexId>(ids, ids, threads);
  #pragma omp parallel for schedule(static, 2048) num_threads(threads) if(threads > 1)
  for (std::int64_t i = 0; i < n; ++i) membership[i] = idp[membership[i]];
  return count;
}

std::pair<Membership, VertexId> renumber(Membership membership) {
  auto count = renumber(std::span<VertexId>(membership), 1);
  return {std::move(membership), count};
}


void lookup_dendrogram_in_place(std::span<VertexId> top, std::span<const VertexId> level, int threads) {
  for (auto c : top)
    if (c >= level.size()) throw std::out_of_range("lookup_dendrogram: community " + std::to_string(c) + " has no entry in level");
  const std::int64_t n = top.size();
  #pragma omp parallel for schedule(static, 2048) num_threads(threads) if(threads > 1)
  for (std::int64_t i = 0; i < n; ++i) top[i] = level[top[i]];
}

Membership lookup_dendrogram(std::span<const VertexId> top, std::span<const VertexId> level) {
  Membership out(top.begin(), top.end());
  lookup_dendrogram_in_place(out, level, 1);
  return out;
}




// AGGREGATION PHASE
// -----------------

CsrGraph aggregate(const CsrGraph& g, std::span<const VertexId> membership,
                   std::span<ScanAccumulator> accumulators, int threads, int chunk_size) {
  if (membership.size() != g.order()) throw std::invalid_argument("aggregate: membership size mismatch");
  if (threads < 1 || chunk_size < 1) throw std::invalid_argument("aggregate: bad thread count or chunk size");
  VertexId communities = 0;
  for (auto c : membership) communities = std::max<VertexId>(communities, c + 1);
  if (accumulators.size() < std::size_t(threads)) throw std::invalid_argument("aggregate: need one accumulator per thread");
  for (int t = 0; t < threads; ++t)
    if (accumulators[t].size() < communities) throw std::invalid_argument("aggregate: accumulator too small");
  AggregationBuffers buf;
  CsrParts out;
  if (threads > 1) aggregate_impl<true>(g, membership.data(), communities, buf, accumulators, threads, chunk_size, out);
  else aggregate_impl<false>(g, membership.data(), communities, buf, accumulators, 1, chunk_size, out);
  return CsrGraph(std::move(out));
}




// LOUVAIN
// -------

LouvainResult louvain(const CsrGraph& g, const LouvainParams& p) {
  p.validate();
  auto t_start = Clock::now();
  const VertexId n = g.order();
  const int threads = p.thread_count;
  LouvainResult res;
  res.membership.resize(n);
  std::iota(res.membership.begin(), res.membership.end(), VertexId(0));
  if (n == 0 || !(g.total_weight() > 0)) {
    res.modularity = std::numeric_limits<double>::quiet_NaN();
    res.modularity_defined = false;
    res.total_seconds = res.other_seconds = seconds_since(t_start);
    return res;
  }

  std::vector<ScanAccumulator> accs(threads);
  std::vector<Weight> k(n), sigma(n);
  Membership memb(n);
  PruneFlags flags(n);
  AggregationBuffers buf;
  CsrGraph current;   // super-vertex graph of the latest pass
  CsrParts spare;     // storage for the next one
  const CsrGraph* cur = &g;
  double tolerance = p.initial_tolerance;

  #pragma omp parallel for schedule(static, 1) num_threads(threads) if(threads > 1)
  for (int t = 0; t < threads; ++t) accs[t].resize(n);

  for (int pass = 0; pass < p.max_passes; ++pass) {
    PassStats st;
    auto t0 = Clock::now();
    const VertexId vn = cur->order();
    auto kp = std::span(k).first(vn);
    auto sp = std::span(sigma).first(vn);
    auto mp = std::span(memb).first(vn);
    weighted_degrees(*cur, kp, threads);
    std::copy(kp.begin(), kp.end(), sp.begin());
    std::iota(mp.begin(), mp.end(), VertexId(0));
    if (p.vertex_pruning) flags.reset(vn);
    for (auto& acc : accs) acc.resize(vn);
    st.other_seconds += seconds_since(t0);

    auto t1 = Clock::now();
    st.iterations = local_move(*cur, mp, kp, sp, tolerance, p, flags, accs);
    st.local_moving_seconds = seconds_since(t1);

    auto t2 = Clock::now();
    st.vertex_count = vn;
    st.tolerance = tolerance;
    st.community_count = renumber(mp, threads);
    lookup_dendrogram_in_place(res.membership, mp, threads);
    bool converged = st.iterations <= 1 ||
                     double(st.community_count) / vn >= p.aggregation_tolerance ||
                     pass + 1 == p.max_passes;
    if (p.track_pass_modularity || converged) {
      // Q of the top-level membership equals Q of this pass's membership on the current graph.
      st.modularity = modularity(community_weights(*cur, mp), cur->total_weight());
      res.modularity = st.modularity;
    } else {
      st.modularity = std::numeric_limits<double>::quiet_NaN();
    }
    st.other_seconds += seconds_since(t2);
    if (converged) {
      res.pass_stats.push_back(st);
      break;
    }

    auto t3 = Clock::now();
    for (auto& acc : accs) acc.resize(st.community_count);
    if (threads > 1)
      aggregate_impl<true>(*cur, mp.data(), st.community_count, buf, accs, threads, p.chunk_size, spare);
    else
      aggregate_impl<false>(*cur, mp.data(), st.community_count, buf, accs, 1, p.chunk_size, spare);
    CsrGraph next(std::move(spare));
    spare = std::move(current).release();
    current = std::move(next);
    cur = &current;
    st.aggregation_seconds = seconds_since(t3);
    res.pass_stats.push_back(st);
    tolerance /= p.tolerance_drop;
  }

  res.passes = static_cast<int>(res.pass_stats.size());
  for (const auto& st : res.pass_stats) {
    res.local_moving_seconds += st.local_moving_seconds;
    res.aggregation_seconds += st.aggregation_seconds;
  }
  res.total_seconds = seconds_since(t_start);
  res.other_seconds = std::max(0.0, res.total_seconds - res.local_moving_seconds - res.aggregation_seconds);
  return res;
}

}  // namespace gve
