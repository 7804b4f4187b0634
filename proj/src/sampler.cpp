#include "infmax/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "infmax/parallel.hpp"
#include "infmax/rng.hpp"

namespace infmax {

GraphSample::GraphSample(Vertex n, std::uint64_t seed, std::vector<LeafSpan> spans,
                         std::vector<std::pair<Vertex, Vertex>>&& edges)
    : n_(n), seed_(seed), spans_(std::move(spans)) {
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [u, v] : edges) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  neighbors_.resize(offsets_.back());
  std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    neighbors_[cursor[u]++] = v;
    neighbors_[cursor[v]++] = u;
  }
  edges.clear();
  edges.shrink_to_fit();
}

int GraphSample::leaf_of(Vertex u) const {
  // spans are contiguous and ordered
  std::size_t lo = 0, hi = spans_.size();
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (u < spans_[mid].begin)
      hi = mid;
    else
      lo = mid;
  }
  return static_cast<int>(lo);
}

std::vector<Vertex> leaf_vertex_counts(const HierarchyTree& tree, Vertex n) {
  const auto& leaves = tree.leaves();
  std::vector<Vertex> counts(leaves.size());
  std::vector<double> remainders(leaves.size());
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    double exact = tree.node(leaves[i]).v * static_cast<double>(n);
    counts[i] = static_cast<Vertex>(exact);
    remainders[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::uint64_t leftover = n - assigned;
  std::vector<std::size_t> order(leaves.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::uint64_t i = 0; i < leftover; ++i) ++counts[order[i % order.size()]];
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0)
      throw std::invalid_argument("sample_graph: n too small, leaf '" +
                                  tree.node(tree.leaves()[i]).id + "' would be empty");
  }
  return counts;
}

namespace {

using EdgeVec = std::vector<std::pair<Vertex, Vertex>>;

// Samples edges among the i<j pairs of [lo,hi) with probability p each.
// Sparse path draws the edge count first, then distinct pairs by rejection;
// above p = 0.1 rejection degenerates and a full Bernoulli sweep is cheaper.
void sample_within_block(Rng& rng, Vertex lo, Vertex hi, double p, EdgeVec& out) {
  const std::uint64_t size = hi - lo;
  if (size < 2 || p <= 0.0) return;
  const std::uint64_t pairs = size * (size - 1) / 2;
  if (p > 0.1) {
    for (Vertex u = lo; u + 1 < hi; ++u) {
      for (Vertex v = u + 1; v < hi; ++v) {
        if (rng.next_double() < p) out.emplace_back(u, v);
      }
    }
    return;
  }
  const std::uint64_t m = binomial(rng, pairs, p);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  while (seen.size() < m) {
    Vertex u = lo + static_cast<Vertex>(rng.next_below(size));
    Vertex v = lo + static_cast<Vertex>(rng.next_below(size));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    std::uint64_t key = static_cast<std::uint64_t>(u) << 32 | v;
    if (seen.insert(key).second) out.emplace_back(u, v);
  }
}

void sample_cross_block(Rng& rng, Vertex a_lo, Vertex a_hi, Vertex b_lo, Vertex b_hi, double p,
                        EdgeVec& out) {
  const std::uint64_t rows = a_hi - a_lo;
  const std::uint64_t cols = b_hi - b_lo;
  if (rows == 0 || cols == 0 || p <= 0.0) return;
  const std::uint64_t pairs = rows * cols;
  if (p > 0.1) {
    for (Vertex u = a_lo; u < a_hi; ++u) {
      for (Vertex v = b_lo; v < b_hi; ++v) {
        if (rng.next_double() < p) out.emplace_back(u, v);
      }
    }
    return;
  }
  const std::uint64_t m = binomial(rng, pairs, p);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  while (seen.size() < m) {
    Vertex u = a_lo + static_cast<Vertex>(rng.next_below(rows));
    Vertex v = b_lo + static_cast<Vertex>(rng.next_below(cols));
    std::uint64_t key = static_cast<std::uint64_t>(u) << 32 | v;
    if (seen.insert(key).second) out.emplace_back(u, v);
  }
}

}  // namespace

GraphSample sample_graph(const HierarchyTree& tree, Vertex n, std::uint64_t seed, int threads) {
  auto violations = validate(tree);
  if (!structurally_valid(violations))
    throw std::invalid_argument("sample_graph: tree fails validation ('" +
                                violations.front().node_id + "': " +
                                std::string(to_string(violations.front().kind)) + ")");
  const auto& leaves = tree.leaves();
  auto counts = leaf_vertex_counts(tree, n);
  std::vector<LeafSpan> spans(leaves.size());
  Vertex cursor = 0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    spans[i] = {tree.node(leaves[i]).id, cursor, cursor + counts[i]};
    cursor += counts[i];
  }

  const double dn = static_cast<double>(n);
  struct PairJob {
    std::size_t i, j;
    double p;
  };
  std::vector<PairJob> jobs;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i; j < leaves.size(); ++j) {
      double p = lca_weight(tree, leaves[i], leaves[j]).eval(dn);
      if (p > 0.0) jobs.push_back({i, j, p});
    }
  }

  std::vector<EdgeVec> buffers(jobs.size());
  parallel_chunks(jobs.size(), 1, threads, [&](std::uint64_t job, std::uint64_t, std::uint64_t) {
    const auto& [i, j, p] = jobs[job];
    Rng rng = substream(seed, stream_tag::kSampler, i, j);
    if (i == j)
      sample_within_block(rng, spans[i].begin, spans[i].end, p, buffers[job]);
    else
      sample_cross_block(rng, spans[i].begin, spans[i].end, spans[j].begin, spans[j].end, p,
                         buffers[job]);
  });

  EdgeVec edges;
  std::uint64_t total = 0;
  for (const auto& b : buffers) total += b.size();
  edges.reserve(total);
  for (auto& b : buffers) {
    edges.insert(edges.end(), b.begin(), b.end());
    b.clear();
    b.shrink_to_fit();
  }
  return GraphSample(n, seed, std::move(spans), std::move(edges));
}

GraphSample sample_gnp(Vertex n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_gnp: p outside [0,1]");
  std::vector<LeafSpan> spans{{"gnp", 0, n}};
  EdgeVec edges;
  Rng rng = substream(seed, stream_tag::kSampler, 0, 0);
  sample_within_block(rng, 0, n, p, edges);
  return GraphSample(n, seed, std::move(spans), std::move(edges));
}

void write_edge_list(const GraphSample& g, std::ostream& out) {
  out << "# n=" << g.n() << " seed=" << g.seed() << "\n";
  for (Vertex u = 0; u < g.n(); ++u) {
    for (Vertex v : g.neighbors(u)) {
      if (u < v) out << u << " " << v << "\n";
    }
  }
}

}  // namespace infmax
