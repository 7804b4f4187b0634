#include "infmax/cascade.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "infmax/rng.hpp"

namespace infmax {

std::string SeedAllocation::str() const {
  std::string s;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) s += "|";
    s += std::to_string(counts[i]);
  }
  return s;
}

CascadeResult run_r_complex(const GraphSample& g, const std::vector<Vertex>& seeds, int r,
                            double theta) {
  if (r < 1) throw std::invalid_argument("run_r_complex: r must be >= 1");
  const Vertex n = g.n();
  std::vector<bool> infected(n, false);
  std::vector<std::uint32_t> hot(n, 0);  // infected-neighbor counters
  std::vector<Vertex> frontier;
  frontier.reserve(seeds.size());
  for (Vertex s : seeds) {
    if (s >= n) throw std::invalid_argument("run_r_complex: seed out of range");
    if (!infected[s]) {
      infected[s] = true;
      frontier.push_back(s);
    }
  }
  CascadeResult res;
  res.infected_total = frontier.size();
  std::vector<Vertex> next;
  while (!frontier.empty()) {
    next.clear();
    for (Vertex u : frontier) {
      for (Vertex v : g.neighbors(u)) {
        if (infected[v]) continue;
        if (++hot[v] == static_cast<std::uint32_t>(r)) {
          infected[v] = true;
          next.push_back(v);
        }
      }
    }
    if (!next.empty()) ++res.rounds;
    res.infected_total += next.size();
    frontier.swap(next);
  }
  const auto& spans = g.leaf_spans();
  res.infected_per_leaf.assign(spans.size(), 0);
  for (std::size_t li = 0; li < spans.size(); ++li) {
    for (Vertex u = spans[li].begin; u < spans[li].end; ++u) {
      if (infected[u]) ++res.infected_per_leaf[li];
    }
  }
  res.activated.assign(spans.size(), false);
  for (std::size_t li = 0; li < spans.size(); ++li) {
    double frac = spans[li].size() == 0
                      ? 0.0
                      : static_cast<double>(res.infected_per_leaf[li]) / spans[li].size();
    res.activated[li] = frac >= theta;
  }
  res.infected = std::move(infected);
  return res;
}

std::vector<Vertex> place_seeds(const GraphSample& g, const SeedAllocation& alloc) {
  const auto& spans = g.leaf_spans();
  if (alloc.counts.size() != spans.size())
    throw std::invalid_argument("place_seeds: allocation has " +
                                std::to_string(alloc.counts.size()) + " entries for " +
                                std::to_string(spans.size()) + " leaves");
  std::vector<Vertex> seeds;
  seeds.reserve(alloc.total());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (alloc.counts[i] > spans[i].size())
      throw std::invalid_argument("place_seeds: leaf '" + spans[i].leaf_id + "' has " +
                                  std::to_string(spans[i].size()) + " vertices, allocation asks " +
                                  std::to_string(alloc.counts[i]));
    for (std::uint32_t k = 0; k < alloc.counts[i]; ++k)
      seeds.push_back(spans[i].begin + k);
  }
  return seeds;
}

namespace {

struct UnionFind {
  std::vector<Vertex> parent;
  std::vector<std::uint32_t> size;

  explicit UnionFind(Vertex n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  Vertex find(Vertex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

std::uint64_t run_independent_cascade(const GraphSample& g, const std::vector<Vertex>& seeds,
                                      double keep_prob, std::uint64_t seed) {
  if (keep_prob < 0.0 || keep_prob > 1.0)
    throw std::invalid_argument("run_independent_cascade: keep_prob outside [0,1]");
  UnionFind uf(g.n());
  if (keep_prob > 0.0) {
    Rng rng = substream(seed, stream_tag::kCascadeIc);
    for (Vertex u = 0; u < g.n(); ++u) {
      for (Vertex v : g.neighbors(u)) {
        if (u >= v) continue;  // each undirected edge once
        if (keep_prob >= 1.0 || rng.next_double() < keep_prob) uf.unite(u, v);
      }
    }
  }
  std::vector<bool> counted(g.n(), false);
  std::uint64_t infected = 0;
  for (Vertex s : seeds) {
    Vertex root = uf.find(s);
    if (!counted[root]) {
      counted[root] = true;
      infected += uf.size[root];
    }
  }
  return infected;
}

}  // namespace infmax
