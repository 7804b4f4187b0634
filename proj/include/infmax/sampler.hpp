#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "infmax/model.hpp"

namespace infmax {

using Vertex = std::uint32_t;

struct LeafSpan {
  std::string leaf_id;
  Vertex begin = 0;
  Vertex end = 0;  // exclusive

  Vertex size() const { return end - begin; }
};

// A realized sparse undirected graph: CSR adjacency, no self-loops, no
// duplicates, symmetric. Vertices are grouped contiguously by leaf, in the
// tree's preorder leaf order. Immutable after construction.
class GraphSample {
 public:
  GraphSample(Vertex n, std::uint64_t seed, std::vector<LeafSpan> spans,
              std::vector<std::pair<Vertex, Vertex>>&& edges);

  Vertex n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t edge_count() const { return neighbors_.size() / 2; }
  std::span<const Vertex> neighbors(Vertex u) const {
    return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
  }
  std::uint64_t degree(Vertex u) const { return offsets_[u + 1] - offsets_[u]; }
  const std::vector<LeafSpan>& leaf_spans() const { return spans_; }
  int leaf_of(Vertex u) const;

 private:
  Vertex n_;
  std::uint64_t seed_;
  std::vector<LeafSpan> spans_;
  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> neighbors_;
};

// Per-leaf vertex counts at size n: largest-remainder rounding of v(t)*n,
// ties broken by leaf order. Each count is within 1 of v(t)*n; throws if a
// leaf would receive no vertex.
std::vector<Vertex> leaf_vertex_counts(const HierarchyTree& tree, Vertex n);

// Draws a graph from the blockmodel at size n. Every vertex pair is present
// independently with probability lca_weight evaluated at n; deterministic in
// (tree, n, seed) regardless of threads via per-block-pair substreams.
GraphSample sample_graph(const HierarchyTree& tree, Vertex n, std::uint64_t seed,
                         int threads = 1);

// Erdos-Renyi special case (single leaf named "gnp").
GraphSample sample_gnp(Vertex n, double p, std::uint64_t seed);

// Edge-list dump: header "# n=<n> seed=<seed>", then "u v" per line.
void write_edge_list(const GraphSample& g, std::ostream& out);

}  // namespace infmax
