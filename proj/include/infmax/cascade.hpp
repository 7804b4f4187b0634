#pragma once

#include <cstdint>
#include <vector>

#include "infmax/sampler.hpp"

namespace infmax {

// Seed counts per leaf, in leaf-span order; total() is the budget K.
struct SeedAllocation {
  std::vector<std::uint32_t> counts;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  std::string str() const;  // "k1|k2|..."
};

struct CascadeResult {
  std::uint64_t infected_total = 0;
  std::vector<std::uint64_t> infected_per_leaf;  // by leaf-span index
  int rounds = 0;
  std::vector<bool> activated;  // infected fraction of the leaf >= theta
  std::vector<bool> infected;   // per-vertex flags (bit-packed)
};

// Deterministic r-complex contagion closure: every infected non-seed vertex
// has >= r infected neighbors and no uninfected vertex does. Queue-based,
// O(V + E). Seeds count as infected for neighbor-counting regardless of
// their own neighborhood. theta is the finite-size activation threshold.
CascadeResult run_r_complex(const GraphSample& g, const std::vector<Vertex>& seeds, int r,
                            double theta = 0.99);

// First counts[t] vertex indices of each leaf; throws if a count exceeds
// the leaf size. Within-leaf vertices are exchangeable, so the choice of
// which vertices carry the seeds is immaterial.
std::vector<Vertex> place_seeds(const GraphSample& g, const SeedAllocation& alloc);

// Independent cascade with one shared transmission probability: keep each
// edge with keep_prob, then infect every component that contains a seed.
std::uint64_t run_independent_cascade(const GraphSample& g, const std::vector<Vertex>& seeds,
                                      double keep_prob, std::uint64_t seed);

}  // namespace infmax
