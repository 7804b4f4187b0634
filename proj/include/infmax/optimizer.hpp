#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infmax/cascade.hpp"
#include "infmax/model.hpp"

namespace infmax {

struct WalkEstimateConfig {
  std::uint64_t trials = 200000;
  int max_iter = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct SubtreeEntry {
  NodeId root = kNoNode;
  NodeId star_leaf = kNoNode;      // densest leaf: all seeds of the subtree go here
  Criticality star_class = Criticality::Subcritical;
  double activated_fraction = 0.0;  // F: total v of critical/supercritical/vulnerable leaves
  double c_star = 0.0;              // density coefficient of the densest leaf
};

enum class HProvenance { Theoretical, MonteCarlo };

// Per-subtree limit values h[i][k]: the infected fraction contributed by
// maximal dense subtree i when k seeds sit on its densest leaf. Nondecreasing
// in k by construction (hit estimates for all k share trials).
struct HValueTable {
  int K = 0;
  std::vector<SubtreeEntry> subtrees;
  std::vector<std::vector<double>> h;  // h[i][k], k = 0..K
  HProvenance provenance = HProvenance::Theoretical;
};

// h for one subtree and seed count: 0 when k < r or the densest leaf is
// subcritical; F when it is supercritical; (1 - zeta_hat(k, c*)) * F when
// critical, with zeta_hat the walk module's hit estimate at c* = density
// coefficient of the densest leaf.
double h_theoretical(const HierarchyTree& tree, NodeId subtree_root, int k,
                     const WalkEstimateConfig& cfg);

HValueTable build_h_table(const HierarchyTree& tree, int K, const WalkEstimateConfig& cfg);

enum class AllocationMethod { Dp, BruteForce, MonteCarlo };
const char* to_string(AllocationMethod m);

struct AllocationResult {
  SeedAllocation alloc;          // per tree leaf, preorder
  double value = 0.0;
  double uncertainty = 0.0;      // standard error; 0 for the exact DP
  AllocationMethod method = AllocationMethod::Dp;
};

struct DpTrace {
  std::vector<std::vector<double>> best;  // best[i][k] over the first i subtrees
};

// Exact DP over the maximal dense subtrees; within a subtree all its seeds
// go to the densest leaf. Ties pick the smallest per-subtree count, then the
// smallest subtree index.
AllocationResult dp_allocate(const HierarchyTree& tree, int K, const HValueTable& table,
                             DpTrace* trace = nullptr);

struct SigmaEstimate {
  SeedAllocation alloc;
  double mean = 0.0;  // infected fraction
  double se = 0.0;
  std::vector<double> leaf_activation_freq;
  std::uint64_t trials = 0;
};

// Finite-n Monte Carlo estimate of the expected infected fraction under an
// allocation: sample graph, place seeds, run the contagion.
SigmaEstimate estimate_sigma(const HierarchyTree& tree, Vertex n, const SeedAllocation& alloc,
                             std::uint64_t trials, double theta, std::uint64_t seed,
                             int threads = 1);

// Evaluates every composition of K seeds over the leaves on common graph
// samples (paired comparisons), ranked by estimated value. Throws when the
// composition count exceeds cap.
std::vector<SigmaEstimate> brute_force_allocate(const HierarchyTree& tree, int K, Vertex n,
                                                std::uint64_t trials_per_alloc, double theta,
                                                std::uint64_t seed, std::uint64_t cap = 10000,
                                                int threads = 1);

std::vector<SeedAllocation> enumerate_compositions(int K, int leaves, std::uint64_t cap);

struct SubmodularReport {
  std::uint64_t trials = 0;
  Vertex n = 0;
  int K = 0;
  double keep_prob = 0.0;
  double within_leaf_mean_degree = 0.0;
  double spread_mean = 0.0, spread_se = 0.0;  // one seed per leaf
  double conc_mean = 0.0, conc_se = 0.0;      // all K seeds in one leaf
};

// Two-level tree with K unit-weight leaves and root weight n^-(1+1/(2r));
// independent cascade with keep_prob = n^-(1-1/(4r)) unless overridden.
// Spreading one seed per leaf beats concentrating them, the reverse of the
// r-complex behavior. The edge distribution of "sample then percolate" is
// the pairwise-independent product, so the percolated graph is sampled
// directly from the composed power laws.
SubmodularReport submodular_demo(int K, int r, Vertex n, std::uint64_t trials,
                                 std::uint64_t seed, std::optional<double> keep_prob_override,
                                 int threads = 1);

}  // namespace infmax
