#include "infmax/optimizer.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "infmax/parallel.hpp"
#include "infmax/rng.hpp"
#include "infmax/walk.hpp"

namespace infmax {

const char* to_string(AllocationMethod m) {
  switch (m) {
    case AllocationMethod::Dp: return "dp";
    case AllocationMethod::BruteForce: return "brute-force";
    case AllocationMethod::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

namespace {

SubtreeEntry make_entry(const HierarchyTree& tree, NodeId subtree_root) {
  SubtreeEntry e;
  e.root = subtree_root;
  e.star_leaf = densest_leaf(tree, subtree_root);
  e.star_class = classify(tree, e.star_leaf);
  e.c_star = density(tree, e.star_leaf).coeff;
  e.activated_fraction = 0.0;
  for (NodeId leaf : tree.leaves_under(subtree_root)) {
    Criticality cls = classify(tree, leaf);
    bool counted = cls != Criticality::Subcritical ||
                   is_vulnerable(tree, leaf, subtree_root);
    if (counted) e.activated_fraction += tree.node(leaf).v;
  }
  return e;
}

// activation probability of the densest leaf given k seeds on it
double activation_probability(const HierarchyTree& tree, const SubtreeEntry& e, int k,
                              const WalkEstimateConfig& cfg) {
  if (k < tree.r()) return 0.0;
  switch (e.star_class) {
    case Criticality::Subcritical: return 0.0;
    case Criticality::Supercritical: return 1.0;
    case Criticality::Critical: break;
  }
  WalkParams p;
  p.k = k;
  p.c = e.c_star;
  p.r = tree.r();
  p.max_iter = cfg.max_iter;
  HitEstimate est = estimate_hit_prob(
      p, cfg.trials,
      substream_key(cfg.seed, stream_tag::kHTable, static_cast<std::uint64_t>(e.root),
                    static_cast<std::uint64_t>(k)),
      cfg.threads);
  return 1.0 - est.p_hat;
}

}  // namespace

double h_theoretical(const HierarchyTree& tree, NodeId subtree_root, int k,
                     const WalkEstimateConfig& cfg) {
  if (k < 0) throw std::invalid_argument("h_theoretical: k must be >= 0");
  SubtreeEntry e = make_entry(tree, subtree_root);
  return activation_probability(tree, e, k, cfg) * e.activated_fraction;
}

HValueTable build_h_table(const HierarchyTree& tree, int K, const WalkEstimateConfig& cfg) {
  if (K < 0) throw std::invalid_argument("build_h_table: K must be >= 0");
  HValueTable table;
  table.K = K;
  table.provenance = HProvenance::Theoretical;
  for (NodeId root : maximal_dense_subtrees(tree)) table.subtrees.push_back(make_entry(tree, root));
  const int r = tree.r();
  for (std::size_t i = 0; i < table.subtrees.size(); ++i) {
    const SubtreeEntry& e = table.subtrees[i];
    std::vector<double> h(static_cast<std::size_t>(K) + 1, 0.0);
    if (e.star_class == Criticality::Supercritical) {
      for (int k = r; k <= K; ++k) h[static_cast<std::size_t>(k)] = e.activated_fraction;
    } else if (e.star_class == Criticality::Critical && K >= r) {
      // one common-trial profile per subtree keeps h monotone in k exactly
      std::vector<double> q = hit_prob_profile(
          e.c_star, r, r, K, cfg.max_iter, cfg.trials,
          substream_key(cfg.seed, stream_tag::kHTable, static_cast<std::uint64_t>(e.root)),
          cfg.threads);
      for (int k = r; k <= K; ++k)
        h[static_cast<std::size_t>(k)] =
            (1.0 - q[static_cast<std::size_t>(k - r)]) * e.activated_fraction;
    }
    for (int k = 1; k <= K; ++k) {
      if (h[static_cast<std::size_t>(k)] < h[static_cast<std::size_t>(k - 1)])
        throw std::logic_error("build_h_table: h not monotone");  // cannot happen by construction
    }
    table.h.push_back(std::move(h));
  }
  return table;
}

AllocationResult dp_allocate(const HierarchyTree& tree, int K, const HValueTable& table,
                             DpTrace* trace) {
  if (K < 0) throw std::invalid_argument("dp_allocate: K must be >= 0");
  const std::size_t m = table.subtrees.size();
  if (table.h.size() != m) throw std::invalid_argument("dp_allocate: table rows != subtrees");
  for (const auto& row : table.h) {
    if (static_cast<int>(row.size()) < K + 1)
      throw std::invalid_argument("dp_allocate: table columns < K+1");
  }
  // best[i][k]: value of allocating exactly k seeds to the first i subtrees;
  // k > 0 seeds cannot land on zero subtrees, hence the -inf base row
  const double kUnreachable = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best(
      m + 1, std::vector<double>(static_cast<std::size_t>(K) + 1, kUnreachable));
  best[0][0] = 0.0;
  std::vector<std::vector<int>> choice(m + 1, std::vector<int>(static_cast<std::size_t>(K) + 1, 0));
  for (std::size_t i = 1; i <= m; ++i) {
    for (int k = 0; k <= K; ++k) {
      double bv = kUnreachable;
      int bk = 0;
      for (int ki = 0; ki <= k; ++ki) {  // ascending: ties keep the smallest ki
        double prev = best[i - 1][static_cast<std::size_t>(k - ki)];
        if (prev == kUnreachable) continue;
        double v = prev + table.h[i - 1][static_cast<std::size_t>(ki)];
        if (v > bv) {
          bv = v;
          bk = ki;
        }
      }
      best[i][static_cast<std::size_t>(k)] = bv;
      choice[i][static_cast<std::size_t>(k)] = bk;
    }
  }
  AllocationResult res;
  res.method = AllocationMethod::Dp;
  res.value = m == 0 ? 0.0 : best[m][static_cast<std::size_t>(K)];
  res.alloc.counts.assign(tree.leaves().size(), 0);
  int k = K;
  for (std::size_t i = m; i >= 1; --i) {
    int ki = choice[i][static_cast<std::size_t>(k)];
    if (ki > 0) {
      int leaf = tree.leaf_index(table.subtrees[i - 1].star_leaf);
      res.alloc.counts[static_cast<std::size_t>(leaf)] += static_cast<std::uint32_t>(ki);
    }
    k -= ki;
  }
  if (trace) trace->best = std::move(best);
  return res;
}

SigmaEstimate estimate_sigma(const HierarchyTree& tree, Vertex n, const SeedAllocation& alloc,
                             std::uint64_t trials, double theta, std::uint64_t seed,
                             int threads) {
  if (trials == 0) throw std::invalid_argument("estimate_sigma: trials must be >= 1");
  if (alloc.counts.size() != tree.leaves().size())
    throw std::invalid_argument("estimate_sigma: allocation entries != leaves");
  {
    auto counts = leaf_vertex_counts(tree, n);  // also throws when infeasible at n
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (alloc.counts[i] > counts[i])
        throw std::invalid_argument("estimate_sigma: allocation exceeds leaf size at n");
    }
  }
  const std::size_t leaves = tree.leaves().size();
  constexpr std::uint64_t kChunk = 16;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<double> sum(chunks, 0.0), sumsq(chunks, 0.0);
  std::vector<std::vector<std::uint64_t>> act(chunks);
  parallel_chunks(trials, kChunk, threads,
                  [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                    act[chunk].assign(leaves, 0);
                    for (std::uint64_t trial = begin; trial < end; ++trial) {
                      GraphSample g =
                          sample_graph(tree, n, substream_key(seed, stream_tag::kSigma, trial));
                      auto seeds = place_seeds(g, alloc);
                      CascadeResult res = run_r_complex(g, seeds, tree.r(), theta);
                      double frac = static_cast<double>(res.infected_total) / g.n();
                      sum[chunk] += frac;
                      sumsq[chunk] += frac * frac;
                      for (std::size_t li = 0; li < leaves; ++li)
                        if (res.activated[li]) ++act[chunk][li];
                    }
                  });
  SigmaEstimate est;
  est.alloc = alloc;
  est.trials = trials;
  double s = 0.0, s2 = 0.0;
  std::vector<std::uint64_t> activated(leaves, 0);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    s += sum[c];
    s2 += sumsq[c];
    for (std::size_t li = 0; li < leaves; ++li) activated[li] += act[c][li];
  }
  const double t = static_cast<double>(trials);
  est.mean = s / t;
  double var = (s2 - s * s / t) / (trials > 1 ? (t - 1.0) : 1.0);
  if (var < 0.0) var = 0.0;
  est.se = trials > 1 ? std::sqrt(var / t) : 0.0;
  est.leaf_activation_freq.resize(leaves);
  for (std::size_t li = 0; li < leaves; ++li)
    est.leaf_activation_freq[li] = static_cast<double>(activated[li]) / t;
  return est;
}

std::vector<SeedAllocation> enumerate_compositions(int K, int leaves, std::uint64_t cap) {
  if (leaves <= 0) throw std::invalid_argument("enumerate_compositions: no leaves");
  std::vector<SeedAllocation> out;
  SeedAllocation cur;
  cur.counts.assign(static_cast<std::size_t>(leaves), 0);
  // lexicographic enumeration, first leaf varies slowest
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (out.size() > cap)
      throw std::invalid_argument("enumerate_compositions: composition count exceeds cap");
    if (pos == leaves - 1) {
      cur.counts[static_cast<std::size_t>(pos)] = static_cast<std::uint32_t>(left);
      out.push_back(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur.counts[static_cast<std::size_t>(pos)] = static_cast<std::uint32_t>(k);
      rec(pos + 1, left - k);
    }
  };
  rec(0, K);
  if (out.size() > cap)
    throw std::invalid_argument("enumerate_compositions: composition count exceeds cap");
  return out;
}

std::vector<SigmaEstimate> brute_force_allocate(const HierarchyTree& tree, int K, Vertex n,
                                                std::uint64_t trials_per_alloc, double theta,
                                                std::uint64_t seed, std::uint64_t cap,
                                                int threads) {
  auto allocs = enumerate_compositions(K, static_cast<int>(tree.leaves().size()), cap);
  const std::size_t na = allocs.size();
  const std::size_t leaves = tree.leaves().size();
  constexpr std::uint64_t kChunk = 8;
  const std::uint64_t chunks = (trials_per_alloc + kChunk - 1) / kChunk;
  struct Acc {
    std::vector<double> sum, sumsq;
    std::vector<std::vector<std::uint64_t>> act;
  };
  std::vector<Acc> acc(chunks);
  parallel_chunks(
      trials_per_alloc, kChunk, threads,
      [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        Acc& a = acc[chunk];
        a.sum.assign(na, 0.0);
        a.sumsq.assign(na, 0.0);
        a.act.assign(na, std::vector<std::uint64_t>(leaves, 0));
        for (std::uint64_t trial = begin; trial < end; ++trial) {
          // one shared graph per trial: paired comparisons across allocations
          GraphSample g = sample_graph(tree, n, substream_key(seed, stream_tag::kSigma, trial));
          for (std::size_t ai = 0; ai < na; ++ai) {
            auto seeds = place_seeds(g, allocs[ai]);
            CascadeResult res = run_r_complex(g, seeds, tree.r(), theta);
            double frac = static_cast<double>(res.infected_total) / g.n();
            a.sum[ai] += frac;
            a.sumsq[ai] += frac * frac;
            for (std::size_t li = 0; li < leaves; ++li)
              if (res.activated[li]) ++a.act[ai][li];
          }
        }
      });
  std::vector<SigmaEstimate> out(na);
  const double t = static_cast<double>(trials_per_alloc);
  for (std::size_t ai = 0; ai < na; ++ai) {
    double s = 0.0, s2 = 0.0;
    std::vector<std::uint64_t> activated(leaves, 0);
    for (std::uint64_t c = 0; c < chunks; ++c) {
      s += acc[c].sum[ai];
      s2 += acc[c].sumsq[ai];
      for (std::size_t li = 0; li < leaves; ++li) activated[li] += acc[c].act[ai][li];
    }
    out[ai].alloc = allocs[ai];
    out[ai].trials = trials_per_alloc;
    out[ai].mean = s / t;
    double var = (s2 - s * s / t) / (trials_per_alloc > 1 ? (t - 1.0) : 1.0);
    if (var < 0.0) var = 0.0;
    out[ai].se = trials_per_alloc > 1 ? std::sqrt(var / t) : 0.0;
    out[ai].leaf_activation_freq.resize(leaves);
    for (std::size_t li = 0; li < leaves; ++li)
      out[ai].leaf_activation_freq[li] = static_cast<double>(activated[li]) / t;
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SigmaEstimate& a, const SigmaEstimate& b) { return a.mean > b.mean; });
  return out;
}

SubmodularReport submodular_demo(int K, int r, Vertex n, std::uint64_t trials,
                                 std::uint64_t seed, std::optional<double> keep_prob_override,
                                 int threads) {
  if (K < 1) throw std::invalid_argument("submodular_demo: K must be >= 1");
  if (r < 2) throw std::invalid_argument("submodular_demo: r must be >= 2");
  if (trials == 0) throw std::invalid_argument("submodular_demo: trials must be >= 1");
  const double dn = static_cast<double>(n);
  const Rational keep_exp{4 * static_cast<std::int64_t>(r) - 1, 4 * static_cast<std::int64_t>(r)};
  const double keep_prob = keep_prob_override.value_or(std::pow(dn, -keep_exp.value()));

  SubmodularReport rep;
  rep.trials = trials;
  rep.n = n;
  rep.K = K;
  rep.keep_prob = keep_prob;
  rep.within_leaf_mean_degree = (dn / K - 1.0) * keep_prob;

  if (keep_prob == 0.0) {  // no edge survives; both allocations infect the seeds only
    rep.spread_mean = rep.conc_mean = static_cast<double>(K);
    return rep;
  }

  // Tree of the construction: root weight n^-(1+1/(2r)), K leaves of weight 1.
  // Composing edge presence with the cascade's keep probability multiplies
  // the power laws, which is what actually gets sampled.
  std::vector<TreeNode> nodes(static_cast<std::size_t>(K) + 1);
  nodes[0].id = "root";
  nodes[0].weight = {keep_prob, Rational{2 * r + 1, 2 * r}};
  for (int i = 1; i <= K; ++i) {
    auto& leaf = nodes[static_cast<std::size_t>(i)];
    leaf.id = "leaf_" + std::to_string(i - 1);
    leaf.weight = {keep_prob, Rational{0, 1}};
    leaf.v = 1.0 / K;
    nodes[0].children.push_back(i);
  }
  HierarchyTree composed_tree(nodes, r);

  SeedAllocation spread, conc;
  spread.counts.assign(static_cast<std::size_t>(K), 1);
  conc.counts.assign(static_cast<std::size_t>(K), 0);
  conc.counts[0] = static_cast<std::uint32_t>(K);

  constexpr std::uint64_t kChunk = 4;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<double> ssum(chunks, 0.0), ssq(chunks, 0.0), csum(chunks, 0.0), csq(chunks, 0.0);
  parallel_chunks(trials, kChunk, threads,
                  [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                    for (std::uint64_t trial = begin; trial < end; ++trial) {
                      GraphSample g = sample_graph(
                          composed_tree, n, substream_key(seed, stream_tag::kSigma, trial));
                      double sv = static_cast<double>(run_independent_cascade(
                          g, place_seeds(g, spread), 1.0, 0));
                      double cv = static_cast<double>(run_independent_cascade(
                          g, place_seeds(g, conc), 1.0, 0));
                      ssum[chunk] += sv;
                      ssq[chunk] += sv * sv;
                      csum[chunk] += cv;
                      csq[chunk] += cv * cv;
                    }
                  });
  double ss = 0.0, ss2 = 0.0, cs = 0.0, cs2 = 0.0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    ss += ssum[c];
    ss2 += ssq[c];
    cs += csum[c];
    cs2 += csq[c];
  }
  const double t = static_cast<double>(trials);
  rep.spread_mean = ss / t;
  rep.conc_mean = cs / t;
  if (trials > 1) {
    rep.spread_se = std::sqrt(std::max(0.0, ss2 - ss * ss / t) / (t - 1.0) / t);
    rep.conc_se = std::sqrt(std::max(0.0, cs2 - cs * cs / t) / (t - 1.0) / t);
  }
  return rep;
}

}  // namespace infmax
