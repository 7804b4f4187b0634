#include "infmax/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "infmax/cascade.hpp"
#include "infmax/model.hpp"
#include "infmax/optimizer.hpp"
#include "infmax/parallel.hpp"
#include "infmax/sampler.hpp"
#include "infmax/tree_io.hpp"
#include "infmax/walk.hpp"

namespace infmax {

namespace {

constexpr std::uint64_t kDefaultSeed = 1234567;  // documented in the README

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct Output {
  std::ostream* os = &std::cout;
  std::ofstream file;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    os = &file;
  }
  std::ostream& stream() { return *os; }
};

SeedAllocation parse_alloc(const std::string& text, std::size_t leaves) {
  SeedAllocation alloc;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '|')) {
    alloc.counts.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  if (alloc.counts.size() != leaves)
    throw std::runtime_error("allocation '" + text + "' has " +
                             std::to_string(alloc.counts.size()) + " entries for " +
                             std::to_string(leaves) + " leaves");
  return alloc;
}

int report_violations(const std::vector<Violation>& violations, std::ostream& os) {
  if (violations.empty()) {
    os << "valid\n";
    return 0;
  }
  for (const auto& v : violations)
    os << to_string(v.kind) << " node=" << v.node_id << " " << v.detail << "\n";
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"complex-contagion influence maximization toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = kDefaultSeed;
  int threads = default_threads();
  std::string out_path;
  app.add_option("--seed", seed, "base RNG seed (all substreams derive from it)");
  app.add_option("--threads", threads, "worker thread cap; output does not depend on it");
  app.add_option("--out", out_path, "output file (default stdout)");

  std::string tree_path;
  int r = 2, K = 0, k = 2, k_min = 2, k_max = 6, max_iter = 1000;
  std::uint64_t n = 10000, trials = 100000, cap = 10000;
  double c = 1.0, gnp_p = -1.0, theta = 0.99;
  std::string alloc_text;
  bool dist_flag = false, broken = false, dp_trace = false;
  std::optional<double> keep_prob;

  auto* cmd_validate = app.add_subcommand("validate", "check a tree spec file");
  cmd_validate->add_option("tree", tree_path, "tree spec JSON")->required();
  cmd_validate->add_option("--r", r, "contagion threshold");

  auto* cmd_sample = app.add_subcommand("sample", "sample a graph, emit an edge list");
  cmd_sample->add_option("--tree", tree_path, "tree spec JSON");
  cmd_sample->add_option("--gnp", gnp_p, "Erdos-Renyi edge probability instead of a tree");
  cmd_sample->add_option("--n", n, "vertex count")->required();
  cmd_sample->add_option("--r", r, "contagion threshold");

  auto* cmd_cascade = app.add_subcommand("cascade", "run one r-complex contagion");
  cmd_cascade->add_option("--tree", tree_path, "tree spec JSON");
  cmd_cascade->add_option("--gnp", gnp_p, "Erdos-Renyi edge probability instead of a tree");
  cmd_cascade->add_option("--n", n, "vertex count")->required();
  cmd_cascade->add_option("--r", r, "contagion threshold");
  cmd_cascade->add_option("--K", K, "seeds, placed at the start of the first leaf");
  cmd_cascade->add_option("--alloc", alloc_text, "per-leaf seed counts, e.g. 2|1|0");
  cmd_cascade->add_option("--theta", theta, "leaf activation threshold");

  auto* cmd_zeta = app.add_subcommand("zeta", "walk hit-probability estimate");
  cmd_zeta->add_option("--k", k, "start position / seed count")->required();
  cmd_zeta->add_option("--c", c, "critical coefficient")->required();
  cmd_zeta->add_option("--r", r, "contagion threshold");
  cmd_zeta->add_option("--trials", trials, "Monte Carlo trials");
  cmd_zeta->add_option("--max-iter", max_iter, "truncation horizon");
  cmd_zeta->add_flag("--dist", dist_flag, "emit the hit-time distribution instead");

  auto* cmd_lc = app.add_subcommand("logconcavity", "failure-probability log-concavity check");
  cmd_lc->add_option("--c", c, "critical coefficient")->required();
  cmd_lc->add_option("--r", r, "contagion threshold");
  cmd_lc->add_option("--k-min", k_min, "first k");
  cmd_lc->add_option("--k-max", k_max, "last k");
  cmd_lc->add_option("--trials", trials, "Monte Carlo trials per k");
  cmd_lc->add_option("--max-iter", max_iter, "truncation horizon");

  auto* cmd_couple = app.add_subcommand("couple", "coupled-walk ensemble and marginal check");
  cmd_couple->add_option("--k", k, "start position")->required();
  cmd_couple->add_option("--c", c, "critical coefficient")->required();
  cmd_couple->add_option("--r", r, "contagion threshold");
  cmd_couple->add_option("--trials", trials, "coupled trials");
  cmd_couple->add_option("--max-iter", max_iter, "truncation horizon");
  cmd_couple->add_flag("--broken", broken, "negative control: drop the dominance top-up");

  auto* cmd_htable = app.add_subcommand("htable", "build the per-subtree h-value table");
  cmd_htable->add_option("--tree", tree_path, "tree spec JSON")->required();
  cmd_htable->add_option("--r", r, "contagion threshold");
  cmd_htable->add_option("--K", K, "seed budget")->required();
  cmd_htable->add_option("--trials", trials, "walk trials per estimate");
  cmd_htable->add_option("--max-iter", max_iter, "walk truncation horizon");

  auto* cmd_opt = app.add_subcommand("optimize", "seed allocation by dynamic programming");
  cmd_opt->add_option("--tree", tree_path, "tree spec JSON")->required();
  cmd_opt->add_option("--r", r, "contagion threshold");
  cmd_opt->add_option("--K", K, "seed budget")->required();
  cmd_opt->add_option("--trials", trials, "walk trials per h estimate");
  cmd_opt->add_option("--max-iter", max_iter, "walk truncation horizon");
  cmd_opt->add_flag("--dp-trace", dp_trace, "dump the full DP table");

  auto* cmd_bf = app.add_subcommand("bruteforce", "rank all compositions by Monte Carlo");
  cmd_bf->add_option("--tree", tree_path, "tree spec JSON")->required();
  cmd_bf->add_option("--r", r, "contagion threshold");
  cmd_bf->add_option("--K", K, "seed budget")->required();
  cmd_bf->add_option("--n", n, "vertex count")->required();
  cmd_bf->add_option("--trials", trials, "paired trials per allocation");
  cmd_bf->add_option("--theta", theta, "leaf activation threshold");
  cmd_bf->add_option("--cap", cap, "composition count cap");

  auto* cmd_sub = app.add_subcommand("submodular-demo", "independent-cascade spread-vs-concentrate");
  cmd_sub->add_option("--K", K, "leaf count and seed budget")->required();
  cmd_sub->add_option("--r", r, "threshold parameter of the construction");
  cmd_sub->add_option("--n", n, "vertex count");
  cmd_sub->add_option("--trials", trials, "paired trials");
  double keep_prob_raw = -1.0;
  auto* keep_opt = cmd_sub->add_option("--keep-prob", keep_prob_raw,
                                       "override the edge keep probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Output out;
  try {
    out.open(out_path);
    std::ostream& os = out.stream();

    auto load_tree = [&]() { return load_tree_file(tree_path, r); };

    if (*cmd_validate) {
      auto tree = load_tree();
      os << "# command=validate tree=" << tree_path << " r=" << r << "\n";
      return report_violations(validate(tree), os);
    }

    if (*cmd_sample) {
      std::unique_ptr<GraphSample> g;
      if (gnp_p >= 0.0) {
        g = std::make_unique<GraphSample>(sample_gnp(static_cast<Vertex>(n), gnp_p, seed));
      } else if (!tree_path.empty()) {
        auto tree = load_tree();
        g = std::make_unique<GraphSample>(
            sample_graph(tree, static_cast<Vertex>(n), seed, threads));
      } else {
        std::cerr << "sample: need --tree or --gnp\n";
        return 2;
      }
      write_edge_list(*g, os);
      return 0;
    }

    if (*cmd_cascade) {
      std::unique_ptr<GraphSample> g;
      std::unique_ptr<HierarchyTree> tree;
      if (gnp_p >= 0.0) {
        g = std::make_unique<GraphSample>(sample_gnp(static_cast<Vertex>(n), gnp_p, seed));
      } else if (!tree_path.empty()) {
        tree = std::make_unique<HierarchyTree>(load_tree());
        g = std::make_unique<GraphSample>(
            sample_graph(*tree, static_cast<Vertex>(n), seed, threads));
      } else {
        std::cerr << "cascade: need --tree or --gnp\n";
        return 2;
      }
      SeedAllocation alloc;
      if (!alloc_text.empty()) {
        alloc = parse_alloc(alloc_text, g->leaf_spans().size());
      } else {
        alloc.counts.assign(g->leaf_spans().size(), 0);
        alloc.counts[0] = static_cast<std::uint32_t>(K);
      }
      CascadeResult res = run_r_complex(*g, place_seeds(*g, alloc), r, theta);
      os << "# command=cascade n=" << n << " r=" << r << " alloc=" << alloc.str()
         << " theta=" << fmt(theta) << " seed=" << seed << "\n";
      os << "infected_total,rounds,edges\n";
      os << res.infected_total << "," << res.rounds << "," << g->edge_count() << "\n";
      os << "leaf,size,infected,activated\n";
      const auto& spans = g->leaf_spans();
      for (std::size_t i = 0; i < spans.size(); ++i) {
        os << spans[i].leaf_id << "," << spans[i].size() << "," << res.infected_per_leaf[i] << ","
           << (res.activated[i] ? 1 : 0) << "\n";
      }
      return 0;
    }

    if (*cmd_zeta) {
      WalkParams p{k, c, r, max_iter};
      os << "# command=zeta k=" << k << " c=" << fmt(c) << " r=" << r << " trials=" << trials
         << " max_iter=" << max_iter << " seed=" << seed << "\n";
      if (dist_flag) {
        HitDistribution d = hit_distribution(p, trials, seed, threads);
        os << "ell,count,freq\n";
        for (const auto& [ell, count] : d.hit_counts) {
          os << ell << "," << count << "," << fmt(static_cast<double>(count) / d.trials) << "\n";
        }
        os << "inf," << d.no_hit << "," << fmt(static_cast<double>(d.no_hit) / d.trials) << "\n";
      } else {
        HitEstimate est = estimate_hit_prob(p, trials, seed, threads);
        os << "k,trials,hits,truncated,p_hat,ci_low,ci_high\n";
        os << k << "," << est.trials << "," << est.hits << "," << est.truncated_count << ","
           << fmt(est.p_hat) << "," << fmt(est.ci_low) << "," << fmt(est.ci_high) << "\n";
      }
      return 0;
    }

    if (*cmd_lc) {
      auto rows = check_log_concavity(c, r, k_min, k_max, trials, max_iter, seed, threads);
      os << "# command=logconcavity c=" << fmt(c) << " r=" << r << " k_min=" << k_min
         << " k_max=" << k_max << " trials=" << trials << " max_iter=" << max_iter
         << " seed=" << seed << "\n";
      os << "k,q_k,q_k1,q_k2,lhs,rhs,diff,se,verdict\n";
      for (const auto& row : rows) {
        os << row.k << "," << fmt(row.q_k) << "," << fmt(row.q_k1) << "," << fmt(row.q_k2) << ","
           << fmt(row.lhs) << "," << fmt(row.rhs) << "," << fmt(row.rhs - row.lhs) << ","
           << fmt(row.se) << "," << to_string(row.verdict) << "\n";
      }
      return 0;
    }

    if (*cmd_couple) {
      CouplingMode mode = broken ? CouplingMode::NoDominanceExtra : CouplingMode::Full;
      CouplingReport rep = coupling_marginal_check(k, c, r, trials, max_iter, seed, mode, threads);
      os << "# command=couple k=" << k << " c=" << fmt(c) << " r=" << r << " trials=" << trials
         << " max_iter=" << max_iter << " seed=" << seed << " broken=" << (broken ? 1 : 0) << "\n";
      os << "metric,value\n";
      os << "trials," << rep.trials << "\n";
      os << "a_hits," << rep.a_hits << "\n";
      os << "b_hits," << rep.b_hits << "\n";
      os << "both_hit," << rep.both_hit << "\n";
      os << "a_only," << rep.a_only << "\n";
      os << "b_only," << rep.b_only << "\n";
      os << "phase_none," << rep.phase_none << "\n";
      os << "phase_symm," << rep.phase_symm << "\n";
      os << "phase_skew," << rep.phase_skew << "\n";
      os << "symm_disagreements," << rep.symm_disagreements << "\n";
      os << "a_marginal_chi2," << fmt(rep.a_marginal.stat) << "\n";
      os << "a_marginal_pvalue," << fmt(rep.a_marginal.pvalue) << "\n";
      os << "b_marginal_chi2," << fmt(rep.b_marginal.stat) << "\n";
      os << "b_marginal_pvalue," << fmt(rep.b_marginal.pvalue) << "\n";
      return 0;
    }

    if (*cmd_htable || *cmd_opt) {
      auto tree = load_tree();
      auto violations = validate(tree);
      if (!violations.empty()) return report_violations(violations, std::cerr);
      WalkEstimateConfig cfg;
      cfg.trials = trials;
      cfg.max_iter = max_iter;
      cfg.seed = seed;
      cfg.threads = threads;
      HValueTable table = build_h_table(tree, K, cfg);
      if (*cmd_htable) {
        os << "# command=htable tree=" << tree_path << " r=" << r << " K=" << K
           << " trials=" << trials << " max_iter=" << max_iter << " seed=" << seed << "\n";
        os << "subtree,root,star_leaf,class,k,h\n";
        for (std::size_t i = 0; i < table.subtrees.size(); ++i) {
          const auto& e = table.subtrees[i];
          for (int kk = 0; kk <= K; ++kk) {
            os << i << "," << tree.node(e.root).id << "," << tree.node(e.star_leaf).id << ","
               << to_string(e.star_class) << "," << kk << "," << fmt(table.h[i][kk]) << "\n";
          }
        }
        return 0;
      }
      DpTrace trace;
      AllocationResult res = dp_allocate(tree, K, table, dp_trace ? &trace : nullptr);
      os << "# command=optimize tree=" << tree_path << " r=" << r << " K=" << K
         << " trials=" << trials << " max_iter=" << max_iter << " seed=" << seed << "\n";
      os << "value," << fmt(res.value) << "\n";
      os << "leaf,seeds\n";
      for (std::size_t i = 0; i < res.alloc.counts.size(); ++i) {
        os << tree.node(tree.leaves()[i]).id << "," << res.alloc.counts[i] << "\n";
      }
      if (dp_trace) {
        os << "i,k,best\n";
        for (std::size_t i = 0; i < trace.best.size(); ++i) {
          for (std::size_t kk = 0; kk < trace.best[i].size(); ++kk) {
            os << i << "," << kk << "," << fmt(trace.best[i][kk]) << "\n";
          }
        }
      }
      return 0;
    }

    if (*cmd_bf) {
      auto tree = load_tree();
      auto violations = validate(tree);
      if (!violations.empty()) return report_violations(violations, std::cerr);
      auto ranked =
          brute_force_allocate(tree, K, static_cast<Vertex>(n), trials, theta, seed, cap, threads);
      os << "# command=bruteforce tree=" << tree_path << " r=" << r << " K=" << K << " n=" << n
         << " trials=" << trials << " theta=" << fmt(theta) << " cap=" << cap << " seed=" << seed
         << "\n";
      os << "rank,alloc,mean,se\n";
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        os << (i + 1) << "," << ranked[i].alloc.str() << "," << fmt(ranked[i].mean) << ","
           << fmt(ranked[i].se) << "\n";
      }
      return 0;
    }

    if (*cmd_sub) {
      if (keep_opt->count() > 0) keep_prob = keep_prob_raw;
      SubmodularReport rep =
          submodular_demo(K, r, static_cast<Vertex>(n), trials, seed, keep_prob, threads);
      os << "# command=submodular-demo K=" << K << " r=" << r << " n=" << n
         << " trials=" << trials << " keep_prob=" << fmt(rep.keep_prob)
         << " within_leaf_mean_degree=" << fmt(rep.within_leaf_mean_degree) << " seed=" << seed
         << "\n";
      os << "variant,mean,se\n";
      os << "spread," << fmt(rep.spread_mean) << "," << fmt(rep.spread_se) << "\n";
      os << "concentrated," << fmt(rep.conc_mean) << "," << fmt(rep.conc_se) << "\n";
      return 0;
    }
  } catch (const TreeParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.emplace_back("infmax");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace infmax
