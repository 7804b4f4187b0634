#include "infmax/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace infmax {

double PowerLawWeight::eval(double n) const {
  double w = coeff * std::pow(n, -exponent.value());
  return w < 1.0 ? w : 1.0;
}

HierarchyTree::HierarchyTree(std::vector<TreeNode> nodes, int r)
    : nodes_(std::move(nodes)), r_(r) {
  if (r_ < 2) throw std::invalid_argument("HierarchyTree: r must be >= 2");
  if (nodes_.empty()) throw std::invalid_argument("HierarchyTree: empty tree");
  leaf_index_.assign(nodes_.size(), -1);
  // depths, parent checks, preorder leaf collection
  std::vector<NodeId> stack{0};
  std::vector<bool> seen(nodes_.size(), false);
  nodes_[0].parent = kNoNode;
  nodes_[0].depth = 0;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(id)])
      throw std::invalid_argument("HierarchyTree: node visited twice (not a tree)");
    seen[static_cast<std::size_t>(id)] = true;
    auto& nd = nodes_[static_cast<std::size_t>(id)];
    if (nd.is_leaf()) {
      leaf_index_[static_cast<std::size_t>(id)] = static_cast<int>(leaves_.size());
      leaves_.push_back(id);
    }
    // push children in reverse so preorder matches child order
    for (auto it = nd.children.rbegin(); it != nd.children.rend(); ++it) {
      NodeId c = *it;
      if (c < 0 || c >= node_count())
        throw std::invalid_argument("HierarchyTree: child index out of range");
      nodes_[static_cast<std::size_t>(c)].parent = id;
      nodes_[static_cast<std::size_t>(c)].depth = nd.depth + 1;
      stack.push_back(c);
    }
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("HierarchyTree: unreachable node");
  // internal v is the sum over children (derived, cached here once);
  // accumulate bottom-up in reverse preorder
  std::vector<NodeId> order;
  order.reserve(nodes_.size());
  stack.assign(1, 0);
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    order.push_back(id);
    for (NodeId c : nodes_[static_cast<std::size_t>(id)].children) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto& nd = nodes_[static_cast<std::size_t>(*it)];
    if (!nd.is_leaf()) {
      nd.v = 0.0;
      for (NodeId c : nd.children) nd.v += nodes_[static_cast<std::size_t>(c)].v;
    }
  }
}

int HierarchyTree::leaf_index(NodeId id) const {
  return leaf_index_[static_cast<std::size_t>(id)];
}

NodeId HierarchyTree::find(const std::string& id) const {
  for (int i = 0; i < node_count(); ++i) {
    if (nodes_[static_cast<std::size_t>(i)].id == id) return i;
  }
  return kNoNode;
}

std::vector<NodeId> HierarchyTree::leaves_under(NodeId id) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    const auto& nd = node(cur);
    if (nd.is_leaf()) out.push_back(cur);
    for (auto it = nd.children.rbegin(); it != nd.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

const char* to_string(Criticality c) {
  switch (c) {
    case Criticality::Subcritical: return "subcritical";
    case Criticality::Critical: return "critical";
    case Criticality::Supercritical: return "supercritical";
  }
  return "?";
}

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Coefficient: return "coefficient";
    case ViolationKind::ExponentSign: return "exponent-sign";
    case ViolationKind::ProperSeparation: return "proper-separation";
    case ViolationKind::LeafFraction: return "leaf-fraction";
    case ViolationKind::FractionSum: return "fraction-sum";
    case ViolationKind::DuplicateId: return "duplicate-id";
    case ViolationKind::RegimeGap: return "regime-gap";
  }
  return "?";
}

std::vector<Violation> validate(const HierarchyTree& tree) {
  std::vector<Violation> out;
  const int r = tree.r();
  const Rational gap_lo{static_cast<std::int64_t>(r) + 1, r};  // 1 + 1/r
  const Rational gap_hi{2, 1};
  std::unordered_set<std::string> ids;
  double leaf_sum = 0.0;
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    const auto& nd = tree.node(id);
    if (!ids.insert(nd.id).second)
      out.push_back({ViolationKind::DuplicateId, nd.id, "node id appears more than once"});
    if (!(nd.weight.coeff > 0.0))
      out.push_back({ViolationKind::Coefficient, nd.id, "coeff must be > 0"});
    if (nd.weight.exponent < Rational{0, 1})
      out.push_back({ViolationKind::ExponentSign, nd.id, "exponent must be >= 0"});
    if (nd.parent != kNoNode) {
      const auto& par = tree.node(nd.parent);
      if (!(par.weight.exponent > nd.weight.exponent)) {
        out.push_back({ViolationKind::ProperSeparation, nd.id,
                       "parent '" + par.id + "' exponent " + par.weight.exponent.str() +
                           " not strictly above " + nd.weight.exponent.str()});
      }
    }
    if (nd.is_leaf()) {
      if (!(nd.v > 0.0) || nd.v > 1.0)
        out.push_back({ViolationKind::LeafFraction, nd.id, "leaf v must be in (0,1]"});
      leaf_sum += nd.v;
    }
    if (nd.weight.exponent >= gap_lo && nd.weight.exponent <= gap_hi) {
      out.push_back({ViolationKind::RegimeGap, nd.id,
                     "exponent " + nd.weight.exponent.str() + " lies in [" + gap_lo.str() +
                         ", 2]; seed allocation is undefined in this regime"});
    }
  }
  if (std::fabs(leaf_sum - 1.0) > 1e-9) {
    out.push_back({ViolationKind::FractionSum, tree.node(tree.root()).id,
                   "leaf fractions sum to " + std::to_string(leaf_sum)});
  }
  return out;
}

bool structurally_valid(const std::vector<Violation>& violations) {
  for (const auto& v : violations) {
    if (v.kind != ViolationKind::RegimeGap) return false;
  }
  return true;
}

bool has_regime_gap(const std::vector<Violation>& violations) {
  for (const auto& v : violations) {
    if (v.kind == ViolationKind::RegimeGap) return true;
  }
  return false;
}

Criticality classify(const PowerLawWeight& w, int r) {
  const Rational crit{1, r};
  if (w.exponent > crit) return Criticality::Subcritical;
  if (w.exponent == crit) return Criticality::Critical;
  return Criticality::Supercritical;
}

Criticality classify(const HierarchyTree& tree, NodeId id) {
  return classify(tree.node(id).weight, tree.r());
}

DensityValue density(const HierarchyTree& tree, NodeId leaf) {
  const auto& nd = tree.node(leaf);
  if (!nd.is_leaf()) throw std::invalid_argument("density: node '" + nd.id + "' is not a leaf");
  DensityValue d;
  d.coeff = nd.weight.coeff * std::pow(nd.v, 1.0 / tree.r());
  d.exponent_of_n = Rational{1, tree.r()} - nd.weight.exponent;
  return d;
}

NodeId lca(const HierarchyTree& tree, NodeId a, NodeId b) {
  if (a < 0 || a >= tree.node_count() || b < 0 || b >= tree.node_count())
    throw std::invalid_argument("lca: node not in tree");
  while (a != b) {
    if (tree.node(a).depth >= tree.node(b).depth)
      a = tree.node(a).parent;
    else
      b = tree.node(b).parent;
  }
  return a;
}

PowerLawWeight lca_weight(const HierarchyTree& tree, NodeId a, NodeId b) {
  return tree.node(lca(tree, a, b)).weight;
}

std::vector<NodeId> maximal_dense_subtrees(const HierarchyTree& tree) {
  auto violations = validate(tree);
  if (!structurally_valid(violations))
    throw std::invalid_argument("maximal_dense_subtrees: tree fails validation ('" +
                                violations.front().node_id + "': " +
                                std::string(to_string(violations.front().kind)) + ")");
  for (const auto& v : violations) {
    if (v.kind == ViolationKind::RegimeGap)
      throw std::invalid_argument("maximal_dense_subtrees: regime-gap node '" + v.node_id + "'");
  }
  const Rational bound{static_cast<std::int64_t>(tree.r()) + 1, tree.r()};  // 1 + 1/r
  std::vector<NodeId> roots;
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    const auto& nd = tree.node(id);
    if (!(nd.weight.exponent < bound)) continue;  // not dense
    if (nd.parent == kNoNode || !(tree.node(nd.parent).weight.exponent < bound))
      roots.push_back(id);
  }
  return roots;
}

bool is_vulnerable(const HierarchyTree& tree, NodeId leaf) {
  return is_vulnerable(tree, leaf, tree.root());
}

bool is_vulnerable(const HierarchyTree& tree, NodeId leaf, NodeId scope_root) {
  if (classify(tree, leaf) != Criticality::Subcritical)
    throw std::invalid_argument("is_vulnerable: leaf '" + tree.node(leaf).id +
                                "' is not subcritical");
  const Rational one{1, 1};
  for (NodeId other : tree.leaves_under(scope_root)) {
    if (other == leaf) continue;
    if (classify(tree, other) == Criticality::Subcritical) continue;
    if (lca_weight(tree, leaf, other).exponent <= one) return true;
  }
  return false;
}

NodeId densest_leaf(const HierarchyTree& tree, NodeId subtree_root) {
  auto ls = tree.leaves_under(subtree_root);
  if (ls.empty()) throw std::invalid_argument("densest_leaf: no leaves");
  NodeId best = ls.front();
  DensityValue best_d = density(tree, best);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    DensityValue d = density(tree, ls[i]);
    if (d > best_d) {
      best = ls[i];
      best_d = d;
    }
  }
  return best;
}

}  // namespace infmax
