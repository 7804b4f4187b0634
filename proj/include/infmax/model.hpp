#pragma once

#include <string>
#include <vector>

#include "infmax/rational.hpp"

namespace infmax {

// Edge-probability function c * n^(-a), evaluated as min(1, c * n^(-a)).
// The exponent is an exact rational so regime comparisons never suffer
// floating-point fuzz; the coefficient only feeds Monte Carlo estimation.
struct PowerLawWeight {
  double coeff = 1.0;
  Rational exponent;

  double eval(double n) const;
};

using NodeId = int;
constexpr NodeId kNoNode = -1;

struct TreeNode {
  std::string id;
  PowerLawWeight weight;
  double v = 0.0;  // fraction of vertices; input on leaves, derived on internal nodes
  NodeId parent = kNoNode;
  int depth = 0;
  std::vector<NodeId> children;

  bool is_leaf() const { return children.empty(); }
};

// The hierarchy tree of the blockmodel together with the contagion
// threshold r it will be analyzed under. Immutable after construction;
// derived fields (internal v, depths, leaf order) are filled in once.
class HierarchyTree {
 public:
  // nodes[0] must be the root; children/parent links must be consistent.
  HierarchyTree(std::vector<TreeNode> nodes, int r);

  int r() const { return r_; }
  NodeId root() const { return 0; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const TreeNode& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<NodeId>& leaves() const { return leaves_; }  // preorder
  int leaf_index(NodeId id) const;  // position in leaves(), -1 if not a leaf
  NodeId find(const std::string& id) const;  // kNoNode if absent

  // all leaves in the subtree rooted at id, in preorder
  std::vector<NodeId> leaves_under(NodeId id) const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<NodeId> leaves_;
  std::vector<int> leaf_index_;
  int r_;
};

enum class Criticality { Subcritical, Critical, Supercritical };

const char* to_string(Criticality c);

// Density of a leaf: rho(t) = w(t) * (v(t) n)^(1/r) = coeff * n^exponent_of_n
// with coeff = c * v^(1/r) and exponent_of_n = 1/r - a. Ordering is
// lexicographic on (exponent_of_n, coeff) and independent of n.
struct DensityValue {
  double coeff = 0.0;
  Rational exponent_of_n;

  friend bool operator<(const DensityValue& lhs, const DensityValue& rhs) {
    if (lhs.exponent_of_n != rhs.exponent_of_n) return lhs.exponent_of_n < rhs.exponent_of_n;
    return lhs.coeff < rhs.coeff;
  }
  friend bool operator>(const DensityValue& lhs, const DensityValue& rhs) { return rhs < lhs; }
};

enum class ViolationKind {
  Coefficient,     // coeff <= 0
  ExponentSign,    // exponent < 0 (weight would grow with n)
  ProperSeparation,  // ancestor exponent not strictly larger than descendant's
  LeafFraction,    // leaf v <= 0 or v > 1
  FractionSum,     // leaf fractions do not sum to 1
  DuplicateId,
  RegimeGap,       // exponent in [1 + 1/r, 2]: seed allocation undefined there
};

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string node_id;
  std::string detail;
};

// Reports every violated invariant; empty result means the tree is a valid
// instance. RegimeGap entries are flags rather than structural defects:
// graph sampling remains well defined, only the allocation machinery
// refuses to run on such trees.
std::vector<Violation> validate(const HierarchyTree& tree);

bool structurally_valid(const std::vector<Violation>& violations);  // ignores RegimeGap
bool has_regime_gap(const std::vector<Violation>& violations);

Criticality classify(const PowerLawWeight& w, int r);
Criticality classify(const HierarchyTree& tree, NodeId id);

DensityValue density(const HierarchyTree& tree, NodeId leaf);  // throws on non-leaf

NodeId lca(const HierarchyTree& tree, NodeId a, NodeId b);
PowerLawWeight lca_weight(const HierarchyTree& tree, NodeId a, NodeId b);

// Roots of the maximal dense subtrees: nodes with exponent < 1 + 1/r whose
// parent has exponent >= 1 + 1/r (or the root). Requires a tree with no
// structural violations and no regime-gap nodes.
std::vector<NodeId> maximal_dense_subtrees(const HierarchyTree& tree);

// A subcritical leaf is vulnerable when some critical or supercritical leaf
// shares with it an ancestor of weight Omega(1/n), i.e. exponent <= 1; such
// a leaf activates by spillover once any leaf activates. Scope is the
// subtree under `scope_root` (whole tree by default).
bool is_vulnerable(const HierarchyTree& tree, NodeId leaf);
bool is_vulnerable(const HierarchyTree& tree, NodeId leaf, NodeId scope_root);

// densest leaf under `subtree_root`; ties broken by preorder position
NodeId densest_leaf(const HierarchyTree& tree, NodeId subtree_root);

}  // namespace infmax
