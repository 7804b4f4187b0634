#include <algorithm>

#include "doctest.h"
#include "infmax/model.hpp"
#include "infmax/tree_io.hpp"

using namespace infmax;

namespace {

TreeNode leaf(const std::string& id, double coeff, Rational exp, double v) {
  TreeNode n;
  n.id = id;
  n.weight = {coeff, exp};
  n.v = v;
  return n;
}

TreeNode internal(const std::string& id, double coeff, Rational exp, std::vector<NodeId> children) {
  TreeNode n;
  n.id = id;
  n.weight = {coeff, exp};
  n.children = std::move(children);
  return n;
}

bool has_violation(const std::vector<Violation>& vs, ViolationKind kind) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

}  // namespace

TEST_CASE("single-leaf tree is the smallest legal instance") {
  HierarchyTree t({leaf("a", 1.0, {1, 2}, 1.0)}, 2);
  CHECK(validate(t).empty());
  CHECK(t.leaves().size() == 1);
  CHECK(classify(t, 0) == Criticality::Critical);
}

TEST_CASE("proper separation: ancestors carry strictly larger exponents") {
  // deeper communities are denser: the root weight vanishes faster
  HierarchyTree good({internal("root", 1.0, {9, 8}, {1, 2}),
                      leaf("a", 1.0, {1, 2}, 0.5), leaf("b", 1.0, {1, 2}, 0.5)},
                     2);
  CHECK(validate(good).empty());
  // reversed: the root would dominate its children
  HierarchyTree bad({internal("root", 1.0, {1, 4}, {1, 2}),
                     leaf("a", 1.0, {1, 2}, 0.5), leaf("b", 1.0, {1, 2}, 0.5)},
                    2);
  CHECK(has_violation(validate(bad), ViolationKind::ProperSeparation));
  // equal exponents also fail: the weights would only differ by a constant
  HierarchyTree equal({internal("root", 1.0, {1, 2}, {1, 2}),
                       leaf("a", 2.0, {1, 2}, 0.5), leaf("b", 1.0, {1, 2}, 0.5)},
                      2);
  CHECK(has_violation(validate(equal), ViolationKind::ProperSeparation));
}

TEST_CASE("validate reports every broken invariant") {
  {
    HierarchyTree t({leaf("a", 0.0, {1, 2}, 1.0)}, 2);
    CHECK(has_violation(validate(t), ViolationKind::Coefficient));
  }
  {
    HierarchyTree t({leaf("a", 1.0, {-1, 2}, 1.0)}, 2);
    CHECK(has_violation(validate(t), ViolationKind::ExponentSign));
  }
  {
    HierarchyTree t({internal("root", 1.0, {9, 8}, {1, 2}), leaf("a", 1.0, {1, 2}, 0.5),
                     leaf("b", 1.0, {1, 2}, 0.3)},
                    2);
    CHECK(has_violation(validate(t), ViolationKind::FractionSum));
  }
  {
    HierarchyTree t({internal("root", 1.0, {9, 8}, {1, 2}), leaf("a", 1.0, {1, 2}, 0.0),
                     leaf("b", 1.0, {1, 2}, 1.0)},
                    2);
    CHECK(has_violation(validate(t), ViolationKind::LeafFraction));
  }
  {
    HierarchyTree t({internal("root", 1.0, {9, 8}, {1, 2}), leaf("x", 1.0, {1, 2}, 0.5),
                     leaf("x", 1.0, {1, 3}, 0.5)},
                    2);
    CHECK(has_violation(validate(t), ViolationKind::DuplicateId));
  }
  // r=2: exponents in [3/2, 2] are flagged as regime gap (both endpoints in)
  for (auto exp : {Rational{3, 2}, Rational{7, 4}, Rational{2, 1}}) {
    HierarchyTree t({internal("root", 1.0, exp, {1, 2}), leaf("a", 1.0, {1, 2}, 0.5),
                     leaf("b", 1.0, {1, 2}, 0.5)},
                    2);
    auto vs = validate(t);
    CHECK(has_regime_gap(vs));
    CHECK(structurally_valid(vs));
  }
  // just outside the gap: clean
  HierarchyTree t({internal("root", 1.0, {17, 8}, {1, 2}), leaf("a", 1.0, {1, 2}, 0.5),
                   leaf("b", 1.0, {1, 2}, 0.5)},
                  2);
  CHECK(validate(t).empty());
  // validate is idempotent
  auto v1 = validate(t);
  auto v2 = validate(t);
  CHECK(v1.size() == v2.size());
}

TEST_CASE("classification by exact exponent comparison") {
  CHECK(classify(PowerLawWeight{1.0, {1, 2}}, 2) == Criticality::Critical);
  CHECK(classify(PowerLawWeight{1.0, {2, 5}}, 2) == Criticality::Supercritical);
  CHECK(classify(PowerLawWeight{1.0, {1, 1}}, 3) == Criticality::Subcritical);
  CHECK(classify(PowerLawWeight{123.0, {1, 3}}, 3) == Criticality::Critical);
}

TEST_CASE("density values and their ordering") {
  HierarchyTree t({internal("root", 1.0, {9, 8}, {1, 2}), leaf("a", 2.0, {1, 2}, 0.25),
                   leaf("b", 1.0, {1, 3}, 0.75)},
                  2);
  auto da = density(t, 1);
  CHECK(da.coeff == doctest::Approx(2.0 * 0.5));  // 2 * 0.25^(1/2)
  CHECK(da.exponent_of_n == Rational{0, 1});
  auto db = density(t, 2);
  CHECK(db.exponent_of_n == Rational{1, 6});  // 1/2 - 1/3
  // supercritical leaf dominates any critical one regardless of coefficient
  CHECK(db > da);
  CHECK_THROWS(density(t, 0));  // non-leaf

  // two critical leaves: larger v wins at equal coefficient
  HierarchyTree t2({internal("root", 1.0, {9, 8}, {1, 2, 3}), leaf("a", 1.0, {1, 2}, 0.5),
                    leaf("b", 1.0, {1, 2}, 0.4), leaf("c", 1.0, {1, 2}, 0.1)},
                   2);
  CHECK(density(t2, 1) > density(t2, 2));
  CHECK(densest_leaf(t2, 0) == 1);
}

TEST_CASE("classify and density are consistent: critical iff exponent_of_n is zero") {
  HierarchyTree t({internal("root", 1.0, {9, 8}, {1, 2, 3}), leaf("a", 1.0, {1, 2}, 0.3),
                   leaf("b", 1.0, {2, 5}, 0.3), leaf("c", 1.0, {2, 3}, 0.4)},
                  2);
  for (NodeId leaf_id : t.leaves()) {
    bool critical = classify(t, leaf_id) == Criticality::Critical;
    bool zero_exp = density(t, leaf_id).exponent_of_n == Rational{0, 1};
    CHECK(critical == zero_exp);
  }
}

TEST_CASE("lca weight") {
  HierarchyTree t({internal("root", 0.5, {5, 4}, {1, 4}), internal("m", 1.0, {3, 4}, {2, 3}),
                   leaf("a", 1.0, {1, 2}, 0.3), leaf("b", 2.0, {1, 3}, 0.3),
                   leaf("c", 1.0, {1, 2}, 0.4)},
                  2);
  CHECK(lca_weight(t, 2, 3).exponent == Rational{3, 4});  // siblings under m
  CHECK(lca_weight(t, 2, 4).exponent == Rational{5, 4});  // across the root
  CHECK(lca_weight(t, 2, 2).exponent == Rational{1, 2});  // a leaf with itself
  CHECK(lca_weight(t, 2, 1).exponent == Rational{3, 4});  // leaf and its ancestor
  CHECK_THROWS(lca(t, 0, 99));
}

TEST_CASE("maximal dense subtrees") {
  // r=2: dense means exponent < 3/2
  {
    // root already dense: the whole tree is one subtree
    HierarchyTree t({internal("root", 1.0, {3, 4}, {1, 2}), leaf("a", 1.0, {1, 2}, 0.5),
                     leaf("b", 1.0, {2, 5}, 0.5)},
                    2);
    auto roots = maximal_dense_subtrees(t);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == t.root());
  }
  {
    // sparse root above two dense leaves: two subtrees
    HierarchyTree t({internal("root", 1.0, {5, 2}, {1, 2}), leaf("a", 1.0, {1, 2}, 0.5),
                     leaf("b", 1.0, {1, 2}, 0.5)},
                    2);
    auto roots = maximal_dense_subtrees(t);
    REQUIRE(roots.size() == 2);
    CHECK(t.node(roots[0]).id == "a");
    CHECK(t.node(roots[1]).id == "b");
  }
  {
    // regime-gap node: refuse
    HierarchyTree t({internal("root", 1.0, {7, 4}, {1, 2}), leaf("a", 1.0, {1, 2}, 0.5),
                     leaf("b", 1.0, {1, 2}, 0.5)},
                    2);
    CHECK_THROWS_WITH_AS(maximal_dense_subtrees(t),
                         doctest::Contains("regime-gap node 'root'"), std::invalid_argument);
  }
  {
    // every dense leaf lies in exactly one returned subtree
    HierarchyTree t({internal("root", 1.0, {9, 4}, {1, 2}), internal("u", 1.0, {5, 4}, {3, 4}),
                     leaf("c", 1.0, {11, 8}, 0.2), leaf("a", 1.0, {1, 2}, 0.3),
                     leaf("b", 1.0, {3, 4}, 0.5)},
                    2);
    auto roots = maximal_dense_subtrees(t);
    std::vector<int> cover_count(t.leaves().size(), 0);
    for (NodeId root : roots) {
      for (NodeId lf : t.leaves_under(root))
        ++cover_count[static_cast<std::size_t>(t.leaf_index(lf))];
    }
    for (NodeId lf : t.leaves()) {
      bool dense = t.node(lf).weight.exponent < Rational{3, 2};
      CHECK(cover_count[static_cast<std::size_t>(t.leaf_index(lf))] == (dense ? 1 : 0));
    }
  }
}

TEST_CASE("vulnerability of subcritical leaves") {
  // "sub" shares the exponent-3/4 ancestor "m" with a critical leaf;
  // "far_sub" reaches critical leaves only through the exponent-5/4 root
  HierarchyTree t({internal("root", 1.0, {5, 4}, {1, 4}), internal("m", 1.0, {3, 4}, {2, 3}),
                   leaf("sub", 1.0, {3, 5}, 0.3), leaf("crit", 1.0, {1, 2}, 0.3),
                   leaf("far_sub", 1.0, {9, 10}, 0.4)},
                  2);
  REQUIRE(validate(t).empty());
  CHECK(is_vulnerable(t, 2));         // lca exponent 3/4 <= 1
  CHECK_FALSE(is_vulnerable(t, 4));   // 5/4 > 1
  CHECK_THROWS(is_vulnerable(t, 3));  // not subcritical

  // boundary: lca exponent exactly 1 still counts
  HierarchyTree t2({internal("root", 1.0, {1, 1}, {1, 2}), leaf("sub", 1.0, {3, 5}, 0.5),
                    leaf("crit", 1.0, {1, 2}, 0.5)},
                   2);
  CHECK(is_vulnerable(t2, 1));

  // no critical or supercritical leaf anywhere: nothing is vulnerable
  HierarchyTree t3({internal("root", 1.0, {11, 10}, {1, 2}), leaf("s1", 1.0, {19, 20}, 0.5),
                    leaf("s2", 1.0, {99, 100}, 0.5)},
                   2);
  REQUIRE(validate(t3).empty());
  CHECK_FALSE(is_vulnerable(t3, 1));
  CHECK_FALSE(is_vulnerable(t3, 2));
}

TEST_CASE("tree json round trip and diagnostics") {
  const std::string text = R"({
    "id": "root", "coeff": 1.0, "exp": [9, 8],
    "children": [
      {"id": "A", "coeff": 1.0, "exp": [1, 2], "v": 0.5},
      {"id": "B", "coeff": 0.8, "exp": [1, 2], "v": 0.5}
    ]
  })";
  HierarchyTree t = parse_tree_json(text, 2);
  CHECK(t.node_count() == 3);
  CHECK(t.leaves().size() == 2);
  CHECK(t.node(0).v == doctest::Approx(1.0));  // derived
  CHECK(validate(t).empty());
  HierarchyTree t2 = parse_tree_json(tree_to_json(t), 2);
  CHECK(t2.node(1).id == "A");
  CHECK(t2.node(2).weight.coeff == doctest::Approx(0.8));

  // malformed specs name the offending node
  CHECK_THROWS_WITH_AS(parse_tree_json(R"({"id": "r", "coeff": 1.0, "exp": [1, 2]})", 2),
                       doctest::Contains("leaf node 'r'"), TreeParseError);
  CHECK_THROWS_WITH_AS(
      parse_tree_json(
          R"({"id": "r", "coeff": 1.0, "exp": [9, 8], "v": 0.5,
              "children": [{"id": "a", "coeff": 1.0, "exp": [1, 2], "v": 1.0}]})",
          2),
      doctest::Contains("internal node 'r'"), TreeParseError);
  CHECK_THROWS_AS(parse_tree_json("{not json", 2), TreeParseError);
  CHECK_THROWS_AS(parse_tree_json(R"({"id": "r", "coeff": 1.0, "exp": [1, 0], "v": 1.0})", 2),
                  TreeParseError);
}
