#include "infmax/tree_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace infmax {

namespace {

using nlohmann::json;

void parse_node(const json& j, std::vector<TreeNode>& nodes, NodeId parent) {
  if (!j.is_object()) throw TreeParseError("tree spec: node is not a JSON object");
  TreeNode nd;
  if (!j.contains("id") || !j.at("id").is_string())
    throw TreeParseError("tree spec: node missing string field 'id'");
  nd.id = j.at("id").get<std::string>();
  const std::string where = "node '" + nd.id + "'";
  if (!j.contains("coeff") || !j.at("coeff").is_number())
    throw TreeParseError("tree spec: " + where + " missing numeric 'coeff'");
  nd.weight.coeff = j.at("coeff").get<double>();
  if (!j.contains("exp") || !j.at("exp").is_array() || j.at("exp").size() != 2 ||
      !j.at("exp")[0].is_number_integer() || !j.at("exp")[1].is_number_integer())
    throw TreeParseError("tree spec: " + where + " needs 'exp': [num, den] with integers");
  try {
    nd.weight.exponent =
        Rational(j.at("exp")[0].get<std::int64_t>(), j.at("exp")[1].get<std::int64_t>());
  } catch (const std::exception& e) {
    throw TreeParseError("tree spec: " + where + ": " + e.what());
  }
  bool is_leaf = !j.contains("children") || j.at("children").empty();
  if (is_leaf) {
    if (!j.contains("v") || !j.at("v").is_number())
      throw TreeParseError("tree spec: leaf " + where + " missing numeric 'v'");
    nd.v = j.at("v").get<double>();
  } else if (j.contains("v")) {
    throw TreeParseError("tree spec: internal " + where +
                         " must not carry 'v' (derived from children)");
  }
  nd.parent = parent;
  NodeId my_id = static_cast<NodeId>(nodes.size());
  nodes.push_back(nd);
  if (!is_leaf) {
    if (!j.at("children").is_array())
      throw TreeParseError("tree spec: " + where + " 'children' must be an array");
    for (const auto& cj : j.at("children")) {
      NodeId child_id = static_cast<NodeId>(nodes.size());
      nodes[static_cast<std::size_t>(my_id)].children.push_back(child_id);
      parse_node(cj, nodes, my_id);
    }
  }
}

json node_to_json(const HierarchyTree& tree, NodeId id) {
  const auto& nd = tree.node(id);
  json j;
  j["id"] = nd.id;
  j["coeff"] = nd.weight.coeff;
  j["exp"] = {nd.weight.exponent.num, nd.weight.exponent.den};
  if (nd.is_leaf()) {
    j["v"] = nd.v;
  } else {
    j["children"] = json::array();
    for (NodeId c : nd.children) j["children"].push_back(node_to_json(tree, c));
  }
  return j;
}

}  // namespace

HierarchyTree parse_tree_json(const std::string& text, int r) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TreeParseError(std::string("tree spec: invalid JSON: ") + e.what());
  }
  std::vector<TreeNode> nodes;
  parse_node(j, nodes, kNoNode);
  return HierarchyTree(std::move(nodes), r);
}

HierarchyTree load_tree_file(const std::string& path, int r) {
  std::ifstream in(path);
  if (!in) throw TreeParseError("cannot open tree file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tree_json(ss.str(), r);
}

std::string tree_to_json(const HierarchyTree& tree) {
  return node_to_json(tree, tree.root()).dump(2);
}

}  // namespace infmax
