#pragma once

#include <iosfwd>
#include <string>

#include "infmax/model.hpp"

namespace infmax {

// Thrown on malformed tree-spec files; message names the offending node.
struct TreeParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tree-spec format: one JSON object per node,
//   {"id": str, "coeff": num, "exp": [num, den], "v": num (leaves only),
//    "children": [...]}
// Parsing is purely structural; semantic checks live in validate().
HierarchyTree parse_tree_json(const std::string& text, int r);
HierarchyTree load_tree_file(const std::string& path, int r);

std::string tree_to_json(const HierarchyTree& tree);

}  // namespace infmax
