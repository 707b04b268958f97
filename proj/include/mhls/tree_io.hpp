#pragma once

// JSON documents for trees and simple functions.
//
//   tree:     node = {"p": <float, optional at the root>, "children": [node, ...]}
//   function: {"level": n, "values": [...]} in level order
//
// Synthetic leaf-extension atoms are not written; they are rebuilt on load.

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "mhls/simple_function.hpp"

namespace mhls {

nlohmann::ordered_json tree_to_json(const FiltrationTree& tree);
TreePtr tree_from_json(const nlohmann::json& doc);

std::string serialize_tree(const FiltrationTree& tree);
TreePtr deserialize_tree(std::string_view text);

nlohmann::ordered_json function_to_json(const SimpleFunction& f);
SimpleFunction function_from_json(const TreePtr& tree, const nlohmann::json& doc);

std::string serialize_function(const SimpleFunction& f);
SimpleFunction deserialize_function(const TreePtr& tree, std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mhls
