#include "mhls/tree_io.hpp"

#include <fstream>
#include <sstream>

namespace mhls {

namespace {

nlohmann::ordered_json node_to_json(const NodeSpec& node, bool is_root) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  if (!is_root) out["p"] = node.p;
  if (!node.children.empty()) {
    auto& kids = out["children"] = nlohmann::ordered_json::array();
    for (const auto& child : node.children) kids.push_back(node_to_json(child, false));
  }
  return out;
}

NodeSpec node_from_json(const nlohmann::json& doc, bool is_root) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "tree node must be an object");
  NodeSpec node;
  if (auto it = doc.find("p"); it != doc.end()) {
    if (!it->is_number()) throw Error(ErrorCode::ParseError, "\"p\" must be a number");
    node.p = it->get<double>();
  } else if (!is_root) {
    throw Error(ErrorCode::ParseError, "non-root node without \"p\"");
  }
  if (auto it = doc.find("children"); it != doc.end()) {
    if (!it->is_array()) throw Error(ErrorCode::ParseError, "\"children\" must be an array");
    for (const auto& child : *it) node.children.push_back(node_from_json(child, false));
  }
  return node;
}

nlohmann::json parse(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

nlohmann::ordered_json tree_to_json(const FiltrationTree& tree) {
  return node_to_json(tree.to_nodes(), true);
}

TreePtr tree_from_json(const nlohmann::json& doc) {
  const NodeSpec root = node_from_json(doc, true);
  return std::make_shared<const FiltrationTree>(
      FiltrationTree::from_nodes(root, ErrorCode::InvariantViolation));
}

std::string serialize_tree(const FiltrationTree& tree) { return tree_to_json(tree).dump(); }

TreePtr deserialize_tree(std::string_view text) { return tree_from_json(parse(text)); }

nlohmann::ordered_json function_to_json(const SimpleFunction& f) {
  nlohmann::ordered_json out;
  out["level"] = f.level();
  out["values"] = std::vector<double>(f.values().begin(), f.values().end());
  return out;
}

SimpleFunction function_from_json(const TreePtr& tree, const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("level") || !doc.contains("values")) {
    throw Error(ErrorCode::ParseError, "function document needs \"level\" and \"values\"");
  }
  try {
    const int level = doc.at("level").get<int>();
    auto values = doc.at("values").get<std::vector<double>>();
    if (level < 0 || level > tree->depth()) {
      throw Error(ErrorCode::LevelOutOfRange, "function level outside the tree");
    }
    return SimpleFunction(tree, level, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string serialize_function(const SimpleFunction& f) { return function_to_json(f).dump(); }

SimpleFunction deserialize_function(const TreePtr& tree, std::string_view text) {
  return function_from_json(tree, parse(text));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IOError, "write failed for " + path.string());
}

}  // namespace mhls
