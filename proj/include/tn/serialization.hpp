#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "tn/network.hpp"

namespace tn {

/// Buildable description of a group. JSON shape:
///   {"kind":"cyclic",     "support":[...]}
///   {"kind":"block_perm", "blocks":[[...],...]}
///   {"kind":"product",    "factors":[<group>,...]}
///   {"kind":"explicit",   "support":[...], "perms":[[...],...], "signs":[[...],...]?}
///   {"kind":"rotation",   "support":[i,j], "order":n}
/// The ambient dimension comes from the surrounding context (network input
/// dimension or feature dimension), not from the group itself.
struct GroupSpec {
  std::string kind;
  std::vector<std::size_t> support;
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<GroupSpec> factors;
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::vector<double>> signs;
  std::size_t order = 0;

  FiniteUnitaryGroup build(std::size_t ambient_dim) const;
  nlohmann::json to_json() const;
};

/// {"support":[...], "group":<group>, "pooling":"mean"|"max",
///  "activation":"relu"|"fracpow:<d>"|"identity", "templates":[[...],...]}
/// One template per channel; templates are base templates whose orbits the
/// node caches.
struct NodeSpec {
  std::vector<std::size_t> support;
  GroupSpec group;
  std::string pooling = "mean";
  std::string activation = "relu";
  std::vector<std::vector<double>> templates;

  TNNode build(std::size_t ambient_dim) const;
  nlohmann::json to_json() const;
};

/// {"input_dim":n, "covering":bool?, "layers":[[<node>,...],...],
///  "hierarchy":[[c_0,c_1,...],...]}
/// hierarchy[k][i] is the number of layer-k nodes feeding node i of layer
/// k+1; children are assigned consecutively in node order. Layer-0 node
/// supports are input coordinates; upper supports are feature coordinates
/// (channels concatenated in node order).
struct NetworkSpec {
  std::size_t input_dim = 0;
  bool covering = true;
  std::vector<std::vector<NodeSpec>> layers;
  std::vector<std::vector<std::size_t>> hierarchy;

  TNNetwork build() const;
  nlohmann::json to_json() const;
};

/// Parsers validate shape and types; failures throw ConfigError whose field
/// names the offending JSON path.
GroupSpec parse_group_spec(const nlohmann::json& j, const std::string& path);
NodeSpec parse_node_spec(const nlohmann::json& j, const std::string& path);
NetworkSpec parse_network_spec(const nlohmann::json& j, const std::string& path);

/// Shared field extraction; every reader throws ConfigError naming the JSON
/// path on a shape or type mismatch.
namespace cfg {
const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                    const std::string& path);
std::size_t as_count(const nlohmann::json& j, const std::string& path);
double as_number(const nlohmann::json& j, const std::string& path);
std::string as_string(const nlohmann::json& j, const std::string& path);
std::vector<std::size_t> as_index_list(const nlohmann::json& j, const std::string& path);
std::vector<double> as_number_list(const nlohmann::json& j, const std::string& path);
}  // namespace cfg

}  // namespace tn
