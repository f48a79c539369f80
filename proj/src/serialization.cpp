#include "tn/serialization.hpp"

namespace tn {

namespace cfg {

using nlohmann::json;

const json& require_field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "/" + key, "missing field");
  return *it;
}

std::size_t as_count(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0)
    return static_cast<std::size_t>(j.get<long long>());
  throw ConfigError(path, "expected a non-negative integer");
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::vector<std::size_t> as_index_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of indices");
  std::vector<std::size_t> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_count(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<double> as_number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(path + "/" + std::to_string(i), "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

}  // namespace cfg

using namespace cfg;

GroupSpec parse_group_spec(const json& j, const std::string& path) {
  GroupSpec spec;
  spec.kind = as_string(require_field(j, "kind", path), path + "/kind");
  if (spec.kind == "cyclic" || spec.kind == "explicit" || spec.kind == "rotation")
    spec.support = as_index_list(require_field(j, "support", path), path + "/support");
  if (spec.kind == "cyclic") return spec;
  if (spec.kind == "block_perm") {
    const json& blocks = require_field(j, "blocks", path);
    if (!blocks.is_array()) throw ConfigError(path + "/blocks", "expected an array of blocks");
    for (std::size_t b = 0; b < blocks.size(); ++b)
      spec.blocks.push_back(as_index_list(blocks[b], path + "/blocks/" + std::to_string(b)));
    return spec;
  }
  if (spec.kind == "product") {
    const json& factors = require_field(j, "factors", path);
    if (!factors.is_array()) throw ConfigError(path + "/factors", "expected an array of groups");
    for (std::size_t f = 0; f < factors.size(); ++f)
      spec.factors.push_back(parse_group_spec(factors[f], path + "/factors/" + std::to_string(f)));
    return spec;
  }
  if (spec.kind == "explicit") {
    const json& perms = require_field(j, "perms", path);
    if (!perms.is_array()) throw ConfigError(path + "/perms", "expected an array of permutations");
    for (std::size_t p = 0; p < perms.size(); ++p)
      spec.perms.push_back(as_index_list(perms[p], path + "/perms/" + std::to_string(p)));
    if (auto it = j.find("signs"); it != j.end()) {
      if (!it->is_array()) throw ConfigError(path + "/signs", "expected an array of sign lists");
      for (std::size_t p = 0; p < it->size(); ++p)
        spec.signs.push_back(as_number_list((*it)[p], path + "/signs/" + std::to_string(p)));
    }
    return spec;
  }
  if (spec.kind == "rotation") {
    spec.order = as_count(require_field(j, "order", path), path + "/order");
    return spec;
  }
  throw ConfigError(path + "/kind", "unknown group kind '" + spec.kind + "'");
}

FiniteUnitaryGroup GroupSpec::build(std::size_t ambient_dim) const {
  if (kind == "cyclic") return make_cyclic_translation_group(SupportSet(support, ambient_dim));
  if (kind == "block_perm") {
    std::vector<SupportSet> bs;
    for (const auto& b : blocks) bs.emplace_back(b, ambient_dim);
    return make_block_permutation_group(bs);
  }
  if (kind == "product") {
    std::vector<FiniteUnitaryGroup> fs;
    for (const auto& f : factors) fs.push_back(f.build(ambient_dim));
    return make_product_group(fs);
  }
  if (kind == "explicit")
    return make_explicit_group(SupportSet(support, ambient_dim), perms, signs);
  if (kind == "rotation")
    return make_planar_rotation_group(SupportSet(support, ambient_dim), order);
  throw ConfigError("group/kind", "unknown group kind '" + kind + "'");
}

json GroupSpec::to_json() const {
  json j;
  j["kind"] = kind;
  if (kind == "cyclic" || kind == "explicit" || kind == "rotation") j["support"] = support;
  if (kind == "block_perm") j["blocks"] = blocks;
  if (kind == "product") {
    j["factors"] = json::array();
    for (const auto& f : factors) j["factors"].push_back(f.to_json());
  }
  if (kind == "explicit") {
    j["perms"] = perms;
    if (!signs.empty()) j["signs"] = signs;
  }
  if (kind == "rotation") j["order"] = order;
  return j;
}

NodeSpec parse_node_spec(const json& j, const std::string& path) {
  NodeSpec spec;
  spec.support = as_index_list(require_field(j, "support", path), path + "/support");
  spec.group = parse_group_spec(require_field(j, "group", path), path + "/group");
  spec.pooling = as_string(require_field(j, "pooling", path), path + "/pooling");
  if (spec.pooling != "mean" && spec.pooling != "max")
    throw ConfigError(path + "/pooling", "expected \"mean\" or \"max\"");
  spec.activation = as_string(require_field(j, "activation", path), path + "/activation");
  const json& templates = require_field(j, "templates", path);
  if (!templates.is_array() || templates.empty())
    throw ConfigError(path + "/templates", "expected a non-empty array of templates");
  for (std::size_t t = 0; t < templates.size(); ++t)
    spec.templates.push_back(as_number_list(templates[t], path + "/templates/" + std::to_string(t)));
  return spec;
}

TNNode NodeSpec::build(std::size_t ambient_dim) const {
  const SupportSet sup(support, ambient_dim);
  const FiniteUnitaryGroup g = group.build(ambient_dim);
  std::vector<TemplateSet> channels;
  channels.reserve(templates.size());
  for (const auto& t : templates) channels.push_back(make_template_set(t, g));
  return TNNode(sup, std::move(channels), parse_pooling(pooling), Activation::parse(activation));
}

json NodeSpec::to_json() const {
  json j;
  j["support"] = support;
  j["group"] = group.to_json();
  j["pooling"] = pooling;
  j["activation"] = activation;
  j["templates"] = templates;
  return j;
}

NetworkSpec parse_network_spec(const json& j, const std::string& path) {
  NetworkSpec spec;
  spec.input_dim = as_count(require_field(j, "input_dim", path), path + "/input_dim");
  if (auto it = j.find("covering"); it != j.end()) {
    if (!it->is_boolean()) throw ConfigError(path + "/covering", "expected a boolean");
    spec.covering = it->get<bool>();
  }
  const json& layers = require_field(j, "layers", path);
  if (!layers.is_array() || layers.empty())
    throw ConfigError(path + "/layers", "expected a non-empty array of layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string lpath = path + "/layers/" + std::to_string(l);
    if (!layers[l].is_array() || layers[l].empty())
      throw ConfigError(lpath, "expected a non-empty array of nodes");
    std::vector<NodeSpec> nodes;
    for (std::size_t i = 0; i < layers[l].size(); ++i)
      nodes.push_back(parse_node_spec(layers[l][i], lpath + "/" + std::to_string(i)));
    spec.layers.push_back(std::move(nodes));
  }
  const json& hier = require_field(j, "hierarchy", path);
  if (!hier.is_array()) throw ConfigError(path + "/hierarchy", "expected an array of child counts");
  if (hier.size() != spec.layers.size() - 1)
    throw ConfigError(path + "/hierarchy", "needs one entry per layer above the first");
  for (std::size_t k = 0; k < hier.size(); ++k)
    spec.hierarchy.push_back(as_index_list(hier[k], path + "/hierarchy/" + std::to_string(k)));
  return spec;
}

TNNetwork NetworkSpec::build() const {
  if (layers.empty()) throw ConfigError("network/layers", "needs at least one layer");
  std::vector<std::vector<TNNode>> built;
  std::size_t ambient = input_dim;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    std::vector<TNNode> row;
    std::size_t features = 0;
    for (const auto& spec : layers[l]) {
      row.push_back(spec.build(ambient));
      features += row.back().channel_count();
    }
    built.push_back(std::move(row));
    ambient = features;
  }

  std::vector<std::vector<std::vector<std::size_t>>> children;
  for (std::size_t k = 0; k < hierarchy.size(); ++k) {
    std::vector<std::vector<std::size_t>> lists;
    std::size_t next = 0;
    for (std::size_t count : hierarchy[k]) {
      std::vector<std::size_t> kids(count);
      for (std::size_t c = 0; c < count; ++c) kids[c] = next++;
      lists.push_back(std::move(kids));
    }
    children.push_back(std::move(lists));
  }
  return TNNetwork(input_dim, std::move(built), std::move(children), covering);
}

json NetworkSpec::to_json() const {
  json j;
  j["input_dim"] = input_dim;
  j["covering"] = covering;
  j["layers"] = json::array();
  for (const auto& layer : layers) {
    json row = json::array();
    for (const auto& node : layer) row.push_back(node.to_json());
    j["layers"].push_back(row);
  }
  j["hierarchy"] = hierarchy;
  return j;
}

}  // namespace tn
