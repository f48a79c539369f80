#include "tn/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tn {

TNNetwork::TNNetwork(std::size_t input_dim, std::vector<std::vector<TNNode>> layers,
                     std::vector<std::vector<std::vector<std::size_t>>> children,
                     bool require_covering)
    : input_dim_(input_dim), layers_(std::move(layers)) {
  if (layers_.empty()) throw EmptyNode("a network needs at least one layer");
  for (const auto& layer : layers_)
    if (layer.empty()) throw EmptyNode("a layer needs at least one node");
  if (children.size() != layers_.size() - 1)
    throw DimensionError("child map must describe every layer above the first");

  feature_dims_.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    feature_dims_[l] = 0;
    for (const auto& node : layers_[l]) feature_dims_[l] += node.channel_count();
  }

  hierarchy_.fields.resize(layers_.size());
  hierarchy_.children.resize(layers_.size());
  hierarchy_.children[0].assign(layers_[0].size(), {});
  for (std::size_t i = 0; i < layers_[0].size(); ++i) {
    const SupportSet& s = layers_[0][i].support();
    if (s.ambient_dim() != input_dim_)
      throw DimensionError("layer-0 node support does not live in the input space");
    for (std::size_t j = 0; j < i; ++j)
      if (!s.disjoint_with(layers_[0][j].support()))
        throw OverlappingSupports("layer-0 node supports overlap");
    hierarchy_.fields[0].push_back(s);
  }

  for (std::size_t l = 1; l < layers_.size(); ++l) {
    const auto& kid_lists = children[l - 1];
    if (kid_lists.size() != layers_[l].size())
      throw DimensionError("child map size does not match the layer's node count");

    std::vector<std::size_t> offsets(layers_[l - 1].size(), 0);
    for (std::size_t j = 1; j < offsets.size(); ++j)
      offsets[j] = offsets[j - 1] + layers_[l - 1][j - 1].channel_count();

    std::size_t next_child = 0;
    for (std::size_t i = 0; i < layers_[l].size(); ++i) {
      const auto& kids = kid_lists[i];
      if (kids.empty()) throw EmptyNode("a node above the first layer needs children");
      for (std::size_t k : kids)
        if (k != next_child++)
          throw InvalidSupport("children must partition the previous layer in node order");

      std::size_t span = 0;
      std::vector<SupportSet> kid_fields;
      for (std::size_t k : kids) {
        span += layers_[l - 1][k].channel_count();
        kid_fields.push_back(hierarchy_.fields[l - 1][k]);
      }
      const SupportSet expected =
          SupportSet::range(offsets[kids.front()], span, feature_dims_[l - 1]);
      if (!(layers_[l][i].support() == expected))
        throw InvalidSupport("node support must address exactly its children's channels");

      hierarchy_.fields[l].push_back(concat_supports(kid_fields));
      hierarchy_.children[l].push_back(kids);
    }
    if (next_child != layers_[l - 1].size())
      throw InvalidSupport("every node needs a parent in the next layer");
  }

  if (require_covering) {
    if (layers_.back().size() != 1)
      throw InvalidSupport("a covering network needs a single top node");
    if (hierarchy_.fields.back().front().size() != input_dim_)
      throw InvalidSupport("the top receptive field must cover the whole input");
  }
}

std::vector<std::vector<double>> TNNetwork::forward(std::span<const double> x) const {
  if (x.size() != input_dim_) throw DimensionError("input length does not match the network");
  std::vector<std::vector<double>> feats(layers_.size());
  std::span<const double> cur = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    feats[l].resize(feature_dims_[l]);
    std::size_t off = 0;
    for (const auto& node : layers_[l]) {
      node.output_into(cur, std::span<double>(feats[l]).subspan(off, node.channel_count()));
      off += node.channel_count();
    }
    cur = feats[l];
  }
  return feats;
}

std::vector<double> TNNetwork::top_output(std::span<const double> x) const {
  return forward(x).back();
}

std::vector<double> apply_transform(const TransformSpec& spec, std::span<const double> x,
                                    const Activation& eta) {
  if (spec.stages.empty()) throw DimensionError("a transform needs at least one stage");
  std::vector<double> y = act(spec.stages.back(), x);
  for (std::size_t i = spec.stages.size() - 1; i-- > 0;) {
    y = eta.apply(y);
    y = act(spec.stages[i], y);
  }
  return y;
}

FiniteUnitaryGroup layer_stage_group(const TNNetwork& net, std::size_t layer) {
  if (layer >= net.depth()) throw DimensionError("no such layer");
  std::vector<FiniteUnitaryGroup> factors;
  if (layer == 0) {
    for (const auto& node : net.layers()[0]) factors.push_back(node.channels().front().group());
  } else {
    for (std::size_t i = 0; i < net.layers()[layer].size(); ++i) {
      std::vector<SupportSet> blocks;
      for (std::size_t k : net.hierarchy().children[layer][i])
        blocks.push_back(net.hierarchy().fields[layer - 1][k]);
      factors.push_back(make_block_permutation_group(blocks));
    }
  }
  if (factors.size() == 1) return factors.front();
  return make_product_group(factors);
}

std::vector<TemplateSet> learn_layer_templates(const std::vector<std::vector<double>>& layer_inputs,
                                               const FiniteUnitaryGroup& group,
                                               TemplateLearningMode mode) {
  std::vector<TemplateSet> out;
  if (mode == TemplateLearningMode::given_template) {
    if (layer_inputs.empty()) throw DimensionError("need at least one base template");
    for (const auto& t : layer_inputs) out.push_back(make_template_set(t, group));
    return out;
  }

  const std::size_t n = group.size();
  if (layer_inputs.empty() || layer_inputs.size() % n != 0)
    throw DimensionError("orbit samples must come in whole orbits of the declared group");
  for (std::size_t c = 0; c * n < layer_inputs.size(); ++c) {
    const auto& first = layer_inputs[c * n];
    if (first.size() != group.support().size())
      throw DimensionError("orbit sample length does not match the group support");
    // Entry 0 is elements[0](t); undo that element to recover the base.
    const std::vector<double> base =
        act_local(group.element(group.inverse_index(0)), first);
    TemplateSet set = make_template_set(base, group);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& expected = set.transformed()[i];
      const auto& observed = layer_inputs[c * n + i];
      if (observed.size() != expected.size())
        throw DimensionError("orbit sample length does not match the group support");
      for (std::size_t j = 0; j < expected.size(); ++j)
        if (std::abs(expected[j] - observed[j]) > 1e-12)
          throw OrbitMismatch("observed sequence is not an orbit of the declared group (entry " +
                              std::to_string(c * n + i) + ")");
    }
    out.push_back(std::move(set));
  }
  return out;
}

namespace {

std::vector<double> layer0_features(const TNNetwork& net, std::span<const double> x) {
  std::vector<double> f(net.feature_dim(0));
  std::size_t off = 0;
  for (const auto& node : net.layers()[0]) {
    node.output_into(x, std::span<double>(f).subspan(off, node.channel_count()));
    off += node.channel_count();
  }
  return f;
}

}  // namespace

double feature_covariance_deficit(const TNNetwork& net, std::span<const double> x,
                                  const GroupElement& g2) {
  if (net.depth() < 2)
    throw UnsupportedTransform("feature covariance needs a network of depth at least two");
  if (!g2.action.is_permutation())
    throw UnsupportedTransform("only permutation-form transforms are certified here");
  if (x.size() != net.input_dim()) throw DimensionError("input length does not match the network");

  // Destination of every ambient coordinate under g2.
  std::vector<std::size_t> amb(net.input_dim());
  std::iota(amb.begin(), amb.end(), 0);
  const auto& sup = g2.support.indices();
  for (std::size_t i : sup)
    if (i >= net.input_dim()) throw DimensionError("transform support exceeds the input space");
  for (std::size_t i = 0; i < sup.size(); ++i) amb[sup[i]] = sup[g2.action.dest()[i]];

  const auto& nodes = net.layers()[0];
  const auto& fields = net.hierarchy().fields[0];
  std::vector<std::vector<std::size_t>> sorted_fields(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    sorted_fields[j] = fields[j].indices();
    std::sort(sorted_fields[j].begin(), sorted_fields[j].end());
  }

  // Node j's support must land exactly on some node's support.
  std::vector<std::size_t> sigma(nodes.size());
  std::vector<bool> taken(nodes.size(), false);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    std::vector<std::size_t> image;
    image.reserve(fields[j].size());
    for (std::size_t idx : fields[j].indices()) image.push_back(amb[idx]);
    std::sort(image.begin(), image.end());
    std::size_t match = nodes.size();
    for (std::size_t j2 = 0; j2 < nodes.size(); ++j2)
      if (!taken[j2] && sorted_fields[j2] == image) {
        match = j2;
        break;
      }
    if (match == nodes.size())
      throw UnsupportedTransform("transform does not map node supports onto node supports");
    if (nodes[match].channel_count() != nodes[j].channel_count())
      throw UnsupportedTransform("matched nodes disagree on channel count");
    sigma[j] = match;
    taken[match] = true;
  }

  std::vector<std::size_t> offsets(nodes.size(), 0);
  for (std::size_t j = 1; j < nodes.size(); ++j)
    offsets[j] = offsets[j - 1] + nodes[j - 1].channel_count();

  const std::vector<double> fx = layer0_features(net, x);
  const std::vector<double> fgx = layer0_features(net, act(g2, x));
  double worst = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j)
    for (std::size_t c = 0; c < nodes[j].channel_count(); ++c)
      worst = std::max(worst, std::abs(fgx[offsets[sigma[j]] + c] - fx[offsets[j] + c]));
  return worst;
}

double nonlinear_invariance_deficit(const TNNetwork& net, std::span<const double> x,
                                    const TransformSpec& spec) {
  if (spec.stages.size() != net.depth())
    throw UnsupportedTransform("spec needs exactly one stage per layer");
  const SupportSet covered = concat_supports(net.hierarchy().fields[0]);
  for (const auto& stage : spec.stages)
    if (!(stage.support == covered))
      throw UnsupportedTransform("stage support does not match the network's covered coordinates");

  const std::vector<double> base = net.top_output(x);
  const std::vector<double> moved =
      net.top_output(apply_transform(spec, x, net.shared_activation()));
  double worst = 0.0;
  for (std::size_t c = 0; c < base.size(); ++c)
    worst = std::max(worst, std::abs(base[c] - moved[c]));
  return worst;
}

HierarchyCost hierarchy_cost(const std::vector<std::uint64_t>& group_sizes) {
  if (group_sizes.empty()) throw Error("cost needs at least one group size");
  HierarchyCost cost{1, 0};
  for (std::uint64_t s : group_sizes) {
    if (s == 0) throw Error("group sizes must be at least 1");
    if (__builtin_mul_overflow(cost.flat, s, &cost.flat))
      throw Overflow("flat cost exceeds the 64-bit range");
    if (__builtin_add_overflow(cost.hierarchical, s, &cost.hierarchical))
      throw Overflow("hierarchical cost exceeds the 64-bit range");
  }
  return cost;
}

}  // namespace tn
