#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tn/node.hpp"

namespace tn {

/// Input-space receptive fields of every node, layer by layer, plus the
/// child lists that produced them. fields[l][i] lists the input coordinates
/// that feed node i of layer l; for l >= 1 it is the concatenation of the
/// children's fields.
struct SupportHierarchy {
  std::vector<std::vector<SupportSet>> fields;
  /// children[l][i]: indices of the layer-(l-1) nodes feeding node (l, i).
  /// Empty lists at l = 0.
  std::vector<std::vector<std::vector<std::size_t>>> children;
};

/// Layered composition of nodes. Layer 0 nodes read the raw input through
/// their supports; a node at layer l >= 1 reads the concatenated layer-(l-1)
/// feature vector, where node j's channels occupy one contiguous run in node
/// order. A node's feature-space support must be exactly the run covered by
/// its children, and children partition the previous layer in order.
class TNNetwork {
 public:
  /// `children[k]` describes layer k+1: one list of consecutive layer-k node
  /// indices per node. With `require_covering` the top layer must be a single
  /// node whose receptive field is the whole input.
  TNNetwork(std::size_t input_dim, std::vector<std::vector<TNNode>> layers,
            std::vector<std::vector<std::vector<std::size_t>>> children,
            bool require_covering = true);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t depth() const { return layers_.size(); }
  const std::vector<std::vector<TNNode>>& layers() const { return layers_; }
  const SupportHierarchy& hierarchy() const { return hierarchy_; }
  std::size_t feature_dim(std::size_t layer) const { return feature_dims_[layer]; }
  /// The activation shared by the certified configurations; reads node (0,0).
  const Activation& shared_activation() const { return layers_[0][0].activation(); }

  /// All per-layer feature vectors, input patches first, top output last.
  std::vector<std::vector<double>> forward(std::span<const double> x) const;
  std::vector<double> top_output(std::span<const double> x) const;

 private:
  std::size_t input_dim_;
  std::vector<std::vector<TNNode>> layers_;
  SupportHierarchy hierarchy_;
  std::vector<std::size_t> feature_dims_;
};

/// One input-space element per layer: stages[0] is applied last, the final
/// stage first, with the activation between consecutive stages:
///   stages[0](η(stages[1](... η(stages[L-1](x)) ...)))
struct TransformSpec {
  std::vector<GroupElement> stages;
};

std::vector<double> apply_transform(const TransformSpec& spec, std::span<const double> x,
                                    const Activation& eta);

/// The group the stage-l element of a TransformSpec is drawn from, realized
/// in input space: stage 0 is the product of the layer-0 node groups; stage
/// l >= 1 is the product, over layer-l nodes, of whole-block permutations of
/// their children's receptive fields.
FiniteUnitaryGroup layer_stage_group(const TNNetwork& net, std::size_t layer);

enum class TemplateLearningMode { orbit_sample, given_template };

/// orbit_sample: `layer_inputs` holds one orbit per channel, |G| vectors per
/// orbit in the group's element order; the base template is recovered from
/// entry 0 and the whole orbit is revalidated within 1e-12 (OrbitMismatch on
/// failure). given_template: each input is a base template.
std::vector<TemplateSet> learn_layer_templates(const std::vector<std::vector<double>>& layer_inputs,
                                               const FiniteUnitaryGroup& group,
                                               TemplateLearningMode mode);

/// ‖features(g2(x)) − g'(features(x))‖∞ over the layer-0 feature vector,
/// where g' is the feature permutation induced by g2's permutation of the
/// layer-0 supports. Throws UnsupportedTransform unless g2 is permutation
/// form and maps every layer-0 support onto a layer-0 support of matching
/// channel count. Zero certifies that the induced g' exists and is realized
/// by feature relabeling.
double feature_covariance_deficit(const TNNetwork& net, std::span<const double> x,
                                  const GroupElement& g2);

/// max over top channels of |top(apply_transform(spec, x, η)) − top(x)| with
/// η = the network's shared activation. Stage elements must act on the
/// network's covered input coordinates (UnsupportedTransform otherwise).
double nonlinear_invariance_deficit(const TNNetwork& net, std::span<const double> x,
                                    const TransformSpec& spec);

struct HierarchyCost {
  std::uint64_t flat;          // Π |G_j|
  std::uint64_t hierarchical;  // Σ |G_j|
};

/// Exact integer cost of integrating over the composite group versus layer
/// by layer; throws Overflow if either count leaves uint64 range.
HierarchyCost hierarchy_cost(const std::vector<std::uint64_t>& group_sizes);

}  // namespace tn
