#pragma once

#include <span>
#include <string>
#include <vector>

#include "tn/activation.hpp"
#include "tn/group.hpp"

namespace tn {

enum class Pooling { mean, max };

Pooling parse_pooling(const std::string& text);
std::string pooling_name(Pooling pooling);

/// A base template together with its full orbit under a group, cached at
/// construction so that node evaluation never regenerates it. Entries are
/// support-local vectors.
class TemplateSet {
 public:
  const std::vector<double>& base() const { return base_; }
  const FiniteUnitaryGroup& group() const { return group_; }
  const std::vector<std::vector<double>>& transformed() const { return transformed_; }
  /// All-zero base templates are legal but worth surfacing in reports.
  bool is_zero() const { return zero_; }

 private:
  friend TemplateSet make_template_set(std::vector<double> t, FiniteUnitaryGroup group);
  TemplateSet() : group_(make_cyclic_translation_group(SupportSet::full(1))) {}

  std::vector<double> base_;
  FiniteUnitaryGroup group_;
  std::vector<std::vector<double>> transformed_;
  bool zero_ = false;
};

/// Caches {g(t) : g in G} in element order and checks that the orbit
/// preserves the template's norm.
TemplateSet make_template_set(std::vector<double> t, FiniteUnitaryGroup group);

/// One network node: per-channel template sets over a shared support, a
/// pooling mode over the group orbit, and a pointwise activation.
/// Channel c of the output is η(pool_{g∈G_c} ⟨x|_Λ, g(t_c)⟩).
class TNNode {
 public:
  TNNode(SupportSet support, std::vector<TemplateSet> channels, Pooling pooling,
         Activation activation);

  const SupportSet& support() const { return support_; }
  const std::vector<TemplateSet>& channels() const { return channels_; }
  std::size_t channel_count() const { return channels_.size(); }
  Pooling pooling() const { return pooling_; }
  const Activation& activation() const { return activation_; }

  /// Writes one value per channel; allocates nothing. `x` is ambient.
  void output_into(std::span<const double> x, std::span<double> out) const;
  std::vector<double> output(std::span<const double> x) const;

 private:
  SupportSet support_;
  std::vector<TemplateSet> channels_;
  Pooling pooling_;
  Activation activation_;
};

std::vector<double> node_output(const TNNode& node, std::span<const double> x);

/// max over g in probe and over channels of |output(x) − output(g(x))|.
/// With probe = the node's own group this certifies the node's invariance;
/// with a foreign probe it measures how badly invariance fails.
double invariance_deficit(const TNNode& node, std::span<const double> x,
                          const FiniteUnitaryGroup& probe);

}  // namespace tn
