#include "tn/node.hpp"

#include <algorithm>
#include <cmath>

namespace tn {

Pooling parse_pooling(const std::string& text) {
  if (text == "mean") return Pooling::mean;
  if (text == "max") return Pooling::max;
  throw ConfigError("pooling", "unknown pooling '" + text + "'");
}

std::string pooling_name(Pooling pooling) { return pooling == Pooling::mean ? "mean" : "max"; }

TemplateSet make_template_set(std::vector<double> t, FiniteUnitaryGroup group) {
  if (t.size() != group.support().size())
    throw DimensionError("template length does not match the group support");
  for (double v : t)
    if (!std::isfinite(v)) throw InvalidTemplate("template entries must be finite");

  TemplateSet set;
  set.base_ = std::move(t);
  set.zero_ = std::all_of(set.base_.begin(), set.base_.end(), [](double v) { return v == 0.0; });

  double base_norm2 = 0.0;
  for (double v : set.base_) base_norm2 += v * v;
  const double base_norm = std::sqrt(base_norm2);

  set.transformed_.reserve(group.size());
  for (const auto& g : group.elements()) {
    std::vector<double> gt = act_local(g, set.base_);
    double norm2 = 0.0;
    for (double v : gt) norm2 += v * v;
    if (std::abs(std::sqrt(norm2) - base_norm) > 1e-12)
      throw InvalidTemplate("orbit member changes the template norm");
    set.transformed_.push_back(std::move(gt));
  }
  set.group_ = std::move(group);
  return set;
}

TNNode::TNNode(SupportSet support, std::vector<TemplateSet> channels, Pooling pooling,
               Activation activation)
    : support_(std::move(support)),
      channels_(std::move(channels)),
      pooling_(pooling),
      activation_(activation) {
  if (channels_.empty()) throw EmptyNode("a node needs at least one channel");
  for (const auto& c : channels_)
    if (!(c.group().support() == support_))
      throw InvalidSupport("channel template set does not live on the node support");
}

void TNNode::output_into(std::span<const double> x, std::span<double> out) const {
  if (out.size() != channels_.size()) throw DimensionError("output span has wrong channel count");
  const auto& idx = support_.indices();
  for (std::size_t i : idx)
    if (i >= x.size()) throw DimensionError("input too short for node support");

  for (std::size_t c = 0; c < channels_.size(); ++c) {
    const auto& orbit = channels_[c].transformed();
    double pooled = 0.0;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      const double* t = orbit[k].data();
      double dot = 0.0;
      for (std::size_t i = 0; i < idx.size(); ++i) dot += x[idx[i]] * t[i];
      if (pooling_ == Pooling::mean)
        pooled += dot;
      else
        pooled = (k == 0) ? dot : std::max(pooled, dot);
    }
    if (pooling_ == Pooling::mean) pooled /= static_cast<double>(orbit.size());
    out[c] = activation_(pooled);
  }
}

std::vector<double> TNNode::output(std::span<const double> x) const {
  std::vector<double> out(channels_.size());
  output_into(x, out);
  return out;
}

std::vector<double> node_output(const TNNode& node, std::span<const double> x) {
  return node.output(x);
}

double invariance_deficit(const TNNode& node, std::span<const double> x,
                          const FiniteUnitaryGroup& probe) {
  if (!(probe.support() == node.support()))
    throw DimensionError("probe group does not act on the node support");
  const std::vector<double> base = node.output(x);
  std::vector<double> moved(base.size());
  double worst = 0.0;
  for (const auto& g : probe.elements()) {
    const std::vector<double> gx = act(g, x);
    node.output_into(gx, moved);
    for (std::size_t c = 0; c < base.size(); ++c)
      worst = std::max(worst, std::abs(base[c] - moved[c]));
  }
  return worst;
}

}  // namespace tn
