#include "tn/activation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "tn/rng.hpp"

namespace tn {

Activation Activation::hard_relu() { return Activation{}; }

Activation Activation::frac_power(double d) {
  if (!(d > 0.0 && d <= 1.0)) throw Error("frac_power degree must lie in (0, 1]");
  Activation a;
  a.kind_ = Kind::frac_power;
  a.degree_ = d;
  return a;
}

Activation Activation::identity() {
  Activation a;
  a.kind_ = Kind::identity;
  return a;
}

Activation Activation::parse(const std::string& text) {
  if (text == "relu") return hard_relu();
  if (text == "identity") return identity();
  if (text.rfind("fracpow:", 0) == 0) {
    const std::string num = text.substr(8);
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), d);
    if (ec != std::errc{} || ptr != num.data() + num.size())
      throw ConfigError("activation", "cannot parse degree in '" + text + "'");
    if (!(d > 0.0 && d <= 1.0)) throw ConfigError("activation", "degree must lie in (0, 1]");
    return frac_power(d);
  }
  throw ConfigError("activation", "unknown activation '" + text + "'");
}

std::string Activation::name() const {
  switch (kind_) {
    case Kind::hard_relu:
      return "relu";
    case Kind::identity:
      return "identity";
    case Kind::frac_power: {
      char buf[32];
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), degree_);
      return "fracpow:" + std::string(buf, ptr);
    }
  }
  return "relu";
}

double Activation::operator()(double v) const {
  if (!std::isfinite(v)) throw Error("activation input must be finite");
  switch (kind_) {
    case Kind::hard_relu:
      return v > 0.0 ? v : 0.0;
    case Kind::frac_power:
      return v > 0.0 ? std::pow(v, degree_) : 0.0;
    case Kind::identity:
      return v;
  }
  return 0.0;
}

std::vector<double> Activation::apply(std::span<const double> x) const {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (*this)(x[i]);
  return out;
}

double stability_deficit(const Activation& eta, std::span<const double> grid) {
  if (grid.empty()) throw Error("stability deficit needs a non-empty grid");
  double worst = 0.0;
  for (double v : grid) {
    const double once = eta(v);
    worst = std::max(worst, std::abs(eta(once) - once));
  }
  return worst;
}

namespace {

// Inner product with the pairwise products summed in ascending value order.
// Identical multisets of products then sum to identical doubles, which is
// what makes the permutation-group deficit exactly zero.
double canonical_dot(std::span<const double> a, std::span<const double> b) {
  std::vector<double> products(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) products[i] = a[i] * b[i];
  std::sort(products.begin(), products.end());
  double acc = 0.0;
  for (double p : products) acc += p;
  return acc;
}

}  // namespace

double unitarity_deficit(const Activation& eta, const FiniteUnitaryGroup& group,
                         std::span<const double> x, std::span<const double> y) {
  const std::size_t dim = group.support().size();
  if (x.size() != dim || y.size() != dim)
    throw DimensionError("unitarity deficit needs support-local vectors");
  const std::vector<double> ex = eta.apply(x);
  const std::vector<double> ey = eta.apply(y);
  const double base = canonical_dot(ex, ey);
  double worst = 0.0;
  for (const auto& g : group.elements()) {
    const std::vector<double> egx = eta.apply(act_local(g, x));
    const std::vector<double> egy = eta.apply(act_local(g, y));
    worst = std::max(worst, std::abs(canonical_dot(egx, egy) - base));
  }
  return worst;
}

double unitarity_deficit(const Activation& eta, const FiniteUnitaryGroup& group,
                         std::size_t trials, std::uint64_t rng_seed) {
  if (trials == 0) throw Error("unitarity deficit needs at least one trial");
  Rng rng(rng_seed);
  const std::size_t dim = group.support().size();
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = rng.vector(dim, -1.0, 1.0);
    const auto y = rng.vector(dim, -1.0, 1.0);
    worst = std::max(worst, unitarity_deficit(eta, group, x, y));
  }
  return worst;
}

double covariance_deficit(const Activation& eta, const GroupElement& g,
                          std::span<const double> x) {
  const std::vector<double> lhs = eta.apply(act(g, x));
  const std::vector<double> rhs = act(g, eta.apply(x));
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  return worst;
}

std::vector<CurveSample> activation_curve(const Activation& eta, double lo, double hi,
                                          std::size_t points) {
  if (!(lo < hi)) throw Error("curve range must satisfy lo < hi");
  if (points < 2) throw Error("curve needs at least two points");
  std::vector<CurveSample> out;
  out.reserve(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = (i + 1 == points) ? hi : lo + step * static_cast<double>(i);
    out.push_back({x, eta(x)});
  }
  return out;
}

}  // namespace tn
