#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tn/group.hpp"

namespace tn {

/// Pointwise non-linearity. Three kinds:
///  - hard_relu: max(0, x)
///  - frac_power(d), d in (0,1]: x^d for x > 0, exactly 0 for x <= 0
///  - identity
/// Non-finite inputs are rejected; 0 maps to 0 for every kind.
class Activation {
 public:
  enum class Kind { hard_relu, frac_power, identity };

  static Activation hard_relu();
  static Activation frac_power(double d);
  static Activation identity();

  /// Accepts "relu", "fracpow:<d>", "identity"; throws ConfigError otherwise.
  static Activation parse(const std::string& text);

  Kind kind() const { return kind_; }
  double degree() const { return degree_; }
  /// Canonical text form, the inverse of parse().
  std::string name() const;

  double operator()(double v) const;
  std::vector<double> apply(std::span<const double> x) const;

 private:
  Kind kind_ = Kind::hard_relu;
  double degree_ = 1.0;
};

/// max over the grid of |η(η(x)) − η(x)|. Zero certifies idempotence.
double stability_deficit(const Activation& eta, std::span<const double> grid);

/// max over g in G of |⟨η(g(x)), η(g(y))⟩ − ⟨η(x), η(y)⟩| for one pair of
/// support-local vectors. Inner products are summed in value order, so a
/// permutation's reordering of identical products cancels exactly.
double unitarity_deficit(const Activation& eta, const FiniteUnitaryGroup& group,
                         std::span<const double> x, std::span<const double> y);

/// Same deficit maximized over `trials` random pairs drawn from the seed.
double unitarity_deficit(const Activation& eta, const FiniteUnitaryGroup& group,
                         std::size_t trials, std::uint64_t rng_seed);

/// ‖η(g(x)) − g(η(x))‖∞ over the ambient vector. Zero certifies that g acts
/// the same way before and after the non-linearity; bit-exact zero on
/// permutation form since both sides evaluate η on the same scalars.
double covariance_deficit(const Activation& eta, const GroupElement& g, std::span<const double> x);

struct CurveSample {
  double x;
  double value;
};

/// `points` uniformly spaced samples of η over [lo, hi], endpoints included.
std::vector<CurveSample> activation_curve(const Activation& eta, double lo, double hi,
                                          std::size_t points);

}  // namespace tn
