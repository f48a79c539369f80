#pragma once

#include <cstddef>
#include <vector>

#include "tn/errors.hpp"

namespace tn {

/// An ordered set of distinct coordinate indices into an ambient vector space.
/// The order of `indices` defines the local coordinate system used by group
/// actions and templates restricted to this support.
class SupportSet {
 public:
  SupportSet(std::vector<std::size_t> indices, std::size_t ambient_dim);

  /// Contiguous range [0, n) in an ambient space of the same size.
  static SupportSet full(std::size_t n);
  /// Contiguous range [first, first + count) inside `ambient_dim`.
  static SupportSet range(std::size_t first, std::size_t count, std::size_t ambient_dim);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t size() const { return indices_.size(); }
  std::size_t operator[](std::size_t local) const { return indices_[local]; }

  bool contains(std::size_t ambient_index) const;
  bool disjoint_with(const SupportSet& other) const;

  /// Same ambient dimension and identical index order.
  bool operator==(const SupportSet& other) const = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t ambient_dim_ = 0;
};

/// Concatenates supports in order; throws OverlappingSupports on intersection
/// and DimensionError on ambient mismatch.
SupportSet concat_supports(const std::vector<SupportSet>& parts);

}  // namespace tn
