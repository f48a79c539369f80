#include "tn/support.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace tn {

SupportSet::SupportSet(std::vector<std::size_t> indices, std::size_t ambient_dim)
    : indices_(std::move(indices)), ambient_dim_(ambient_dim) {
  if (ambient_dim_ == 0) throw InvalidSupport("ambient dimension must be positive");
  std::unordered_set<std::size_t> seen;
  for (std::size_t i : indices_) {
    if (i >= ambient_dim_) throw InvalidSupport("support index out of ambient range");
    if (!seen.insert(i).second) throw InvalidSupport("duplicate support index");
  }
}

SupportSet SupportSet::full(std::size_t n) { return range(0, n, n); }

SupportSet SupportSet::range(std::size_t first, std::size_t count, std::size_t ambient_dim) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), first);
  return SupportSet(std::move(idx), ambient_dim);
}

bool SupportSet::contains(std::size_t ambient_index) const {
  return std::find(indices_.begin(), indices_.end(), ambient_index) != indices_.end();
}

bool SupportSet::disjoint_with(const SupportSet& other) const {
  for (std::size_t i : indices_)
    if (other.contains(i)) return false;
  return true;
}

SupportSet concat_supports(const std::vector<SupportSet>& parts) {
  if (parts.empty()) throw InvalidSupport("cannot concatenate zero supports");
  std::vector<std::size_t> idx;
  for (const auto& p : parts) {
    if (p.ambient_dim() != parts.front().ambient_dim())
      throw DimensionError("ambient dimension mismatch between supports");
    idx.insert(idx.end(), p.indices().begin(), p.indices().end());
  }
  // SupportSet's constructor rejects duplicates, which is exactly the overlap
  // condition; translate the error kind.
  try {
    return SupportSet(std::move(idx), parts.front().ambient_dim());
  } catch (const InvalidSupport& e) {
    throw OverlappingSupports(e.what());
  }
}

}  // namespace tn
