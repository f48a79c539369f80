#include "tn/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

namespace tn {

namespace {

constexpr double kMatchTol = 1e-10;    // element matching at construction
constexpr double kOrthoTol = 1e-12;    // per-element orthogonality gate

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

}  // namespace

// ---------------------------------------------------------------------------
// Action

Action Action::permutation(std::vector<std::size_t> dest, std::vector<double> signs) {
  Action a;
  a.kind_ = Kind::permutation;
  a.dim_ = dest.size();
  if (signs.empty()) signs = ones(a.dim_);
  if (signs.size() != dest.size()) throw DimensionError("sign list does not match permutation size");
  std::vector<bool> hit(a.dim_, false);
  for (std::size_t d : dest) {
    if (d >= a.dim_ || hit[d]) throw Error("permutation is not a bijection");
    hit[d] = true;
  }
  for (double s : signs)
    if (s != 1.0 && s != -1.0) throw Error("permutation signs must be +1 or -1");
  a.dest_ = std::move(dest);
  a.signs_ = std::move(signs);
  return a;
}

Action Action::matrix(std::vector<double> row_major, std::size_t dim) {
  if (row_major.size() != dim * dim) throw DimensionError("matrix size does not match dimension");
  for (double v : row_major)
    if (!std::isfinite(v)) throw Error("matrix entries must be finite");
  Action a;
  a.kind_ = Kind::matrix;
  a.dim_ = dim;
  a.mat_ = std::move(row_major);
  return a;
}

Action Action::identity_perm(std::size_t dim) {
  std::vector<std::size_t> dest(dim);
  std::iota(dest.begin(), dest.end(), 0);
  return permutation(std::move(dest));
}

void Action::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != dim_ || out.size() != dim_) throw DimensionError("action dimension mismatch");
  if (kind_ == Kind::permutation) {
    for (std::size_t i = 0; i < dim_; ++i) out[dest_[i]] = signs_[i] * in[i];
  } else {
    for (std::size_t r = 0; r < dim_; ++r) {
      double acc = 0.0;
      const double* row = mat_.data() + r * dim_;
      for (std::size_t c = 0; c < dim_; ++c) acc += row[c] * in[c];
      out[r] = acc;
    }
  }
}

Action Action::compose(const Action& inner) const {
  if (dim_ != inner.dim_) throw DimensionError("cannot compose actions of different dimension");
  if (kind_ == Kind::permutation && inner.kind_ == Kind::permutation) {
    std::vector<std::size_t> dest(dim_);
    std::vector<double> signs(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      dest[i] = dest_[inner.dest_[i]];
      signs[i] = inner.signs_[i] * signs_[inner.dest_[i]];
    }
    return permutation(std::move(dest), std::move(signs));
  }
  const std::vector<double> a = as_matrix();
  const std::vector<double> b = inner.as_matrix();
  std::vector<double> m(dim_ * dim_, 0.0);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = 0; k < dim_; ++k) {
      const double ark = a[r * dim_ + k];
      if (ark == 0.0) continue;
      for (std::size_t c = 0; c < dim_; ++c) m[r * dim_ + c] += ark * b[k * dim_ + c];
    }
  return matrix(std::move(m), dim_);
}

Action Action::inverse() const {
  if (kind_ == Kind::permutation) {
    std::vector<std::size_t> dest(dim_);
    std::vector<double> signs(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      dest[dest_[i]] = i;
      signs[dest_[i]] = signs_[i];
    }
    return permutation(std::move(dest), std::move(signs));
  }
  // Transpose; valid because matrix-form actions are orthogonal.
  std::vector<double> m(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m[c * dim_ + r] = mat_[r * dim_ + c];
  return matrix(std::move(m), dim_);
}

bool Action::is_identity(double tol) const {
  if (kind_ == Kind::permutation) {
    for (std::size_t i = 0; i < dim_; ++i)
      if (dest_[i] != i || signs_[i] != 1.0) return false;
    return true;
  }
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c)
      if (std::abs(mat_[r * dim_ + c] - (r == c ? 1.0 : 0.0)) > tol) return false;
  return true;
}

double Action::orthogonality_deficit() const {
  if (kind_ == Kind::permutation) return 0.0;
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) {
      double acc = 0.0;  // (MᵀM)[r][c]
      for (std::size_t k = 0; k < dim_; ++k) acc += mat_[k * dim_ + r] * mat_[k * dim_ + c];
      worst = std::max(worst, std::abs(acc - (r == c ? 1.0 : 0.0)));
    }
  return worst;
}

bool Action::approx_equal(const Action& other, double tol) const {
  if (dim_ != other.dim_) return false;
  if (kind_ == Kind::permutation && other.kind_ == Kind::permutation)
    return dest_ == other.dest_ && signs_ == other.signs_;
  const std::vector<double> a = as_matrix();
  const std::vector<double> b = other.as_matrix();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

std::vector<double> Action::as_matrix() const {
  if (kind_ == Kind::matrix) return mat_;
  std::vector<double> m(dim_ * dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) m[dest_[i] * dim_ + i] = signs_[i];
  return m;
}

// ---------------------------------------------------------------------------
// Element application

std::vector<double> act(const GroupElement& g, std::span<const double> x) {
  const auto& idx = g.support.indices();
  for (std::size_t i : idx)
    if (i >= x.size()) throw DimensionError("vector too short for element support");
  std::vector<double> out(x.begin(), x.end());
  std::vector<double> local(idx.size()), transformed(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) local[i] = x[idx[i]];
  g.action.apply(local, transformed);
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = transformed[i];
  return out;
}

std::vector<double> act_local(const GroupElement& g, std::span<const double> x) {
  if (x.size() != g.support.size()) throw DimensionError("local vector does not match support size");
  std::vector<double> out(x.size());
  g.action.apply(x, out);
  return out;
}

// ---------------------------------------------------------------------------
// FiniteUnitaryGroup

bool FiniteUnitaryGroup::all_permutation_form() const {
  return std::all_of(elements_.begin(), elements_.end(),
                     [](const GroupElement& g) { return g.action.is_permutation(); });
}

namespace {

// Index lookup over a fixed element list: exact (ordered-map) matching for
// permutation form, tolerance scan as the fallback.
class ElementMatcher {
 public:
  explicit ElementMatcher(const std::vector<GroupElement>& elements) : elements_(elements) {
    for (std::size_t i = 0; i < elements.size(); ++i) {
      const Action& a = elements[i].action;
      if (a.is_permutation()) perm_index_.emplace(std::make_pair(a.dest(), a.signs()), i);
    }
  }

  std::size_t find(const Action& a) const {
    if (a.is_permutation()) {
      auto it = perm_index_.find(std::make_pair(a.dest(), a.signs()));
      if (it != perm_index_.end()) return it->second;
    }
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i].action.approx_equal(a, kMatchTol)) return i;
    return FiniteUnitaryGroup::npos;
  }

 private:
  const std::vector<GroupElement>& elements_;
  std::map<std::pair<std::vector<std::size_t>, std::vector<double>>, std::size_t> perm_index_;
};

}  // namespace

FiniteUnitaryGroup FiniteUnitaryGroup::assemble_unchecked(SupportSet support,
                                                          std::vector<GroupElement> elements) {
  FiniteUnitaryGroup g;
  g.support_ = std::move(support);
  g.elements_ = std::move(elements);
  const std::size_t n = g.elements_.size();
  g.composition_table_.assign(n * n, npos);
  g.inverse_table_.assign(n, npos);
  g.identity_index_ = npos;

  ElementMatcher matcher(g.elements_);
  for (std::size_t i = 0; i < n; ++i)
    if (g.elements_[i].action.is_identity(kMatchTol)) {
      g.identity_index_ = i;
      break;
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      g.composition_table_[a * n + b] = matcher.find(g.elements_[a].action.compose(g.elements_[b].action));
  if (g.identity_index_ != npos)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (g.composition_table_[a * n + b] == g.identity_index_ &&
            g.composition_table_[b * n + a] == g.identity_index_) {
          g.inverse_table_[a] = b;
          break;
        }
  return g;
}

FiniteUnitaryGroup FiniteUnitaryGroup::build(SupportSet support, std::vector<GroupElement> elements) {
  if (elements.empty()) throw ClosureError("a group needs at least one element");
  for (const auto& e : elements) {
    if (!(e.support == support)) throw ClosureError("element support differs from group support");
    if (e.action.dim() != support.size()) throw DimensionError("element action does not match support size");
    if (e.action.orthogonality_deficit() > kOrthoTol)
      throw ClosureError("element '" + e.id + "' is not orthogonal");
  }
  FiniteUnitaryGroup g = assemble_unchecked(std::move(support), std::move(elements));
  const std::size_t n = g.size();
  // Reject duplicate elements; they make table matching ambiguous.
  {
    ElementMatcher matcher(g.elements_);
    for (std::size_t i = 0; i < n; ++i)
      if (matcher.find(g.elements_[i].action) != i)
        throw ClosureError("duplicate element '" + g.elements_[i].id + "'");
  }
  if (g.identity_index_ == npos) throw ClosureError("no identity element present");
  for (std::size_t a = 0; a < n; ++a) {
    if (g.inverse_table_[a] == npos)
      throw ClosureError("element '" + g.elements_[a].id + "' has no inverse in the set");
    for (std::size_t b = 0; b < n; ++b)
      if (g.composition_table_[a * n + b] == npos)
        throw ClosureError("composition of '" + g.elements_[a].id + "' and '" + g.elements_[b].id +
                           "' is not in the set");
  }
  return g;
}

// ---------------------------------------------------------------------------
// Factories

FiniteUnitaryGroup make_cyclic_translation_group(const SupportSet& support) {
  const std::size_t n = support.size();
  if (n == 0) throw InvalidSupport("cyclic group needs a non-empty support");
  std::vector<GroupElement> elems;
  elems.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> dest(n);
    for (std::size_t i = 0; i < n; ++i) dest[i] = (i + k) % n;
    elems.push_back({"shift" + std::to_string(k), Action::permutation(std::move(dest)), support});
  }
  return FiniteUnitaryGroup::build(support, std::move(elems));
}

FiniteUnitaryGroup make_block_permutation_group(const std::vector<SupportSet>& blocks) {
  if (blocks.empty()) throw InvalidSupport("block permutation group needs at least one block");
  const std::size_t k = blocks.size();
  const std::size_t m = blocks.front().size();
  if (m == 0) throw InvalidSupport("blocks must be non-empty");
  for (const auto& b : blocks)
    if (b.size() != m) throw BlockSizeMismatch("all blocks must have the same size");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (!blocks[i].disjoint_with(blocks[j])) throw OverlappingSupports("blocks overlap");

  std::size_t order = 1;
  for (std::size_t i = 2; i <= k; ++i) {
    order *= i;
    if (order > 5040) throw Error("too many blocks: k! exceeds 5040");
  }

  const SupportSet support = concat_supports(blocks);
  std::vector<std::size_t> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<GroupElement> elems;
  elems.reserve(order);
  do {
    std::vector<std::size_t> dest(k * m);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t r = 0; r < m; ++r) dest[j * m + r] = sigma[j] * m + r;
    std::ostringstream id;
    id << "blockperm[";
    for (std::size_t j = 0; j < k; ++j) id << (j ? "," : "") << sigma[j];
    id << "]";
    elems.push_back({id.str(), Action::permutation(std::move(dest)), support});
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return FiniteUnitaryGroup::build(support, std::move(elems));
}

FiniteUnitaryGroup make_product_group(const std::vector<FiniteUnitaryGroup>& factors) {
  if (factors.empty()) throw InvalidSupport("product group needs at least one factor");
  std::vector<SupportSet> supports;
  supports.reserve(factors.size());
  for (const auto& f : factors) supports.push_back(f.support());
  const SupportSet support = concat_supports(supports);

  const bool perm_only = std::all_of(factors.begin(), factors.end(),
                                     [](const auto& f) { return f.all_permutation_form(); });
  std::size_t total = 1;
  for (const auto& f : factors) total *= f.size();

  std::vector<std::size_t> offsets(factors.size(), 0);
  for (std::size_t f = 1; f < factors.size(); ++f)
    offsets[f] = offsets[f - 1] + factors[f - 1].support().size();
  const std::size_t dim = support.size();

  std::vector<GroupElement> elems;
  elems.reserve(total);
  std::vector<std::size_t> tuple(factors.size(), 0);
  for (std::size_t count = 0; count < total; ++count) {
    std::ostringstream id;
    id << "(";
    for (std::size_t f = 0; f < factors.size(); ++f)
      id << (f ? "," : "") << factors[f].element(tuple[f]).id;
    id << ")";

    Action combined = Action::identity_perm(dim);
    if (perm_only) {
      std::vector<std::size_t> dest(dim);
      std::vector<double> signs(dim);
      for (std::size_t f = 0; f < factors.size(); ++f) {
        const Action& a = factors[f].element(tuple[f]).action;
        for (std::size_t i = 0; i < a.dim(); ++i) {
          dest[offsets[f] + i] = offsets[f] + a.dest()[i];
          signs[offsets[f] + i] = a.signs()[i];
        }
      }
      combined = Action::permutation(std::move(dest), std::move(signs));
    } else {
      std::vector<double> m(dim * dim, 0.0);
      for (std::size_t f = 0; f < factors.size(); ++f) {
        const std::vector<double> block = factors[f].element(tuple[f]).action.as_matrix();
        const std::size_t bd = factors[f].support().size();
        for (std::size_t r = 0; r < bd; ++r)
          for (std::size_t c = 0; c < bd; ++c)
            m[(offsets[f] + r) * dim + (offsets[f] + c)] = block[r * bd + c];
      }
      combined = Action::matrix(std::move(m), dim);
    }
    elems.push_back({id.str(), std::move(combined), support});

    // Odometer: last factor fastest.
    for (std::size_t f = factors.size(); f-- > 0;) {
      if (++tuple[f] < factors[f].size()) break;
      tuple[f] = 0;
    }
  }
  return FiniteUnitaryGroup::build(support, std::move(elems));
}

FiniteUnitaryGroup make_explicit_group(const SupportSet& support,
                                       const std::vector<std::vector<std::size_t>>& perms,
                                       const std::vector<std::vector<double>>& signs) {
  if (perms.empty()) throw InvalidSupport("explicit group needs at least one permutation");
  if (!signs.empty() && signs.size() != perms.size())
    throw DimensionError("sign list count does not match permutation count");
  std::vector<GroupElement> elems;
  elems.reserve(perms.size());
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (perms[i].size() != support.size())
      throw DimensionError("permutation length does not match support size");
    elems.push_back({"g" + std::to_string(i),
                     Action::permutation(perms[i], signs.empty() ? std::vector<double>{} : signs[i]),
                     support});
  }
  return FiniteUnitaryGroup::build(support, std::move(elems));
}

FiniteUnitaryGroup make_planar_rotation_group(const SupportSet& support, std::size_t n) {
  if (support.size() != 2) throw DimensionError("planar rotation group needs a 2-index support");
  if (n == 0) throw InvalidSupport("rotation group order must be positive");
  std::vector<GroupElement> elems;
  elems.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
    const double c = std::cos(theta), s = std::sin(theta);
    elems.push_back({"rot" + std::to_string(k), Action::matrix({c, -s, s, c}, 2), support});
  }
  return FiniteUnitaryGroup::build(support, std::move(elems));
}

// ---------------------------------------------------------------------------
// Axiom verification (element-level; tables are not trusted)

AxiomReport verify_group_axioms(const FiniteUnitaryGroup& group) {
  const std::size_t n = group.size();
  if (n > 10'000) throw Error("axiom verification capped at |G| <= 10^4");
  AxiomReport report;
  const auto& elems = group.elements();

  ElementMatcher matcher(elems);
  std::vector<std::size_t> table(n * n, FiniteUnitaryGroup::npos);

  report.closure_ok = true;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      table[a * n + b] = matcher.find(elems[a].action.compose(elems[b].action));
      if (table[a * n + b] == FiniteUnitaryGroup::npos && report.closure_ok) {
        report.closure_ok = false;
        report.failures.push_back("closure: '" + elems[a].id + "' * '" + elems[b].id +
                                  "' is not in the element set");
      }
    }

  std::size_t identity = FiniteUnitaryGroup::npos;
  for (std::size_t i = 0; i < n; ++i)
    if (elems[i].action.is_identity(kMatchTol)) {
      identity = i;
      break;
    }
  report.identity_ok = identity != FiniteUnitaryGroup::npos;
  if (!report.identity_ok) report.failures.push_back("identity: no identity element in the set");

  report.inverses_ok = report.identity_ok;
  if (report.identity_ok) {
    for (std::size_t a = 0; a < n; ++a) {
      bool found = false;
      for (std::size_t b = 0; b < n && !found; ++b)
        found = table[a * n + b] == identity && table[b * n + a] == identity;
      if (!found) {
        report.inverses_ok = false;
        report.failures.push_back("inverse: '" + elems[a].id + "' has no inverse in the set");
        break;
      }
    }
  }

  report.associativity_ok = true;
  if (n <= 64) {
    // Brute force on the elements themselves.
    for (std::size_t a = 0; a < n && report.associativity_ok; ++a)
      for (std::size_t b = 0; b < n && report.associativity_ok; ++b) {
        const Action ab = elems[a].action.compose(elems[b].action);
        for (std::size_t c = 0; c < n; ++c) {
          const Action left = ab.compose(elems[c].action);
          const Action right = elems[a].action.compose(elems[b].action.compose(elems[c].action));
          if (!left.approx_equal(right, kMatchTol)) {
            report.associativity_ok = false;
            report.failures.push_back("associativity: mismatch at ('" + elems[a].id + "','" +
                                      elems[b].id + "','" + elems[c].id + "')");
            break;
          }
        }
      }
  } else if (report.closure_ok) {
    for (std::size_t a = 0; a < n && report.associativity_ok; ++a)
      for (std::size_t b = 0; b < n && report.associativity_ok; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table[table[a * n + b] * n + c] != table[a * n + table[b * n + c]]) {
            report.associativity_ok = false;
            report.failures.push_back("associativity: table mismatch");
            break;
          }
  } else {
    report.associativity_ok = false;
    report.failures.push_back("associativity: not evaluated, closure already failed");
  }

  report.unitarity_deficit = 0.0;
  for (const auto& e : elems)
    report.unitarity_deficit = std::max(report.unitarity_deficit, e.action.orthogonality_deficit());
  return report;
}

std::vector<double> group_average(const FiniteUnitaryGroup& group, std::span<const double> x) {
  if (group.size() == 0) throw DimensionError("empty group");
  std::vector<double> acc(x.size(), 0.0);
  for (const auto& g : group.elements()) {
    const std::vector<double> gx = act(g, x);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += gx[i];
  }
  const double w = 1.0 / static_cast<double>(group.size());
  for (double& v : acc) v *= w;
  return acc;
}

}  // namespace tn
