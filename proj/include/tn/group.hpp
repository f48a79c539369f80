#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tn/errors.hpp"
#include "tn/support.hpp"

namespace tn {

/// A unitary linear action on the local coordinates of a support set.
///
/// Two representations are carried side by side:
///  - permutation form, optionally signed: exact arithmetic, the default for
///    every certification path;
///  - dense orthogonal matrix form: checked against tolerances instead.
class Action {
 public:
  enum class Kind { permutation, matrix };

  /// dest[i] is the local coordinate that input coordinate i moves to:
  /// out[dest[i]] = sign[i] * in[i]. Empty `signs` means all +1.
  static Action permutation(std::vector<std::size_t> dest, std::vector<double> signs = {});
  /// Row-major dim x dim matrix acting as out = M * in.
  static Action matrix(std::vector<double> row_major, std::size_t dim);
  static Action identity_perm(std::size_t dim);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool is_permutation() const { return kind_ == Kind::permutation; }

  const std::vector<std::size_t>& dest() const { return dest_; }
  const std::vector<double>& signs() const { return signs_; }

  void apply(std::span<const double> in, std::span<double> out) const;

  /// this ∘ inner: apply `inner` first.
  Action compose(const Action& inner) const;
  Action inverse() const;

  bool is_identity(double tol) const;
  /// Entrywise max of |AᵀA − I|; exactly 0 for any signed permutation.
  double orthogonality_deficit() const;
  /// Entrywise comparison, promoting permutation form to a matrix if the
  /// kinds differ.
  bool approx_equal(const Action& other, double tol) const;

  std::vector<double> as_matrix() const;

 private:
  Kind kind_ = Kind::permutation;
  std::size_t dim_ = 0;
  std::vector<std::size_t> dest_;  // permutation form
  std::vector<double> signs_;      // permutation form; one per coordinate
  std::vector<double> mat_;        // matrix form, row-major
};

/// One group element: an identifier, a local action, and the support it acts
/// on. Applying it to an ambient vector leaves off-support coordinates
/// bit-identical.
struct GroupElement {
  std::string id;
  Action action;
  SupportSet support;
};

/// Action of g on an ambient vector.
std::vector<double> act(const GroupElement& g, std::span<const double> x);
/// Action on a support-local vector (dimension = |support|).
std::vector<double> act_local(const GroupElement& g, std::span<const double> x);

struct AxiomReport {
  bool closure_ok = false;
  bool identity_ok = false;
  bool inverses_ok = false;
  bool associativity_ok = false;
  double unitarity_deficit = 0.0;  // max over elements of ‖gᵀg − I‖∞
  std::vector<std::string> failures;

  bool all_ok() const {
    return closure_ok && identity_ok && inverses_ok && associativity_ok;
  }
};

/// A finite group of unitary actions sharing one support, with eagerly built
/// composition and inverse tables. Factories validate closure at construction
/// (element matching within 1e-10 on matrix paths, exact on permutations);
/// assemble_unchecked skips validation so that verify_group_axioms can report
/// on defective sets.
class FiniteUnitaryGroup {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::size_t size() const { return elements_.size(); }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const GroupElement& element(std::size_t i) const { return elements_[i]; }
  const SupportSet& support() const { return support_; }

  std::size_t identity_index() const { return identity_index_; }
  /// Index of elements[a] ∘ elements[b] (b applied first); npos only for
  /// unchecked assemblies whose element set is not closed.
  std::size_t compose_index(std::size_t a, std::size_t b) const {
    return composition_table_[a * elements_.size() + b];
  }
  std::size_t inverse_index(std::size_t a) const { return inverse_table_[a]; }

  bool all_permutation_form() const;

  /// Builds tables by composing elements and matching results against the
  /// list; throws ClosureError if any composition, the identity, or an
  /// inverse is missing.
  static FiniteUnitaryGroup build(SupportSet support, std::vector<GroupElement> elements);

  /// Best-effort assembly without validation: unmatched table entries are set
  /// to npos and a missing identity leaves identity_index() == npos. Intended
  /// for diagnostics on element sets that may not form a group.
  static FiniteUnitaryGroup assemble_unchecked(SupportSet support,
                                               std::vector<GroupElement> elements);

 private:
  FiniteUnitaryGroup() = default;

  SupportSet support_ = SupportSet::full(1);
  std::vector<GroupElement> elements_;
  std::size_t identity_index_ = npos;
  std::vector<std::size_t> inverse_table_;
  std::vector<std::size_t> composition_table_;
};

/// Cyclic group C_n of circular shifts on the support's local coordinates.
/// Convention: shift-by-k maps coordinate i to coordinate (i+k) mod n.
/// Element order is shift-by-0 (identity) through shift-by-(n-1).
FiniteUnitaryGroup make_cyclic_translation_group(const SupportSet& support);

/// All k! permutations of whole blocks (k = number of blocks, k! <= 5040).
/// Blocks must be pairwise disjoint and equally sized; the group's support is
/// their concatenation in the given order. Elements are enumerated in
/// lexicographic order of the block permutation, identity first.
FiniteUnitaryGroup make_block_permutation_group(const std::vector<SupportSet>& blocks);

/// Direct product acting per-factor on its own support; |G| = Π|G_i|.
/// Elements are ordered row-major over factor element indices (first factor
/// slowest), acting on the concatenation of the factor supports.
FiniteUnitaryGroup make_product_group(const std::vector<FiniteUnitaryGroup>& factors);

/// Group from an explicit list of signed permutations of the support's local
/// coordinates (dest[i] = destination of coordinate i). Validated.
FiniteUnitaryGroup make_explicit_group(const SupportSet& support,
                                       const std::vector<std::vector<std::size_t>>& perms,
                                       const std::vector<std::vector<double>>& signs = {});

/// Planar rotation group C_n acting on a 2-index support in dense matrix
/// form; element k rotates by 2πk/n.
FiniteUnitaryGroup make_planar_rotation_group(const SupportSet& support, std::size_t n);

/// Re-derives every axiom from the element list alone (the tables are not
/// trusted). Cap: |G| <= 10^4. Failures land in the report, not in errors.
AxiomReport verify_group_axioms(const FiniteUnitaryGroup& group);

/// (1/|G|) Σ_g g(x) over the ambient vector.
std::vector<double> group_average(const FiniteUnitaryGroup& group, std::span<const double> x);

}  // namespace tn
