#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ggs/perm_group.hpp"
#include "ggs/tree_autom.hpp"

namespace ggs {

/// Rejection of defining data; `certificate` carries the coefficients of a
/// vanishing F_p-linear combination when kind == DependentVectors.
class SpecError : public std::invalid_argument {
 public:
  enum class Kind { NotPrime, NotOdd, NoVectors, BadLength, DependentVectors };

  SpecError(Kind kind, const std::string& what, std::vector<int> certificate = {})
      : std::invalid_argument(what), kind_(kind), certificate_(std::move(certificate)) {}

  Kind kind() const noexcept { return kind_; }
  const std::vector<int>& certificate() const noexcept { return certificate_; }

 private:
  Kind kind_;
  std::vector<int> certificate_;
};

const char* to_string(SpecError::Kind kind);

class NormalizationImpossible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DepthCapExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Defining data of a multi-GGS group: an odd prime p and r linearly
/// independent vectors in F_p^(p-1), one per directed generator.
class GGSSpec {
 public:
  /// Entries are reduced mod p. Throws SpecError.
  static GGSSpec validate(int p, const std::vector<std::vector<long long>>& vectors);

  int prime() const noexcept { return p_; }
  int rank() const noexcept { return static_cast<int>(rows_.size()); }
  const std::vector<std::vector<int>>& vectors() const noexcept { return rows_; }
  std::span<const int> vector(int i) const { return rows_.at(static_cast<std::size_t>(i)); }
  /// Pivot columns of the row-echelon form found during validation.
  const std::vector<int>& pivot_columns() const noexcept { return pivots_; }

  friend bool operator==(const GGSSpec&, const GGSSpec&) = default;

 private:
  GGSSpec(int p, std::vector<std::vector<int>> rows, std::vector<int> pivots)
      : p_(p), rows_(std::move(rows)), pivots_(std::move(pivots)) {}

  int p_ = 0;
  std::vector<std::vector<int>> rows_;
  std::vector<int> pivots_;
};

/// r == 1 and every entry of the vector is equal.
bool is_constant(const GGSSpec& spec);
/// v[j] == v[p-2-j] for all j (the vector reads the same backwards).
bool is_symmetric(std::span<const int> vector);

/// Result of rewriting the generators by b_i -> b_i^k and b_i -> b_i b_j^k
/// (plus reordering). rows(normalized) = transform * rows(original) over F_p.
struct Normalization {
  enum class Case { NonSymmetric, Symmetric };

  GGSSpec spec;
  std::vector<std::vector<int>> transform;
  Case which;
  std::vector<std::string> steps;
};

/// Non-symmetric case: a non-symmetric row with nonzero first entry is moved
/// to the front, then every row with nonzero first entry is scaled to start
/// with 1. Symmetric case: rows are scaled to start with 1, rows 2..r are
/// reduced to (0,*,...,*,0) by subtracting row 1, and row 1 is cleared at the
/// first nonzero column of row 2. Throws NormalizationImpossible.
Normalization normalize(const GGSSpec& spec);

/// Directed generator b_i (0-based i) truncated at `depth`.
Automorphism directed(const GGSSpec& spec, int depth, int i);

struct BuildOptions {
  /// Lift the default cap p^depth <= kDefaultDegreeCap.
  bool allow_large = false;
};

inline constexpr std::size_t kDefaultDegreeCap = 100000;

/// Largest depth with p^depth <= kDefaultDegreeCap.
int depth_cap(int p);

/// The quotient G_N = G / st_G(N) as the group induced on level N.
class GroupSession {
 public:
  static GroupSession build(const GGSSpec& spec, int depth, BuildOptions options = {});

  const GGSSpec& spec() const noexcept { return spec_; }
  int depth() const noexcept { return depth_; }
  int prime() const noexcept { return spec_.prime(); }
  std::size_t degree() const noexcept { return group_.degree(); }

  const Automorphism& a() const noexcept { return a_; }
  std::span<const Automorphism> b() const noexcept { return b_; }
  /// Leaf images of a, b_1, ..., b_r in that order.
  std::span<const Permutation> generator_images() const noexcept { return images_; }
  const GroupHandle& group() const noexcept { return group_; }

  /// Restricting the level-N generator images to level m agreed with the
  /// level-m images for every m < N (checked during build).
  bool projections_commute() const noexcept { return projections_commute_; }

  GroupSession truncated(int depth) const { return build(spec_, depth, options_); }

 private:
  GroupSession(GGSSpec spec, int depth, BuildOptions options, Automorphism a,
               std::vector<Automorphism> b, std::vector<Permutation> images, GroupHandle group,
               bool commute)
      : spec_(std::move(spec)), depth_(depth), options_(options), a_(std::move(a)), b_(std::move(b)),
        images_(std::move(images)), group_(std::move(group)), projections_commute_(commute) {}

  GGSSpec spec_;
  int depth_;
  BuildOptions options_;
  Automorphism a_;
  std::vector<Automorphism> b_;
  std::vector<Permutation> images_;
  GroupHandle group_;
  bool projections_commute_;
};

}  // namespace ggs
