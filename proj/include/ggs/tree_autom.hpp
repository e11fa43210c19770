#pragma once

// Depth-truncated automorphisms of the p-regular rooted tree.
//
// Vertices are words over the digits {0, ..., p-1}; the level-m index of a
// vertex is its base-p value with the first digit most significant, so the
// descendants of a vertex occupy one contiguous block of indices on every
// deeper level.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "ggs/permutation.hpp"

namespace ggs {

/// Deterministic trial division.
bool is_prime(long long n);

/// p^e for small arguments; throws std::overflow_error past 2^53.
std::size_t ipow(std::size_t p, int e);

class NotLevel1Stabilized : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ArityMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Vertex {
 public:
  Vertex() = default;
  explicit Vertex(std::vector<std::uint8_t> digits) : digits_(std::move(digits)) {}

  /// Inverse of index(): the level-`level` vertex with base-p value `index`.
  static Vertex from_index(std::size_t index, int level, int p);

  int level() const noexcept { return static_cast<int>(digits_.size()); }
  std::span<const std::uint8_t> digits() const noexcept { return digits_; }
  std::size_t index(int p) const noexcept;
  Vertex child(int digit) const;

  friend bool operator==(const Vertex&, const Vertex&) = default;

 private:
  std::vector<std::uint8_t> digits_;
};

/// Portrait of a tree automorphism truncated at `depth` levels.
///
/// Immutable; identical sub-portraits may share storage. Structural equality
/// coincides with equality of the induced permutation of the leaves.
class Automorphism {
 public:
  static Automorphism identity(int p, int depth);
  /// a^power, where a rotates the first level by the p-cycle (0 1 ... p-1).
  static Automorphism rooted(int p, int depth, long long power);
  /// Directed automorphism with sections (a^v[0], ..., a^v[p-2], itself).
  /// At depth 1 all sections truncate away and the result is the identity.
  static Automorphism directed(int p, int depth, std::span<const int> vector);
  /// Builds the automorphism with the given root label and first-level
  /// sections; all sections must share one depth.
  static Automorphism from_sections(std::vector<std::uint8_t> root_perm,
                                    std::span<const Automorphism> sections);
  /// Recovers the portrait from the action on the leaves (level `depth`).
  /// Throws std::invalid_argument if `leaves` does not preserve the tree.
  static Automorphism from_permutation(int p, int depth, const Permutation& leaves);

  int prime() const noexcept { return p_; }
  int depth() const noexcept { return depth_; }
  bool is_identity() const noexcept;

  /// Image of each first-level digit. Identity at depth 0.
  std::span<const std::uint8_t> root_permutation() const noexcept;
  /// Section at the first-level vertex `digit`.
  Automorphism child(int digit) const;

  Vertex apply(const Vertex& v) const;

  friend bool operator==(const Automorphism& f, const Automorphism& g);

 private:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  Automorphism(int p, int depth, NodePtr node) : p_(p), depth_(depth), node_(std::move(node)) {}

  static NodePtr identity_node(int p, int depth);
  static NodePtr compose_nodes(const NodePtr& f, const NodePtr& g, int p, int depth);
  static NodePtr inverse_node(const NodePtr& f, int p, int depth);
  static NodePtr truncate_node(const NodePtr& f, int p, int depth);
  static bool equal_nodes(const NodePtr& f, const NodePtr& g, int depth);
  static void fill_permutation(const Node& node, int p, int level, std::size_t block,
                               Point in_offset, Point out_offset, Point* out);

  friend Automorphism compose(const Automorphism& f, const Automorphism& g);
  friend Automorphism inverse(const Automorphism& f);
  friend Automorphism truncate(const Automorphism& f, int depth);
  friend Automorphism embed_at_vertex(const Automorphism& g, const Vertex& v, int depth);
  friend Permutation to_permutation(const Automorphism& f, int level);

  int p_ = 0;
  int depth_ = 0;
  NodePtr node_;
};

/// f then g.
Automorphism compose(const Automorphism& f, const Automorphism& g);
Automorphism inverse(const Automorphism& f);
Automorphism power(const Automorphism& f, long long e);
/// f^-1 g^-1 f g
Automorphism commutator(const Automorphism& f, const Automorphism& g);
/// g^-1 f g
Automorphism conjugate(const Automorphism& f, const Automorphism& g);
/// Drops every label below `depth` (the quotient map to a shallower truncation).
Automorphism truncate(const Automorphism& f, int depth);

/// The automorphism induced on the subtree at v, of depth depth(f) - |v|.
/// section(f * g, v) == section(f, v) * section(g, f(v)).
Automorphism section(const Automorphism& f, const Vertex& v);

/// First-level sections of an automorphism fixing level 1.
std::vector<Automorphism> psi(const Automorphism& f);
/// Second-level sections (p^2 of them, in level-2 index order) of an
/// automorphism fixing level 2.
std::vector<Automorphism> psi2(const Automorphism& f);

/// Acts as g below v and trivially elsewhere. Requires depth(g) == depth - |v|.
Automorphism embed_at_vertex(const Automorphism& g, const Vertex& v, int depth);

/// Action on the p^level vertices of the given level.
Permutation to_permutation(const Automorphism& f, int level);

/// Action on level m of a permutation of the leaves of the depth-`depth` tree.
Permutation restrict_to_level(const Permutation& leaves, int p, int depth, int m);

}  // namespace ggs
