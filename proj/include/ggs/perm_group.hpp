#pragma once

// Permutation p-groups acting on the leaves of a depth-N p-regular tree.
//
// Every group is stored as a stabilizer chain whose base points are tree
// vertices taken in breadth-first order (level by level, increasing index
// inside a level), skipping vertices the remaining stabilizer fixes. For a
// p-group each fundamental orbit is then a full set of p siblings, the
// transversal is the powers of one strong generator, and the order is p to
// the number of base points. Level stabilizers are tails of the chain.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ggs/permutation.hpp"

namespace ggs {

class NotPGroup : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotTreeAutomorphism : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ElementNotInAmbient : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ContainmentViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class StabilizerChain;

/// One level of the chain: the base vertex, its fundamental orbit (as level
/// indices of the sibling vertices, in the order visited by the transversal
/// generator) and that generator.
struct ChainLevel {
  std::size_t vertex_id;  // breadth-first id; the root is 0
  int vertex_level;
  std::size_t vertex_index;
  std::vector<std::size_t> orbit;
  Permutation transversal_generator;
};

class GroupHandle {
 public:
  /// Subgroup of Sym(degree) generated by `gens`; degree must be a power of p
  /// and every generator must preserve the tree.
  static GroupHandle generate(int p, std::size_t degree, std::vector<Permutation> gens);
  static GroupHandle trivial(int p, std::size_t degree);

  int prime() const noexcept { return p_; }
  int depth() const noexcept { return depth_; }
  std::size_t degree() const noexcept { return degree_; }
  /// k with |G| = p^k.
  int order_exponent() const noexcept;

  /// The generating set the handle was built from (identity entries dropped).
  std::span<const Permutation> generators() const noexcept { return generators_; }
  /// Whichever of generators() and the strong generators is shorter.
  std::vector<Permutation> small_generating_set() const;
  std::vector<Permutation> strong_generators() const;
  std::vector<ChainLevel> chain_levels() const;
  std::vector<std::size_t> base() const;

  bool contains(const Permutation& x) const;
  /// Sifting residue; the identity iff x is a member.
  Permutation residue(const Permutation& x) const;

  friend class GroupBuilder;
  friend GroupHandle level_stabilizer(const GroupHandle& g, int m);

 private:
  GroupHandle(int p, int depth, std::size_t degree, std::shared_ptr<const StabilizerChain> chain,
              std::vector<Permutation> gens);
  void check_degree(const Permutation& x) const;

  int p_ = 0;
  int depth_ = 0;
  std::size_t degree_ = 0;
  std::shared_ptr<const StabilizerChain> chain_;
  std::vector<Permutation> generators_;
};

/// True iff every generator of h lies in g.
bool is_subgroup(const GroupHandle& h, const GroupHandle& g);
bool equals(const GroupHandle& a, const GroupHandle& b);
/// A strong generator of h outside g, if any.
std::optional<Permutation> find_non_member(const GroupHandle& h, const GroupHandle& g);

/// Smallest subgroup containing `normal_gens` and normalised by `ambient`.
GroupHandle normal_closure(const GroupHandle& ambient, std::span<const Permutation> normal_gens);
GroupHandle derived(const GroupHandle& g);
/// [A, B] as the normal closure in `ambient` of commutators of generators.
GroupHandle commutator_subgroup(const GroupHandle& a, const GroupHandle& b,
                                const GroupHandle& ambient);
/// G' G^p.
GroupHandle frattini(const GroupHandle& g);
/// Minimal number of generators (Burnside basis theorem).
int rank(const GroupHandle& g);

/// Kernel of the action on level m.
GroupHandle level_stabilizer(const GroupHandle& g, int m);
/// The group induced on the p^m vertices of level m.
GroupHandle level_image(const GroupHandle& g, int m);

}  // namespace ggs
