#pragma once

// Finite-level verification of the structural claims about a multi-GGS group
// G. Every check works in one quotient G_N = G / st_G(N), realised as the
// group induced on the p^N leaves of level N, and never claims more than
// "holds at level N".

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ggs/ggs.hpp"

namespace ggs {

enum class Status { Holds, Fails, Skipped, Vacuous };
const char* to_string(Status status);

/// Evidence attached to a failing verdict. `element`, when present, is a
/// permutation of the level-`level` leaves that can be re-checked by sifting.
struct Witness {
  std::string kind;
  std::string description;
  int level = 0;
  std::optional<Permutation> element;
  std::map<std::string, std::int64_t> data;
};

struct Verdict {
  std::string claim_id;
  int level = 0;
  Status status = Status::Skipped;
  std::map<std::string, std::int64_t> details;
  /// Skip reason, vacuity reason or scope flag ("extended: ...").
  std::string note;
  std::optional<Witness> witness;
  double wall_ms = 0.0;

  bool holds() const noexcept { return status == Status::Holds; }
};

/// The check would only compare trivial subgroups at this depth.
class VacuousCheck : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Classification { HasCSP, ConstantVectorException };
const char* to_string(Classification c);

/// The constant-vector GGS group is the only exception; purely definitional.
Classification classify_csp(const GGSSpec& spec);

/// Lazily built quotients G_1, ..., G_N of one group together with the
/// subgroups the checks share (derived series, gamma_3, level stabilizers and
/// their block-diagonal products).
class QuotientTower {
 public:
  explicit QuotientTower(GroupSession top);

  int depth() const noexcept { return top_.depth(); }
  const GGSSpec& spec() const noexcept { return top_.spec(); }
  int prime() const noexcept { return top_.prime(); }

  const GroupSession& session(int n);
  const GroupHandle& group(int n) { return session(n).group(); }
  const GroupHandle& derived(int n);
  const GroupHandle& second_derived(int n);
  /// [G_n', G_n]
  const GroupHandle& gamma3(int n);
  const GroupHandle& stab1(int n);
  const GroupHandle& stab1_derived(int n);
  /// gamma_3 of st_{G_n}(1)
  const GroupHandle& stab1_gamma3(int n);
  /// p block-diagonal copies of derived(n - 1) acting on the level-n leaves.
  const GroupHandle& derived_blocks(int n);
  /// p block-diagonal copies of gamma3(n - 1) acting on the level-n leaves.
  const GroupHandle& gamma3_blocks(int n);

 private:
  enum class Slot { Derived, SecondDerived, Gamma3, Stab1, Stab1Derived, Stab1Gamma3, DerivedBlocks, Gamma3Blocks };
  const GroupHandle& cached(Slot slot, int n);
  GroupHandle block_product(const GroupHandle& factor, int n);

  GroupSession top_;
  std::map<int, GroupSession> sessions_;
  std::map<std::pair<Slot, int>, GroupHandle> groups_;
};

namespace check {

inline constexpr const char* kAbelianization = "abelianization";
inline constexpr const char* kStab1DerivedInGamma3 = "stab1_derived_in_gamma3";
inline constexpr const char* kGamma3Product = "gamma3_product";
inline constexpr const char* kKeyCongruence = "key_congruence";
inline constexpr const char* kSubdirect = "subdirect";
inline constexpr const char* kRegularBranch = "regular_branch";
inline constexpr const char* kPsi2SecondDerived = "psi2_second_derived";
inline constexpr const char* kRankGrowth = "rank_growth";
inline constexpr const char* kDerivedContainsStab = "derived_contains_stab";
inline constexpr const char* kSecondDerivedContainsStab = "second_derived_contains_stab";

/// All check ids in the order run_all evaluates them.
const std::vector<std::string>& all_ids();

}  // namespace check

/// |G_N : G_N'| = p^(r+1) and G_N / G_N' is elementary abelian.
Verdict check_abelianization(QuotientTower& tower);
/// psi(gamma_3(st(1))) equals p copies of gamma_3(G); skipped for the constant vector.
Verdict check_gamma3_product(QuotientTower& tower);
/// The commutator product with exponents m^k maps to ([a,b_1]^(1-m), 1, ..., 1)
/// modulo p copies of gamma_3(G).
Verdict check_key_congruence(QuotientTower& tower);
/// psi(st(1)') equals p copies of G'.
Verdict check_regular_branch(QuotientTower& tower);
/// st(1)' <= gamma_3(G) for every multi-GGS group.
Verdict check_stab1_derived_in_gamma3(QuotientTower& tower);
/// Every first-level projection of G' is all of G.
Verdict check_subdirect(QuotientTower& tower);
/// G'' contains p^2 level-2 copies of G'; needs r >= 2.
Verdict check_psi2_second_derived(QuotientTower& tower);
/// rank(G_n) >= n for n = 2, ..., r+1, with equality at n = r+1.
Verdict check_rank_growth(QuotientTower& tower);
/// st(r+1) <= G'. Throws VacuousCheck when depth <= r+1.
Verdict check_derived_contains_stab(QuotientTower& tower);
/// st(r+3) <= G''. Throws VacuousCheck when depth <= r+3.
Verdict check_second_derived_contains_stab(QuotientTower& tower);

/// Runs one check by id; VacuousCheck becomes a Vacuous verdict.
Verdict run_check(QuotientTower& tower, const std::string& id);

/// X <= Y, where X and Y are built at the same level; a failure carries a
/// strong generator of X outside Y as witness.
Verdict containment_verdict(const std::string& id, int level, const GroupHandle& x,
                            const GroupHandle& y);

struct RunOptions {
  /// Empty means every check.
  std::set<std::string> checks;
  BuildOptions build;
};

struct Report {
  GGSSpec spec;
  int depth = 0;
  std::vector<Verdict> verdicts;
  Classification classification = Classification::HasCSP;
  std::string classification_note;

  bool any_failed() const;
};

/// Attached to every report: the classification is definitional and the
/// verdicts are evidence at one finite level.
extern const char* const kClassificationNote;

/// min(r + 4, depth cap for p).
int default_depth(const GGSSpec& spec);

Report run_all(const GGSSpec& spec, int depth, const RunOptions& options = {});

}  // namespace ggs
