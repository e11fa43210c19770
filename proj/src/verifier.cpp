#include "ggs/verifier.hpp"

#include <algorithm>
#include <chrono>

namespace ggs {

const char* to_string(Status status) {
  switch (status) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::Skipped: return "skipped";
    case Status::Vacuous: return "vacuous";
  }
  return "unknown";
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::HasCSP: return "HasCSP";
    case Classification::ConstantVectorException: return "ConstantVectorException";
  }
  return "unknown";
}

Classification classify_csp(const GGSSpec& spec) {
  return is_constant(spec) ? Classification::ConstantVectorException : Classification::HasCSP;
}

// --- tower ----------------------------------------------------------------

QuotientTower::QuotientTower(GroupSession top) : top_(std::move(top)) {}

const GroupSession& QuotientTower::session(int n) {
  if (n < 1 || n > depth()) throw std::out_of_range("quotient level out of range");
  if (n == depth()) return top_;
  auto it = sessions_.find(n);
  if (it == sessions_.end()) it = sessions_.emplace(n, top_.truncated(n)).first;
  return it->second;
}

const GroupHandle& QuotientTower::derived(int n) { return cached(Slot::Derived, n); }
const GroupHandle& QuotientTower::second_derived(int n) { return cached(Slot::SecondDerived, n); }
const GroupHandle& QuotientTower::gamma3(int n) { return cached(Slot::Gamma3, n); }
const GroupHandle& QuotientTower::stab1(int n) { return cached(Slot::Stab1, n); }
const GroupHandle& QuotientTower::stab1_derived(int n) { return cached(Slot::Stab1Derived, n); }
const GroupHandle& QuotientTower::stab1_gamma3(int n) { return cached(Slot::Stab1Gamma3, n); }
const GroupHandle& QuotientTower::derived_blocks(int n) { return cached(Slot::DerivedBlocks, n); }
const GroupHandle& QuotientTower::gamma3_blocks(int n) { return cached(Slot::Gamma3Blocks, n); }

const GroupHandle& QuotientTower::cached(Slot slot, int n) {
  const auto key = std::make_pair(slot, n);
  if (auto it = groups_.find(key); it != groups_.end()) return it->second;
  GroupHandle built = [&] {
    switch (slot) {
      case Slot::Derived: return ggs::derived(group(n));
      case Slot::SecondDerived: return ggs::derived(derived(n));
      case Slot::Gamma3: return commutator_subgroup(derived(n), group(n), group(n));
      case Slot::Stab1: return level_stabilizer(group(n), 1);
      case Slot::Stab1Derived: return ggs::derived(stab1(n));
      case Slot::Stab1Gamma3: return commutator_subgroup(stab1_derived(n), stab1(n), stab1(n));
      case Slot::DerivedBlocks: return block_product(derived(n - 1), n);
      case Slot::Gamma3Blocks: return block_product(gamma3(n - 1), n);
    }
    throw std::logic_error("unknown slot");
  }();
  return groups_.emplace(key, std::move(built)).first->second;
}

GroupHandle QuotientTower::block_product(const GroupHandle& factor, int n) {
  const int p = prime();
  std::vector<Permutation> gens;
  for (const auto& h : factor.small_generating_set()) {
    const auto portrait = Automorphism::from_permutation(p, n - 1, h);
    for (int j = 0; j < p; ++j)
      gens.push_back(to_permutation(embed_at_vertex(portrait, Vertex({static_cast<std::uint8_t>(j)}), n), n));
  }
  return GroupHandle::generate(p, ipow(static_cast<std::size_t>(p), n), std::move(gens));
}

// --- helpers --------------------------------------------------------------

namespace check {

const std::vector<std::string>& all_ids() {
  static const std::vector<std::string> ids = {
      kAbelianization, kStab1DerivedInGamma3, kGamma3Product,      kKeyCongruence,       kSubdirect,
      kRegularBranch,  kPsi2SecondDerived,    kRankGrowth,          kDerivedContainsStab, kSecondDerivedContainsStab};
  return ids;
}

}  // namespace check

namespace {

constexpr const char* kNotExceptional = "hypothesis G != constant-vector group not met";

Verdict start(const char* id, const QuotientTower& tower) {
  Verdict v;
  v.claim_id = id;
  v.level = tower.depth();
  return v;
}

Verdict skipped(Verdict v, std::string reason) {
  v.status = Status::Skipped;
  v.note = std::move(reason);
  return v;
}

Verdict vacuous(Verdict v, std::string reason) {
  v.status = Status::Vacuous;
  v.note = std::move(reason);
  return v;
}

Verdict decide(Verdict v, bool holds) {
  v.status = holds ? Status::Holds : Status::Fails;
  return v;
}

Witness element_witness(std::string kind, std::string description, int level, Permutation x) {
  Witness w;
  w.kind = std::move(kind);
  w.description = std::move(description);
  w.level = level;
  w.element = std::move(x);
  return w;
}

// Equality of two subgroups of the level-n leaf action, both containments.
Verdict equality(Verdict v, int n, const GroupHandle& lhs, const char* lhs_name, const GroupHandle& rhs,
                 const char* rhs_name) {
  v.details[std::string(lhs_name) + "_exponent"] = lhs.order_exponent();
  v.details[std::string(rhs_name) + "_exponent"] = rhs.order_exponent();
  if (auto x = find_non_member(lhs, rhs)) {
    v.witness = element_witness("non_member", std::string("element of ") + lhs_name + " outside " + rhs_name, n, *x);
    return decide(std::move(v), false);
  }
  if (auto x = find_non_member(rhs, lhs)) {
    v.witness = element_witness("non_member", std::string("element of ") + rhs_name + " outside " + lhs_name, n, *x);
    return decide(std::move(v), false);
  }
  return decide(std::move(v), true);
}

Permutation section_image(const Permutation& x, int p, int n, int digit) {
  return to_permutation(Automorphism::from_permutation(p, n, x).child(digit), n - 1);
}

}  // namespace

Verdict containment_verdict(const std::string& id, int level, const GroupHandle& x, const GroupHandle& y) {
  Verdict v;
  v.claim_id = id;
  v.level = level;
  v.details["sub_exponent"] = x.order_exponent();
  v.details["super_exponent"] = y.order_exponent();
  if (auto w = find_non_member(x, y)) {
    v.witness = element_witness("non_member", "element of the smaller group outside the larger one", level, *w);
    return decide(std::move(v), false);
  }
  return decide(std::move(v), true);
}

// --- checks ---------------------------------------------------------------

Verdict check_abelianization(QuotientTower& tower) {
  auto v = start(check::kAbelianization, tower);
  const int n = tower.depth();
  const int r = tower.spec().rank();
  const auto& g = tower.group(n);
  const auto& d = tower.derived(n);
  const int index = g.order_exponent() - d.order_exponent();
  v.details["index_exponent"] = index;
  v.details["expected_exponent"] = r + 1;
  if (n < 2) return vacuous(std::move(v), "holds at threshold N >= 2 only (G_1 is cyclic of order p)");
  const auto phi = frattini(g);
  v.details["frattini_exponent"] = phi.order_exponent();
  if (index != r + 1) {
    Witness w;
    w.kind = "index_mismatch";
    w.description = "|G_N : G_N'| differs from p^(r+1)";
    w.level = n;
    w.data = {{"expected_exponent", r + 1}, {"actual_exponent", index}};
    v.witness = std::move(w);
    return decide(std::move(v), false);
  }
  if (auto x = find_non_member(phi, d)) {
    v.witness = element_witness("non_member", "element of the Frattini subgroup outside G_N'", n, *x);
    return decide(std::move(v), false);
  }
  return decide(std::move(v), true);
}

Verdict check_gamma3_product(QuotientTower& tower) {
  auto v = start(check::kGamma3Product, tower);
  if (is_constant(tower.spec())) return skipped(std::move(v), kNotExceptional);
  const int n = tower.depth();
  if (n < 3) return vacuous(std::move(v), "requires depth >= 3");
  return equality(std::move(v), n, tower.stab1_gamma3(n), "gamma3_stab1", tower.gamma3_blocks(n), "gamma3_blocks");
}

Verdict check_key_congruence(QuotientTower& tower) {
  auto v = start(check::kKeyCongruence, tower);
  const auto& spec = tower.spec();
  const int p = spec.prime();
  const int n = tower.depth();
  if (is_constant(spec)) return skipped(std::move(v), "m != 1 required (constant vector)");
  const Normalization norm = normalize(spec);
  if (norm.which == Normalization::Case::Symmetric)
    return skipped(std::move(v), "all defining vectors symmetric; the symmetric case is covered by regular_branch");
  const auto row = norm.spec.vector(0);
  const int m = row[static_cast<std::size_t>(p - 2)];
  v.details["m"] = m;
  if (m == 1) return skipped(std::move(v), "m != 1 required (last entry of the normalised vector is 1)");
  if (n < 3) return vacuous(std::move(v), "requires depth >= 3");

  const Automorphism a = Automorphism::rooted(p, n, 1);
  const Automorphism b = Automorphism::directed(p, n, row);
  const bool in_group = tower.group(n).contains(to_permutation(b, n));
  v.details["normalised_generator_in_group"] = in_group ? 1 : 0;

  // prod_{k=0}^{p-1} [b^(a^-k), b^(a^(1-k))]^(m^k)
  Automorphism lhs = Automorphism::identity(p, n);
  long long mk = 1;
  for (int k = 0; k < p; ++k) {
    const auto left = conjugate(b, power(a, -k));
    const auto right = conjugate(b, power(a, 1 - k));
    lhs = compose(lhs, power(commutator(left, right), mk));
    mk = mk * m % p;
  }
  const Automorphism a_low = Automorphism::rooted(p, n - 1, 1);
  const Automorphism b_low = Automorphism::directed(p, n - 1, row);
  const auto target = power(commutator(a_low, b_low), 1 - m);
  const auto rhs = embed_at_vertex(target, Vertex({0}), n);
  const auto quotient = compose(lhs, inverse(rhs));

  const auto& blocks = tower.gamma3_blocks(n);
  const auto q = to_permutation(quotient, n);
  if (!in_group || !blocks.contains(q)) {
    v.witness = element_witness("non_member",
                                in_group ? "lhs * rhs^-1 lies outside p copies of gamma_3(G_{N-1})"
                                         : "normalised directed generator not in G_N",
                                n, q);
    return decide(std::move(v), false);
  }
  return decide(std::move(v), true);
}

Verdict check_regular_branch(QuotientTower& tower) {
  auto v = start(check::kRegularBranch, tower);
  const auto& spec = tower.spec();
  if (is_constant(spec)) return skipped(std::move(v), std::string("r >= 2 required; ") + kNotExceptional);
  const bool all_symmetric = std::all_of(spec.vectors().begin(), spec.vectors().end(),
                                         [](const auto& row) { return is_symmetric(row); });
  v.details["symmetric_case"] = all_symmetric ? 1 : 0;
  if (spec.rank() == 1) v.note = "extended: r = 1 non-constant, relies on the GGS branch results rather than the r >= 2 statement";
  const int n = tower.depth();
  if (n < 3) return vacuous(std::move(v), "requires depth >= 3");
  return equality(std::move(v), n, tower.stab1_derived(n), "stab1_derived", tower.derived_blocks(n), "derived_blocks");
}

Verdict check_stab1_derived_in_gamma3(QuotientTower& tower) {
  auto v = start(check::kStab1DerivedInGamma3, tower);
  const int n = tower.depth();
  if (n < 2) return vacuous(std::move(v), "requires depth >= 2");
  return containment_verdict(v.claim_id, n, tower.stab1_derived(n), tower.gamma3(n));
}

Verdict check_subdirect(QuotientTower& tower) {
  auto v = start(check::kSubdirect, tower);
  if (is_constant(tower.spec())) return skipped(std::move(v), kNotExceptional);
  const int n = tower.depth();
  if (n < 3) return vacuous(std::move(v), "requires depth >= 3");
  const int p = tower.prime();
  const auto& d = tower.derived(n);
  const auto& lower = tower.group(n - 1);
  const auto gens = d.small_generating_set();
  for (int j = 0; j < p; ++j) {
    std::vector<Permutation> sections;
    for (const auto& x : gens) sections.push_back(section_image(x, p, n, j));
    const auto projection = GroupHandle::generate(p, lower.degree(), std::move(sections));
    v.details["projection_" + std::to_string(j) + "_exponent"] = projection.order_exponent();
    if (auto x = find_non_member(lower, projection)) {
      auto w = element_witness("non_member", "element of G_{N-1} outside a first-level projection of G_N'", n - 1, *x);
      w.data["vertex"] = j;
      v.witness = std::move(w);
      return decide(std::move(v), false);
    }
  }
  v.details["lower_exponent"] = lower.order_exponent();
  return decide(std::move(v), true);
}

Verdict check_psi2_second_derived(QuotientTower& tower) {
  auto v = start(check::kPsi2SecondDerived, tower);
  const int r = tower.spec().rank();
  if (r < 2) return skipped(std::move(v), "r >= 2 required");
  const int n = tower.depth();
  if (n < 3) return vacuous(std::move(v), "requires depth >= 3");
  const int p = tower.prime();
  const auto& target = tower.second_derived(n);
  const auto gens = tower.derived(n - 2).small_generating_set();
  v.details["second_derived_exponent"] = target.order_exponent();
  v.details["factor_exponent"] = tower.derived(n - 2).order_exponent();
  std::int64_t tested = 0;
  for (const auto& h : gens) {
    const auto portrait = Automorphism::from_permutation(p, n - 2, h);
    for (std::size_t k = 0; k < static_cast<std::size_t>(p * p); ++k) {
      const Vertex vertex = Vertex::from_index(k, 2, p);
      const auto x = to_permutation(embed_at_vertex(portrait, vertex, n), n);
      ++tested;
      if (!target.contains(x)) {
        auto w = element_witness("non_member", "level-2 copy of a G' generator outside G_N''", n, x);
        w.data["vertex_index"] = static_cast<std::int64_t>(k);
        v.witness = std::move(w);
        v.details["embeddings_tested"] = tested;
        return decide(std::move(v), false);
      }
    }
  }
  v.details["embeddings_tested"] = tested;
  return decide(std::move(v), true);
}

Verdict check_rank_growth(QuotientTower& tower) {
  auto v = start(check::kRankGrowth, tower);
  const int r = tower.spec().rank();
  const int n = tower.depth();
  if (n < r + 1) return vacuous(std::move(v), "requires depth >= r+1");
  for (int k = 2; k <= std::min(n, r + 1); ++k) {
    const int d = rank(tower.group(k));
    v.details["rank_G" + std::to_string(k)] = d;
    const bool ok = d >= k && (k != r + 1 || d == r + 1);
    if (!ok) {
      Witness w;
      w.kind = "rank_mismatch";
      w.description = "rank of G_n below n, or not r+1 at n = r+1";
      w.level = k;
      w.data = {{"level", k}, {"expected_min", k}, {"actual", d}};
      v.witness = std::move(w);
      return decide(std::move(v), false);
    }
  }
  return decide(std::move(v), true);
}

Verdict check_derived_contains_stab(QuotientTower& tower) {
  const int r = tower.spec().rank();
  const int n = tower.depth();
  if (n <= r + 1) throw VacuousCheck("st(r+1) is trivial in G_N for N <= r+1");
  auto v = containment_verdict(check::kDerivedContainsStab, n, level_stabilizer(tower.group(n), r + 1),
                               tower.derived(n));
  v.details["stabilizer_level"] = r + 1;
  return v;
}

Verdict check_second_derived_contains_stab(QuotientTower& tower) {
  const auto& spec = tower.spec();
  if (is_constant(spec)) {
    Verdict v = start(check::kSecondDerivedContainsStab, tower);
    return skipped(std::move(v), kNotExceptional);
  }
  const int r = spec.rank();
  const int n = tower.depth();
  if (n <= r + 3) throw VacuousCheck("st(r+3) is trivial in G_N for N <= r+3");
  auto v = containment_verdict(check::kSecondDerivedContainsStab, n, level_stabilizer(tower.group(n), r + 3),
                               tower.second_derived(n));
  v.details["stabilizer_level"] = r + 3;
  if (r == 1) v.note = "extended: r = 1, relies on the GGS branch results for regular branching";
  return v;
}

Verdict run_check(QuotientTower& tower, const std::string& id) {
  using Fn = Verdict (*)(QuotientTower&);
  static const std::map<std::string, Fn> table = {
      {check::kAbelianization, check_abelianization},
      {check::kStab1DerivedInGamma3, check_stab1_derived_in_gamma3},
      {check::kGamma3Product, check_gamma3_product},
      {check::kKeyCongruence, check_key_congruence},
      {check::kSubdirect, check_subdirect},
      {check::kRegularBranch, check_regular_branch},
      {check::kPsi2SecondDerived, check_psi2_second_derived},
      {check::kRankGrowth, check_rank_growth},
      {check::kDerivedContainsStab, check_derived_contains_stab},
      {check::kSecondDerivedContainsStab, check_second_derived_contains_stab},
  };
  auto it = table.find(id);
  if (it == table.end()) throw std::invalid_argument("unknown check id '" + id + "'");
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = it->second(tower);
  } catch (const VacuousCheck& e) {
    v.claim_id = id;
    v.level = tower.depth();
    v.status = Status::Vacuous;
    v.note = e.what();
  } catch (const NormalizationImpossible& e) {
    v.claim_id = id;
    v.level = tower.depth();
    v.status = Status::Skipped;
    v.note = std::string("normal form unavailable: ") + e.what();
  }
  v.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

bool Report::any_failed() const {
  return std::any_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.status == Status::Fails; });
}

const char* const kClassificationNote =
    "definitional: only the constant-vector GGS group lacks the congruence subgroup property; "
    "the verdicts are evidence at level N only";

int default_depth(const GGSSpec& spec) { return std::min(spec.rank() + 4, depth_cap(spec.prime())); }

Report run_all(const GGSSpec& spec, int depth, const RunOptions& options) {
  for (const auto& id : options.checks)
    if (std::find(check::all_ids().begin(), check::all_ids().end(), id) == check::all_ids().end())
      throw std::invalid_argument("unknown check id '" + id + "'");
  if (depth <= 0) depth = default_depth(spec);
  QuotientTower tower(GroupSession::build(spec, depth, options.build));
  Report report{spec, depth, {}, classify_csp(spec), kClassificationNote};
  for (const auto& id : check::all_ids())
    if (options.checks.empty() || options.checks.count(id)) report.verdicts.push_back(run_check(tower, id));
  return report;
}

}  // namespace ggs
