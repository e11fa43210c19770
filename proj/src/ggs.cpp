#include "ggs/ggs.hpp"

#include <algorithm>
#include <sstream>

namespace ggs {

namespace {

int mod(long long x, int p) {
  long long r = x % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int inverse_mod(int x, int p) {
  // p is prime, so x^(p-2) is the inverse of a nonzero x.
  long long result = 1, base = x % p;
  for (int e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<int>(result);
}

std::vector<std::vector<long long>> widen(const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<long long>> out;
  for (const auto& row : rows) out.emplace_back(row.begin(), row.end());
  return out;
}

// Row operations applied simultaneously to the defining vectors and to the
// transformation matrix that records them.
struct RowOps {
  int p;
  std::vector<std::vector<int>> rows;
  std::vector<std::vector<int>> transform;
  std::vector<std::string> steps;

  RowOps(int p_, std::vector<std::vector<int>> rows_) : p(p_), rows(std::move(rows_)) {
    const std::size_t r = rows.size();
    transform.assign(r, std::vector<int>(r, 0));
    for (std::size_t i = 0; i < r; ++i) transform[i][i] = 1;
  }

  void swap(std::size_t i, std::size_t j) {
    std::swap(rows[i], rows[j]);
    std::swap(transform[i], transform[j]);
    steps.push_back("swap rows " + std::to_string(i + 1) + " and " + std::to_string(j + 1));
  }

  void scale(std::size_t i, int k) {
    for (auto& x : rows[i]) x = mod(static_cast<long long>(x) * k, p);
    for (auto& x : transform[i]) x = mod(static_cast<long long>(x) * k, p);
    steps.push_back("scale row " + std::to_string(i + 1) + " by " + std::to_string(k));
  }

  // rows[i] += k * rows[j]
  void add(std::size_t i, std::size_t j, int k) {
    for (std::size_t c = 0; c < rows[i].size(); ++c)
      rows[i][c] = mod(rows[i][c] + static_cast<long long>(k) * rows[j][c], p);
    for (std::size_t c = 0; c < transform[i].size(); ++c)
      transform[i][c] = mod(transform[i][c] + static_cast<long long>(k) * transform[j][c], p);
    steps.push_back("add " + std::to_string(k) + " * row " + std::to_string(j + 1) + " to row " +
                    std::to_string(i + 1));
  }

  void scale_leads_to_one() {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i][0] != 0 && rows[i][0] != 1) scale(i, inverse_mod(rows[i][0], p));
  }
};

}  // namespace

const char* to_string(SpecError::Kind kind) {
  switch (kind) {
    case SpecError::Kind::NotPrime: return "NotPrime";
    case SpecError::Kind::NotOdd: return "NotOdd";
    case SpecError::Kind::NoVectors: return "NoVectors";
    case SpecError::Kind::BadLength: return "BadLength";
    case SpecError::Kind::DependentVectors: return "DependentVectors";
  }
  return "Unknown";
}

GGSSpec GGSSpec::validate(int p, const std::vector<std::vector<long long>>& vectors) {
  if (!is_prime(p)) throw SpecError(SpecError::Kind::NotPrime, std::to_string(p) + " is not prime");
  if (p == 2) throw SpecError(SpecError::Kind::NotOdd, "p must be an odd prime");
  if (p > 251) throw SpecError(SpecError::Kind::NotPrime, "primes above 251 are not supported");
  if (vectors.empty()) throw SpecError(SpecError::Kind::NoVectors, "at least one defining vector is required");

  std::vector<std::vector<int>> rows;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != static_cast<std::size_t>(p - 1))
      throw SpecError(SpecError::Kind::BadLength,
                      "vector " + std::to_string(i + 1) + " has length " + std::to_string(vectors[i].size()) +
                          ", expected p-1 = " + std::to_string(p - 1));
    std::vector<int> row;
    for (long long x : vectors[i]) row.push_back(mod(x, p));
    rows.push_back(std::move(row));
  }

  // Gaussian elimination; combos[k] expresses echelon[k] in the original rows.
  const std::size_t r = rows.size();
  std::vector<std::vector<int>> echelon, combos;
  std::vector<int> pivots;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<int> cur = rows[i];
    std::vector<int> combo(r, 0);
    combo[i] = 1;
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      const int f = cur[pivots[k]];
      if (f == 0) continue;
      for (std::size_t c = 0; c < cur.size(); ++c) cur[c] = mod(cur[c] - static_cast<long long>(f) * echelon[k][c], p);
      for (std::size_t c = 0; c < r; ++c) combo[c] = mod(combo[c] - static_cast<long long>(f) * combos[k][c], p);
    }
    auto lead = std::find_if(cur.begin(), cur.end(), [](int x) { return x != 0; });
    if (lead == cur.end()) {
      std::ostringstream msg;
      msg << "defining vectors are linearly dependent over F_" << p << ":";
      for (std::size_t c = 0; c < r; ++c)
        if (combo[c] != 0) msg << " +" << combo[c] << "*e" << (c + 1);
      msg << " = 0";
      throw SpecError(SpecError::Kind::DependentVectors, msg.str(), combo);
    }
    const int col = static_cast<int>(lead - cur.begin());
    const int inv = inverse_mod(*lead, p);
    for (auto& x : cur) x = mod(static_cast<long long>(x) * inv, p);
    for (auto& x : combo) x = mod(static_cast<long long>(x) * inv, p);
    // Keep the echelon reduced so each pivot column is clear in the other rows.
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      const int f = echelon[k][col];
      if (f == 0) continue;
      for (std::size_t c = 0; c < cur.size(); ++c)
        echelon[k][c] = mod(echelon[k][c] - static_cast<long long>(f) * cur[c], p);
      for (std::size_t c = 0; c < r; ++c)
        combos[k][c] = mod(combos[k][c] - static_cast<long long>(f) * combo[c], p);
    }
    echelon.push_back(std::move(cur));
    combos.push_back(std::move(combo));
    pivots.push_back(col);
  }
  return GGSSpec(p, std::move(rows), std::move(pivots));
}

bool is_constant(const GGSSpec& spec) {
  if (spec.rank() != 1) return false;
  auto v = spec.vector(0);
  return std::all_of(v.begin(), v.end(), [&](int x) { return x == v[0]; });
}

bool is_symmetric(std::span<const int> vector) {
  const std::size_t n = vector.size();
  for (std::size_t j = 0; j < n; ++j)
    if (vector[j] != vector[n - 1 - j]) return false;
  return true;
}

Normalization normalize(const GGSSpec& spec) {
  const int p = spec.prime();
  RowOps ops(p, spec.vectors());
  auto& rows = ops.rows;
  const std::size_t r = rows.size();

  const bool all_symmetric =
      std::all_of(rows.begin(), rows.end(), [](const auto& row) { return is_symmetric(row); });

  if (!all_symmetric) {
    std::size_t chosen = r;
    for (std::size_t i = 0; i < r && chosen == r; ++i)
      if (!is_symmetric(rows[i]) && rows[i][0] != 0) chosen = i;
    if (chosen == r) {
      // A symmetric row with nonzero first entry keeps a non-symmetric row
      // non-symmetric when added to it.
      std::size_t asym = r, donor = r;
      for (std::size_t i = 0; i < r; ++i) {
        if (asym == r && !is_symmetric(rows[i])) asym = i;
        if (donor == r && rows[i][0] != 0) donor = i;
      }
      if (donor == r)
        throw NormalizationImpossible(
            "step 'scale first entry to 1' failed: every defining vector has first entry 0");
      ops.add(asym, donor, 1);
      chosen = asym;
    }
    if (chosen != 0) ops.swap(0, chosen);
    ops.scale_leads_to_one();
    return {GGSSpec::validate(p, widen(rows)), ops.transform, Normalization::Case::NonSymmetric, ops.steps};
  }

  std::size_t lead_row = r;
  for (std::size_t i = 0; i < r && lead_row == r; ++i)
    if (rows[i][0] != 0) lead_row = i;
  if (lead_row == r)
    throw NormalizationImpossible(
        "step 'scale first entry to 1' failed: every defining vector has first entry 0");
  if (lead_row != 0) ops.swap(0, lead_row);
  ops.scale_leads_to_one();
  for (std::size_t i = 1; i < r; ++i)
    if (rows[i][0] != 0) ops.add(i, 0, p - rows[i][0]);
  if (r >= 2) {
    const auto& second = rows[1];
    auto it = std::find_if(second.begin(), second.end(), [](int x) { return x != 0; });
    if (it == second.end())
      throw NormalizationImpossible("step 'clear row 1 against row 2' failed: row 2 vanished");
    const std::size_t j = static_cast<std::size_t>(it - second.begin());
    const int k = mod(static_cast<long long>(rows[0][j]) * inverse_mod(*it, p), p);
    if (k != 0) ops.add(0, 1, p - k);
  }
  return {GGSSpec::validate(p, widen(rows)), ops.transform, Normalization::Case::Symmetric, ops.steps};
}

Automorphism directed(const GGSSpec& spec, int depth, int i) {
  if (i < 0 || i >= spec.rank())
    throw std::out_of_range("generator index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(spec.rank()) + ")");
  return Automorphism::directed(spec.prime(), depth, spec.vector(i));
}

int depth_cap(int p) {
  int depth = 0;
  std::size_t n = static_cast<std::size_t>(p);
  while (n <= kDefaultDegreeCap) {
    ++depth;
    n *= static_cast<std::size_t>(p);
  }
  return depth;
}

GroupSession GroupSession::build(const GGSSpec& spec, int depth, BuildOptions options) {
  const int p = spec.prime();
  if (depth < 1) throw std::invalid_argument("session depth must be at least 1");
  if (!options.allow_large && depth > depth_cap(p))
    throw DepthCapExceeded("p^depth = " + std::to_string(p) + "^" + std::to_string(depth) +
                           " exceeds the degree cap " + std::to_string(kDefaultDegreeCap));

  Automorphism a = Automorphism::rooted(p, depth, 1);
  std::vector<Automorphism> b;
  for (int i = 0; i < spec.rank(); ++i) b.push_back(directed(spec, depth, i));

  std::vector<Permutation> images;
  images.push_back(to_permutation(a, depth));
  for (const auto& bi : b) images.push_back(to_permutation(bi, depth));

  bool commute = true;
  for (int m = 1; m < depth && commute; ++m) {
    commute = commute && restrict_to_level(images[0], p, depth, m) == to_permutation(a, m);
    for (std::size_t i = 0; i < b.size(); ++i)
      commute = commute && restrict_to_level(images[i + 1], p, depth, m) == to_permutation(b[i], m);
  }

  auto group = GroupHandle::generate(p, ipow(static_cast<std::size_t>(p), depth), images);
  if (level_image(group, 1).order_exponent() != 1)
    throw std::logic_error("level-1 image is not cyclic of order p");
  return GroupSession(spec, depth, options, std::move(a), std::move(b), std::move(images),
                      std::move(group), commute);
}

}  // namespace ggs
