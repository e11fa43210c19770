#pragma once

#include <vector>

#include "ggs/ggs.hpp"
#include "oracles.hpp"

namespace testing_support {

inline oracle::Images images_of(const ggs::Permutation& x) { return {x.images().begin(), x.images().end()}; }

inline ggs::Permutation perm(const oracle::Images& images) { return ggs::Permutation(images); }

inline ggs::GGSSpec spec(int p, std::vector<std::vector<long long>> rows) { return ggs::GGSSpec::validate(p, rows); }

inline ggs::GGSSpec gupta_sidki() { return spec(3, {{1, 2}}); }
inline ggs::GGSSpec constant3() { return spec(3, {{1, 1}}); }
inline ggs::GGSSpec pair3() { return spec(3, {{1, 0}, {0, 1}}); }
inline ggs::GGSSpec symmetric5() { return spec(5, {{1, 1, 1, 1}, {1, 0, 0, 1}}); }
inline ggs::GGSSpec triple5() { return spec(5, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}); }

// Leaf images of a, b_1, ..., b_r computed by the oracle.
inline std::vector<oracle::Images> oracle_generators(const ggs::GGSSpec& s, int depth) {
  std::vector<oracle::Images> gens{oracle::rooted(s.prime(), depth, 1)};
  for (const auto& row : s.vectors()) gens.push_back(oracle::directed(s.prime(), depth, row));
  return gens;
}

}  // namespace testing_support
