#include <doctest.h>

#include "property_suites.hpp"

namespace ps = property_suites;

constexpr int kCases = 1000;

TEST_CASE("to_permutation is a homomorphism") { CHECK(ps::homomorphism(kCases, 1) == 0); }
TEST_CASE("inverse round-trips") { CHECK(ps::inverse_round_trip(kCases, 2) == 0); }
TEST_CASE("composition is associative") { CHECK(ps::associativity(kCases, 3) == 0); }
TEST_CASE("sections are consistent with products, psi and conjugation by a") {
  CHECK(ps::section_consistency(kCases, 4) == 0);
}
TEST_CASE("[a^n, b] expands as a product of conjugates of [a, b]") {
  CHECK(ps::commutator_expansion(kCases, 5) == 0);
}
TEST_CASE("level restriction commutes with truncation") { CHECK(ps::restriction_commutes(kCases, 6) == 0); }
TEST_CASE("normalization preserves the generated group") {
  CHECK(ps::normalization_preserves_group(kCases, 8) == 0);
}

TEST_CASE("vertex indices are a bijection on every level") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < kCases; ++i) {
    const int p = i % 2 ? 5 : 3;
    const int level = std::uniform_int_distribution<int>(0, 4)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, ggs::ipow(p, level) - 1)(rng);
    const auto v = ggs::Vertex::from_index(k, level, p);
    REQUIRE(v.level() == level);
    REQUIRE(v.index(p) == k);
  }
}

TEST_CASE("a broken identity is detected") {
  // Guards against suites that cannot fail: composing in the wrong order
  // must break the homomorphism on random input.
  std::mt19937_64 rng(9);
  int mismatches = 0;
  for (int i = 0; i < 50; ++i) {
    const auto f = ps::random_automorphism(3, 3, rng);
    const auto g = ps::random_automorphism(3, 3, rng);
    mismatches += ggs::to_permutation(ggs::compose(f, g), 3) != ggs::to_permutation(g, 3) * ggs::to_permutation(f, 3);
  }
  CHECK(mismatches > 25);
}
