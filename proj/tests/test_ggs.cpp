#include <doctest.h>

#include <random>

#include "ggs/ggs.hpp"
#include "support.hpp"

using namespace ggs;
using namespace testing_support;

namespace {

SpecError::Kind rejection(int p, std::vector<std::vector<long long>> rows) {
  try {
    GGSSpec::validate(p, rows);
  } catch (const SpecError& e) {
    return e.kind();
  }
  FAIL("expected a SpecError");
  return SpecError::Kind::NotPrime;
}

}  // namespace

TEST_CASE("validation accepts the standard examples") {
  const auto gs = gupta_sidki();
  CHECK(gs.prime() == 3);
  CHECK(gs.rank() == 1);
  CHECK(gs.vectors() == std::vector<std::vector<int>>{{1, 2}});
  CHECK(is_constant(constant3()));
  CHECK_FALSE(is_constant(gs));
  CHECK_FALSE(is_constant(spec(5, {{1, 0, 0, 0}, {0, 1, 0, 0}})));
  CHECK_FALSE(is_constant(pair3()));
}

TEST_CASE("validation errors name the problem") {
  CHECK(rejection(4, {{1, 2, 3}}) == SpecError::Kind::NotPrime);
  CHECK(rejection(1, {{}}) == SpecError::Kind::NotPrime);
  CHECK(rejection(2, {{1}}) == SpecError::Kind::NotOdd);
  CHECK(rejection(3, {}) == SpecError::Kind::NoVectors);
  CHECK(rejection(3, {{1, 2, 0}}) == SpecError::Kind::BadLength);
  CHECK(rejection(3, {{1, 2}, {2, 1}}) == SpecError::Kind::DependentVectors);
  CHECK(rejection(3, {{0, 0}}) == SpecError::Kind::DependentVectors);
  CHECK(rejection(5, {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}}) == SpecError::Kind::DependentVectors);
  CHECK(std::string(to_string(SpecError::Kind::DependentVectors)) == "DependentVectors");
}

TEST_CASE("dependency certificate is a vanishing combination") {
  const std::vector<std::vector<long long>> rows = {{1, 2, 0, 4}, {0, 1, 1, 1}, {1, 4, 2, 1}};
  try {
    GGSSpec::validate(5, rows);
    FAIL("dependent rows accepted");
  } catch (const SpecError& e) {
    const auto& c = e.certificate();
    REQUIRE(c.size() == 3);
    CHECK(std::any_of(c.begin(), c.end(), [](int x) { return x != 0; }));
    for (std::size_t col = 0; col < 4; ++col) {
      long long s = 0;
      for (std::size_t i = 0; i < 3; ++i) s += c[i] * rows[i][col];
      CHECK(s % 5 == 0);
    }
  }
}

TEST_CASE("entries are reduced mod p") {
  CHECK(spec(3, {{4, -1}}) == gupta_sidki());
  CHECK(spec(5, {{6, 10, -4, 3}}).vectors()[0] == std::vector<int>{1, 0, 1, 3});
}

TEST_CASE("independence agrees with exhaustive enumeration") {
  std::mt19937_64 rng(99);
  int accepted = 0, rejected = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int p = trial % 2 ? 5 : 3;
    std::uniform_int_distribution<int> entry(0, p - 1), count(1, p - 1);
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(count(rng)));
    std::vector<std::vector<long long>> wide;
    for (auto& row : rows) {
      row.resize(static_cast<std::size_t>(p - 1));
      for (auto& x : row) x = entry(rng) * (entry(rng) < p / 2 ? 0 : 1);
      wide.emplace_back(row.begin(), row.end());
    }
    const bool dependent = oracle::dependent(p, rows);
    bool threw = false;
    try {
      GGSSpec::validate(p, wide);
    } catch (const SpecError& e) {
      threw = e.kind() == SpecError::Kind::DependentVectors;
    }
    CHECK(threw == dependent);
    (dependent ? rejected : accepted)++;
  }
  CHECK(accepted > 20);
  CHECK(rejected > 20);
}

TEST_CASE("symmetry of vectors") {
  const int a[] = {1, 1}, b[] = {1, 2}, c[] = {1, 0, 0, 1}, d[] = {1, 2, 2, 3};
  CHECK(is_symmetric(a));
  CHECK_FALSE(is_symmetric(b));
  CHECK(is_symmetric(c));
  CHECK_FALSE(is_symmetric(d));
}

TEST_CASE("normal forms") {
  SUBCASE("scaling the first entry to 1") {
    const auto n = normalize(spec(3, {{2, 1}}));
    CHECK(n.spec == gupta_sidki());
    CHECK(n.which == Normalization::Case::NonSymmetric);
    CHECK(n.transform == std::vector<std::vector<int>>{{2}});
  }
  SUBCASE("already normal") {
    const auto n = normalize(gupta_sidki());
    CHECK(n.spec == gupta_sidki());
    CHECK(n.transform == std::vector<std::vector<int>>{{1}});
    CHECK(n.steps.empty());
  }
  SUBCASE("symmetric family reaches (0,*,...,*,0)") {
    const auto n = normalize(symmetric5());
    CHECK(n.which == Normalization::Case::Symmetric);
    CHECK(n.spec.vectors() == std::vector<std::vector<int>>{{1, 0, 0, 1}, {0, 4, 4, 0}});
  }
  SUBCASE("non-symmetric row moved to the front") {
    const auto n = normalize(spec(5, {{1, 0, 0, 1}, {2, 1, 0, 0}}));
    CHECK(n.which == Normalization::Case::NonSymmetric);
    CHECK(n.spec.vectors()[0] == std::vector<int>{1, 3, 0, 0});
    CHECK_FALSE(is_symmetric(n.spec.vector(0)));
  }
  SUBCASE("transform reproduces the rows") {
    for (const auto& s : {symmetric5(), spec(5, {{0, 1, 2, 0}, {3, 0, 0, 3}}), spec(3, {{2, 2}, {0, 1}})}) {
      const auto n = normalize(s);
      const int p = s.prime();
      for (int i = 0; i < s.rank(); ++i)
        for (int c = 0; c < p - 1; ++c) {
          long long v = 0;
          for (int k = 0; k < s.rank(); ++k) v += n.transform[i][k] * s.vectors()[k][c];
          CHECK(v % p == n.spec.vectors()[i][c]);
        }
    }
  }
  SUBCASE("impossible when every first entry vanishes") {
    CHECK_THROWS_AS(normalize(spec(3, {{0, 1}})), NormalizationImpossible);
    CHECK_THROWS_AS(normalize(spec(5, {{0, 1, 1, 0}})), NormalizationImpossible);
  }
}

TEST_CASE("directed generators of a spec") {
  const auto s = pair3();
  CHECK(directed(s, 3, 1) == Automorphism::directed(3, 3, std::vector<int>{0, 1}));
  CHECK_THROWS_AS(directed(s, 3, 2), std::out_of_range);
  CHECK_THROWS_AS(directed(s, 3, -1), std::out_of_range);
}

TEST_CASE("depth caps") {
  CHECK(depth_cap(3) == 10);
  CHECK(depth_cap(5) == 7);
  CHECK(depth_cap(7) == 5);
  CHECK_THROWS_AS(GroupSession::build(gupta_sidki(), 11), DepthCapExceeded);
  CHECK_THROWS_AS(GroupSession::build(gupta_sidki(), 0), std::invalid_argument);
}

TEST_CASE("sessions") {
  const auto s = GroupSession::build(gupta_sidki(), 2);
  const std::size_t n = 9;
  const auto closure = oracle::closure(oracle_generators(gupta_sidki(), 2), n);
  CHECK(s.group().order_exponent() == oracle::log_p(closure.size(), 3));
  CHECK(s.degree() == 9);
  CHECK(s.projections_commute());
  CHECK(level_image(s.group(), 1).order_exponent() == 1);
  REQUIRE(s.generator_images().size() == 2);
  CHECK(images_of(s.generator_images()[1]) == oracle::directed(3, 2, {1, 2}));

  const auto big = GroupSession::build(triple5(), 3);
  const auto small = big.truncated(2);
  CHECK(small.depth() == 2);
  CHECK(equals(small.group(), level_image(big.group(), 2)));
  CHECK(GroupSession::build(gupta_sidki(), 1).group().order_exponent() == 1);
}

TEST_CASE("all constant vectors generate the same group") {
  for (int depth = 2; depth <= 4; ++depth)
    CHECK(equals(GroupSession::build(spec(3, {{1, 1}}), depth).group(),
                 GroupSession::build(spec(3, {{2, 2}}), depth).group()));
  for (long long c = 2; c < 5; ++c)
    CHECK(equals(GroupSession::build(spec(5, {{1, 1, 1, 1}}), 3).group(),
                 GroupSession::build(spec(5, {{c, c, c, c}}), 3).group()));
  CHECK_FALSE(equals(GroupSession::build(constant3(), 3).group(), GroupSession::build(gupta_sidki(), 3).group()));
}
