#include <doctest.h>

#include "ggs/permutation.hpp"

using ggs::Permutation;

TEST_CASE("construction rejects non-bijections") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), std::invalid_argument);
  CHECK_NOTHROW(Permutation({2, 0, 1}));
  CHECK(Permutation(std::vector<ggs::Point>{}).degree() == 0);
}

TEST_CASE("product applies the left factor first") {
  const Permutation f({1, 2, 0});
  const Permutation g({1, 0, 2});
  const auto fg = f * g;
  for (ggs::Point x = 0; x < 3; ++x) CHECK(fg[x] == g[f[x]]);
  CHECK(fg != g * f);
}

TEST_CASE("identity, inverse and powers") {
  const Permutation c({1, 2, 3, 4, 0});
  CHECK((c * c.inverse()).is_identity());
  CHECK(c.pow(5).is_identity());
  CHECK(c.pow(-1) == c.inverse());
  CHECK(c.pow(7) == c.pow(2));
  CHECK(c.pow(0) == Permutation::identity(5));
  CHECK(c.pow(2) == c * c);
}

TEST_CASE("commutator and conjugate follow x^g = g^-1 x g") {
  const Permutation x({1, 0, 2, 3});
  const Permutation g({1, 2, 3, 0});
  CHECK(ggs::conjugate(x, g) == g.inverse() * x * g);
  CHECK(ggs::commutator(x, g) == x.inverse() * g.inverse() * x * g);
  CHECK(ggs::commutator(x, g) == x.inverse() * ggs::conjugate(x, g));
  CHECK(ggs::commutator(x, x).is_identity());
}

TEST_CASE("degree mismatch is reported") {
  CHECK_THROWS_AS(Permutation({1, 0}) * Permutation({0, 1, 2}), ggs::DegreeMismatch);
}

TEST_CASE("multiply_into matches operator*") {
  const Permutation f({2, 0, 1, 3});
  const Permutation g({3, 2, 1, 0});
  std::vector<ggs::Point> out;
  ggs::multiply_into(f, g, out);
  CHECK(Permutation(out) == f * g);
}
