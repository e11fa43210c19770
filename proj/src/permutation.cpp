#include "ggs/permutation.hpp"

#include <string>

namespace ggs {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (Point x : images_) {
    if (x >= images_.size() || seen[x])
      throw std::invalid_argument("not a permutation of degree " +
                                  std::to_string(images_.size()));
    seen[x] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<Point> images(degree);
  for (std::size_t i = 0; i < degree; ++i) images[i] = static_cast<Point>(i);
  return from_images_unchecked(std::move(images));
}

Permutation Permutation::from_images_unchecked(std::vector<Point> images) {
  Permutation result;
  result.images_ = std::move(images);
  return result;
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<Point> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<Point>(i);
  return from_images_unchecked(std::move(inv));
}

Permutation Permutation::pow(long long e) const {
  Permutation base = e < 0 ? inverse() : *this;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  Permutation result = identity(degree());
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

void multiply_into(const Permutation& f, const Permutation& g, std::vector<Point>& out) {
  if (f.degree() != g.degree())
    throw DegreeMismatch("cannot multiply permutations of degree " + std::to_string(f.degree()) +
                         " and " + std::to_string(g.degree()));
  out.resize(f.degree());
  const Point* fi = f.images().data();
  const Point* gi = g.images().data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = gi[fi[i]];
}

Permutation operator*(const Permutation& f, const Permutation& g) {
  std::vector<Point> out;
  multiply_into(f, g, out);
  return Permutation::from_images_unchecked(std::move(out));
}

Permutation commutator(const Permutation& x, const Permutation& y) {
  return x.inverse() * y.inverse() * x * y;
}

Permutation conjugate(const Permutation& x, const Permutation& g) {
  return g.inverse() * x * g;
}

}  // namespace ggs
