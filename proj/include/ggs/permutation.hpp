#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ggs {

using Point = std::uint32_t;

class DegreeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bijection of {0, ..., degree-1}.
///
/// Products are read left to right: `f * g` applies f first and then g, so
/// `(f * g)[x] == g[f[x]]`. This matches the right-action convention used for
/// tree automorphisms (`x^g = g^-1 x g`, `[x, y] = x^-1 y^-1 x y`).
class Permutation {
 public:
  Permutation() = default;

  /// Validates that `images` is a bijection; throws std::invalid_argument.
  explicit Permutation(std::vector<Point> images);

  static Permutation identity(std::size_t degree);
  /// Caller guarantees `images` is a bijection.
  static Permutation from_images_unchecked(std::vector<Point> images);

  std::size_t degree() const noexcept { return images_.size(); }
  Point operator[](Point x) const noexcept { return images_[x]; }
  std::span<const Point> images() const noexcept { return images_; }

  bool is_identity() const noexcept;
  Permutation inverse() const;
  Permutation pow(long long e) const;

  friend Permutation operator*(const Permutation& f, const Permutation& g);
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Point> images_;
};

/// x^-1 y^-1 x y
Permutation commutator(const Permutation& x, const Permutation& y);
/// g^-1 x g
Permutation conjugate(const Permutation& x, const Permutation& g);

/// Writes f * g into `out` (resized as needed).
void multiply_into(const Permutation& f, const Permutation& g, std::vector<Point>& out);

}  // namespace ggs
