#include "ggs/tree_autom.hpp"

#include <limits>
#include <string>

namespace ggs {

struct Automorphism::Node {
  std::vector<std::uint8_t> perm;  // digit images on the first level below this vertex
  std::vector<NodePtr> children;   // empty at depth 0
  bool trivial = true;
};

namespace {

void require_prime(int p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw std::invalid_argument("arity must be an odd prime, got " + std::to_string(p));
}

void require_depth(int depth) {
  if (depth < 0) throw std::invalid_argument("negative depth " + std::to_string(depth));
}

int mod(long long x, int p) {
  long long r = x % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

bool is_identity_label(const std::vector<std::uint8_t>& perm) {
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != i) return false;
  return true;
}

std::vector<std::uint8_t> identity_label(int p) {
  std::vector<std::uint8_t> perm(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) perm[i] = static_cast<std::uint8_t>(i);
  return perm;
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::size_t ipow(std::size_t p, int e) {
  std::size_t result = 1;
  for (int i = 0; i < e; ++i) {
    if (result > (std::size_t{1} << 53) / p) throw std::overflow_error("p^e too large");
    result *= p;
  }
  return result;
}

// --- Vertex ---------------------------------------------------------------

Vertex Vertex::from_index(std::size_t index, int level, int p) {
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(level));
  for (int i = level - 1; i >= 0; --i) {
    digits[i] = static_cast<std::uint8_t>(index % p);
    index /= p;
  }
  if (index != 0) throw std::out_of_range("vertex index exceeds level size");
  return Vertex(std::move(digits));
}

std::size_t Vertex::index(int p) const noexcept {
  std::size_t k = 0;
  for (auto d : digits_) k = k * p + d;
  return k;
}

Vertex Vertex::child(int digit) const {
  auto digits = digits_;
  digits.push_back(static_cast<std::uint8_t>(digit));
  return Vertex(std::move(digits));
}

// --- node arithmetic ------------------------------------------------------

Automorphism::NodePtr Automorphism::identity_node(int p, int depth) {
  auto leaf = std::make_shared<Node>();
  leaf->perm = identity_label(p);
  NodePtr current = leaf;
  for (int d = 1; d <= depth; ++d) {
    auto node = std::make_shared<Node>();
    node->perm = identity_label(p);
    node->children.assign(static_cast<std::size_t>(p), current);
    current = node;
  }
  return current;
}

Automorphism::NodePtr Automorphism::compose_nodes(const NodePtr& f, const NodePtr& g, int p,
                                                  int depth) {
  if (depth == 0 || g->trivial) return f;
  if (f->trivial) return g;
  auto node = std::make_shared<Node>();
  node->perm.resize(static_cast<std::size_t>(p));
  node->children.resize(static_cast<std::size_t>(p));
  for (int x = 0; x < p; ++x) {
    const int fx = f->perm[x];
    node->perm[x] = g->perm[fx];
    node->children[x] = compose_nodes(f->children[x], g->children[fx], p, depth - 1);
  }
  node->trivial = is_identity_label(node->perm);
  for (const auto& c : node->children) node->trivial = node->trivial && c->trivial;
  return node;
}

Automorphism::NodePtr Automorphism::inverse_node(const NodePtr& f, int p, int depth) {
  if (depth == 0 || f->trivial) return f;
  auto node = std::make_shared<Node>();
  node->perm.resize(static_cast<std::size_t>(p));
  node->children.resize(static_cast<std::size_t>(p));
  for (int x = 0; x < p; ++x) {
    node->perm[f->perm[x]] = static_cast<std::uint8_t>(x);
    node->children[f->perm[x]] = inverse_node(f->children[x], p, depth - 1);
  }
  node->trivial = false;
  return node;
}

Automorphism::NodePtr Automorphism::truncate_node(const NodePtr& f, int p, int depth) {
  if (f->trivial) return identity_node(p, depth);
  if (depth == 0) return identity_node(p, 0);
  auto node = std::make_shared<Node>();
  node->perm = f->perm;
  node->children.resize(static_cast<std::size_t>(p));
  node->trivial = is_identity_label(node->perm);
  for (int x = 0; x < p; ++x) {
    node->children[x] = truncate_node(f->children[x], p, depth - 1);
    node->trivial = node->trivial && node->children[x]->trivial;
  }
  return node;
}

bool Automorphism::equal_nodes(const NodePtr& f, const NodePtr& g, int depth) {
  if (f == g || depth == 0) return true;
  if (f->trivial && g->trivial) return true;
  if (f->trivial != g->trivial || f->perm != g->perm) return false;
  for (std::size_t x = 0; x < f->children.size(); ++x)
    if (!equal_nodes(f->children[x], g->children[x], depth - 1)) return false;
  return true;
}

void Automorphism::fill_permutation(const Node& node, int p, int level, std::size_t block,
                                    Point in_offset, Point out_offset, Point* out) {
  if (level == 0) {
    out[in_offset] = out_offset;
    return;
  }
  if (node.trivial) {
    for (std::size_t i = 0; i < block * p; ++i)
      out[in_offset + i] = out_offset + static_cast<Point>(i);
    return;
  }
  for (int x = 0; x < p; ++x)
    fill_permutation(*node.children[x], p, level - 1, block / p,
                     in_offset + static_cast<Point>(x * block),
                     out_offset + static_cast<Point>(node.perm[x] * block), out);
}

// --- constructors ---------------------------------------------------------

Automorphism Automorphism::identity(int p, int depth) {
  require_prime(p);
  require_depth(depth);
  return Automorphism(p, depth, identity_node(p, depth));
}

Automorphism Automorphism::rooted(int p, int depth, long long power) {
  require_prime(p);
  require_depth(depth);
  const int k = mod(power, p);
  if (depth == 0 || k == 0) return Automorphism(p, depth, identity_node(p, depth));
  auto node = std::make_shared<Node>();
  node->perm.resize(static_cast<std::size_t>(p));
  for (int x = 0; x < p; ++x) node->perm[x] = static_cast<std::uint8_t>((x + k) % p);
  node->children.assign(static_cast<std::size_t>(p), identity_node(p, depth - 1));
  node->trivial = false;
  return Automorphism(p, depth, std::move(node));
}

Automorphism Automorphism::directed(int p, int depth, std::span<const int> vector) {
  require_prime(p);
  require_depth(depth);
  if (vector.size() != static_cast<std::size_t>(p - 1))
    throw ArityMismatch("defining vector must have length p-1 = " + std::to_string(p - 1));
  // Built bottom-up: the spine child at depth d is the directed element of depth d-1.
  NodePtr current = identity_node(p, 0);
  for (int d = 1; d <= depth; ++d) {
    auto node = std::make_shared<Node>();
    node->perm = identity_label(p);
    node->children.resize(static_cast<std::size_t>(p));
    bool trivial = current->trivial;
    for (int j = 0; j + 1 < p; ++j) {
      auto a = rooted(p, d - 1, vector[j]);
      trivial = trivial && a.node_->trivial;
      node->children[j] = a.node_;
    }
    node->children[p - 1] = current;
    node->trivial = trivial;
    current = node;
  }
  return Automorphism(p, depth, std::move(current));
}

Automorphism Automorphism::from_sections(std::vector<std::uint8_t> root_perm,
                                         std::span<const Automorphism> sections) {
  if (sections.empty()) throw ArityMismatch("no sections given");
  const int p = sections.front().prime();
  const int depth = sections.front().depth();
  if (sections.size() != static_cast<std::size_t>(p) || root_perm.size() != sections.size())
    throw ArityMismatch("need exactly p sections and a label on p digits");
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  for (auto d : root_perm) {
    if (d >= p || seen[d]) throw std::invalid_argument("root label is not a permutation");
    seen[d] = true;
  }
  auto node = std::make_shared<Node>();
  node->perm = std::move(root_perm);
  node->trivial = is_identity_label(node->perm);
  for (const auto& s : sections) {
    if (s.prime() != p || s.depth() != depth)
      throw ArityMismatch("sections differ in arity or depth");
    node->children.push_back(s.node_);
    node->trivial = node->trivial && s.node_->trivial;
  }
  return Automorphism(p, depth + 1, std::move(node));
}

Automorphism Automorphism::from_permutation(int p, int depth, const Permutation& leaves) {
  require_prime(p);
  require_depth(depth);
  const std::size_t degree = ipow(static_cast<std::size_t>(p), depth);
  if (leaves.degree() != degree)
    throw DegreeMismatch("expected " + std::to_string(degree) + " leaves, got " +
                         std::to_string(leaves.degree()));
  // Recursive descent over blocks; each block must map onto one block.
  struct Builder {
    int p;
    const Permutation& leaves;
    NodePtr build(int level, std::size_t block, Point in_offset, Point out_offset) const {
      if (level == 0) return identity_node(p, 0);
      const std::size_t sub = block / p;
      auto node = std::make_shared<Node>();
      node->perm.resize(static_cast<std::size_t>(p));
      node->children.resize(static_cast<std::size_t>(p));
      for (int x = 0; x < p; ++x) {
        const Point first = leaves[in_offset + static_cast<Point>(x * sub)] - out_offset;
        if (first >= block) throw std::invalid_argument("permutation does not preserve the tree");
        const auto target = static_cast<std::uint8_t>(first / sub);
        node->perm[x] = target;
        const Point child_out = out_offset + static_cast<Point>(target * sub);
        for (std::size_t i = 0; i < sub; ++i) {
          const Point img = leaves[in_offset + static_cast<Point>(x * sub + i)];
          if (img < child_out || img >= child_out + sub)
            throw std::invalid_argument("permutation does not preserve the tree");
        }
        node->children[x] = build(level - 1, sub, in_offset + static_cast<Point>(x * sub), child_out);
      }
      std::vector<bool> seen(static_cast<std::size_t>(p), false);
      for (auto d : node->perm) {
        if (seen[d]) throw std::invalid_argument("permutation does not preserve the tree");
        seen[d] = true;
      }
      node->trivial = is_identity_label(node->perm);
      for (const auto& c : node->children) node->trivial = node->trivial && c->trivial;
      return node;
    }
  };
  Builder builder{p, leaves};
  return Automorphism(p, depth, builder.build(depth, degree, 0, 0));
}

// --- queries --------------------------------------------------------------

bool Automorphism::is_identity() const noexcept { return node_->trivial; }

std::span<const std::uint8_t> Automorphism::root_permutation() const noexcept {
  return node_->perm;
}

Automorphism Automorphism::child(int digit) const {
  if (depth_ == 0) throw std::out_of_range("depth-0 automorphism has no sections");
  if (digit < 0 || digit >= p_) throw std::out_of_range("digit out of range");
  return Automorphism(p_, depth_ - 1, node_->children[digit]);
}

Vertex Automorphism::apply(const Vertex& v) const {
  if (v.level() > depth_) throw std::out_of_range("vertex deeper than the portrait");
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(v.level()));
  const Node* node = node_.get();
  for (auto d : v.digits()) {
    out.push_back(node->perm[d]);
    node = node->children[d].get();
  }
  return Vertex(std::move(out));
}

bool operator==(const Automorphism& f, const Automorphism& g) {
  return f.p_ == g.p_ && f.depth_ == g.depth_ && Automorphism::equal_nodes(f.node_, g.node_, f.depth_);
}

// --- free operations ------------------------------------------------------

Automorphism compose(const Automorphism& f, const Automorphism& g) {
  if (f.p_ != g.p_ || f.depth_ != g.depth_)
    throw ArityMismatch("compose: arity or depth mismatch");
  return Automorphism(f.p_, f.depth_, Automorphism::compose_nodes(f.node_, g.node_, f.p_, f.depth_));
}

Automorphism inverse(const Automorphism& f) {
  return Automorphism(f.p_, f.depth_, Automorphism::inverse_node(f.node_, f.p_, f.depth_));
}

Automorphism power(const Automorphism& f, long long e) {
  Automorphism base = e < 0 ? inverse(f) : f;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  Automorphism result = Automorphism::identity(f.prime(), f.depth());
  while (n > 0) {
    if (n & 1u) result = compose(result, base);
    n >>= 1u;
    if (n > 0) base = compose(base, base);
  }
  return result;
}

Automorphism commutator(const Automorphism& f, const Automorphism& g) {
  return compose(compose(inverse(f), inverse(g)), compose(f, g));
}

Automorphism conjugate(const Automorphism& f, const Automorphism& g) {
  return compose(compose(inverse(g), f), g);
}

Automorphism truncate(const Automorphism& f, int depth) {
  if (depth < 0 || depth > f.depth_) throw std::out_of_range("truncation depth out of range");
  return Automorphism(f.p_, depth, Automorphism::truncate_node(f.node_, f.p_, depth));
}

Automorphism section(const Automorphism& f, const Vertex& v) {
  if (v.level() > f.depth()) throw std::out_of_range("vertex deeper than the portrait");
  Automorphism current = f;
  for (auto d : v.digits()) current = current.child(d);
  return current;
}

std::vector<Automorphism> psi(const Automorphism& f) {
  if (f.depth() == 0) throw std::out_of_range("psi needs depth >= 1");
  auto root = f.root_permutation();
  for (std::size_t x = 0; x < root.size(); ++x)
    if (root[x] != x) throw NotLevel1Stabilized("automorphism moves a first-level vertex");
  std::vector<Automorphism> out;
  out.reserve(root.size());
  for (int x = 0; x < f.prime(); ++x) out.push_back(f.child(x));
  return out;
}

std::vector<Automorphism> psi2(const Automorphism& f) {
  std::vector<Automorphism> out;
  for (const auto& s : psi(f)) {
    if (s.depth() == 0) throw std::out_of_range("psi2 needs depth >= 2");
    auto inner = psi(s);
    out.insert(out.end(), inner.begin(), inner.end());
  }
  return out;
}

Automorphism embed_at_vertex(const Automorphism& g, const Vertex& v, int depth) {
  if (g.depth() != depth - v.level())
    throw ArityMismatch("embedded automorphism has depth " + std::to_string(g.depth()) +
                        ", expected " + std::to_string(depth - v.level()));
  const int p = g.prime();
  Automorphism::NodePtr current = g.node_;
  for (int level = v.level() - 1; level >= 0; --level) {
    const int sub_depth = depth - level - 1;
    auto node = std::make_shared<Automorphism::Node>();
    node->perm = identity_label(p);
    node->children.assign(static_cast<std::size_t>(p), Automorphism::identity_node(p, sub_depth));
    node->children[v.digits()[level]] = current;
    node->trivial = current->trivial;
    current = node;
  }
  return Automorphism(p, depth, std::move(current));
}

Permutation to_permutation(const Automorphism& f, int level) {
  if (level < 0 || level > f.depth()) throw std::out_of_range("level deeper than the portrait");
  const std::size_t degree = ipow(static_cast<std::size_t>(f.prime()), level);
  std::vector<Point> images(degree);
  const std::size_t block = level == 0 ? 1 : degree / f.prime();
  if (level == 0) {
    images[0] = 0;
  } else {
    Automorphism::fill_permutation(*f.node_, f.prime(), level, block, 0, 0, images.data());
  }
  return Permutation::from_images_unchecked(std::move(images));
}

Permutation restrict_to_level(const Permutation& leaves, int p, int depth, int m) {
  if (m < 0 || m > depth) throw std::out_of_range("level out of range");
  const std::size_t block = ipow(static_cast<std::size_t>(p), depth - m);
  const std::size_t n = ipow(static_cast<std::size_t>(p), m);
  if (leaves.degree() != n * block) throw DegreeMismatch("restrict_to_level: wrong degree");
  std::vector<Point> images(n);
  for (std::size_t i = 0; i < n; ++i)
    images[i] = static_cast<Point>(leaves[static_cast<Point>(i * block)] / block);
  return Permutation(std::move(images));
}

}  // namespace ggs
