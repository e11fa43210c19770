#include "ggs/perm_group.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "ggs/tree_autom.hpp"

namespace ggs {

namespace {

int depth_of_degree(int p, std::size_t degree) {
  if (p < 2 || !is_prime(p)) throw std::invalid_argument("prime expected, got " + std::to_string(p));
  int depth = 0;
  std::size_t n = 1;
  while (n < degree) {
    n *= static_cast<std::size_t>(p);
    ++depth;
  }
  if (n != degree)
    throw DegreeMismatch("degree " + std::to_string(degree) + " is not a power of " + std::to_string(p));
  return depth;
}

}  // namespace

// Breadth-first vertex layout of the depth-N tree plus the chain itself.
class StabilizerChain {
 public:
  struct Pivot {
    std::size_t vertex;
    Permutation u;
    std::vector<Permutation> inverse_powers;  // u^-1, ..., u^-(p-1)
    std::vector<int> exponent_of_digit;       // digit d of v^(u^e) -> e
  };

  StabilizerChain(int p, int depth) : p_(p), depth_(depth) {
    std::size_t count = 1;
    std::size_t width = 1;
    level_offset_.push_back(0);
    for (int l = 1; l <= depth; ++l) {
      width *= static_cast<std::size_t>(p);
      level_offset_.push_back(count);
      count += width;
    }
    level_offset_.push_back(count);
    stride_.resize(static_cast<std::size_t>(depth) + 1);
    for (int l = 0; l <= depth; ++l) stride_[l] = ipow(static_cast<std::size_t>(p), depth - l);
    pivots_.resize(count);
  }

  int prime() const { return p_; }
  int depth() const { return depth_; }
  std::size_t vertex_count() const { return pivots_.size(); }
  int level_of(std::size_t v) const {
    int l = 0;
    while (level_offset_[l + 1] <= v) ++l;
    return l;
  }
  std::size_t index_of(std::size_t v) const { return v - level_offset_[level_of(v)]; }

  const std::vector<std::size_t>& base() const { return base_; }
  const Pivot& pivot(std::size_t v) const { return *pivots_[v]; }

  // Sifts x in place. Returns the leading vertex of the residue, or 0 when the
  // residue is the identity.
  std::size_t sift(std::vector<Point>& x, std::vector<Point>& scratch) const {
    for (int l = 1; l <= depth_; ++l) {
      const std::size_t stride = stride_[l];
      const std::size_t width = level_offset_[l + 1] - level_offset_[l];
      for (std::size_t i = 0; i < width; ++i) {
        const std::size_t img = x[i * stride] / stride;
        if (img == i) continue;
        const std::size_t v = level_offset_[l] + i;
        const auto& piv = pivots_[v];
        if (!piv) return v;
        // Outside the tree's automorphism group the image may leave the
        // sibling block; such an element is a residue, never a member.
        if (img / p_ != i / p_) return v;
        const int e = piv->exponent_of_digit[img % static_cast<std::size_t>(p_)];
        const Point* inv = piv->inverse_powers[e - 1].images().data();
        scratch.resize(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) scratch[k] = inv[x[k]];
        x.swap(scratch);
      }
    }
    return 0;
  }

  bool contains(const Permutation& x) const {
    std::vector<Point> cur(x.images().begin(), x.images().end());
    std::vector<Point> scratch;
    return sift(cur, scratch) == 0;
  }

  // Adds g (an element of the group being built) and closes the chain.
  // Returns the vertices of newly created pivots.
  //
  // Closure conditions for a pivot u at vertex v: u^p and the conjugates by u
  // of every pivot further down the base must sift through the deeper levels.
  // They are queued as vertex pairs and only materialised when processed.
  std::vector<std::size_t> add(const Permutation& g) {
    struct Task {
      std::size_t v;  // pivot whose p-th power (w == v) or conjugator (w != v)
      std::size_t w;
    };
    std::vector<std::size_t> created;
    std::deque<Task> tasks;
    std::vector<Point> cur, scratch;
    cur.assign(g.images().begin(), g.images().end());
    bool have_element = true;
    while (have_element || !tasks.empty()) {
      if (!have_element) {
        const Task t = tasks.front();
        tasks.pop_front();
        const Pivot& pv = *pivots_[t.v];
        const Permutation x = t.v == t.w ? pv.u.pow(p_) : pv.inverse_powers[0] * pivots_[t.w]->u * pv.u;
        cur.assign(x.images().begin(), x.images().end());
      }
      have_element = false;
      const std::size_t v = sift(cur, scratch);
      if (v == 0) continue;
      insert(v, Permutation::from_images_unchecked(cur));
      created.push_back(v);
      tasks.push_back({v, v});
      for (std::size_t w : base_) {
        if (w > v) tasks.push_back({v, w});
        else if (w < v) tasks.push_back({w, v});
      }
    }
    return created;
  }

  void adopt(std::shared_ptr<const Pivot> piv) {
    const std::size_t v = piv->vertex;
    pivots_[v] = std::move(piv);
    base_.insert(std::upper_bound(base_.begin(), base_.end(), v), v);
  }

  std::shared_ptr<const Pivot> shared_pivot(std::size_t v) const { return pivots_[v]; }

 private:
  const Pivot& insert(std::size_t v, const Permutation& u) {
    const int l = level_of(v);
    const std::size_t stride = stride_[l];
    const std::size_t i = v - level_offset_[l];
    auto piv = std::make_shared<Pivot>();
    piv->vertex = v;
    piv->u = u;
    piv->exponent_of_digit.assign(static_cast<std::size_t>(p_), -1);
    std::size_t w = i;
    for (int e = 0; e < p_; ++e) {
      const std::size_t d = w % static_cast<std::size_t>(p_);
      if (w / p_ != i / p_ || piv->exponent_of_digit[d] != -1)
        throw NotPGroup("fundamental orbit of vertex " + std::to_string(v) + " has length " +
                        std::to_string(e) + ", not a power of " + std::to_string(p_));
      piv->exponent_of_digit[d] = e;
      w = u[static_cast<Point>(w * stride)] / stride;
    }
    if (w != i) throw NotPGroup("transversal generator does not cycle the sibling orbit");
    Permutation inv = u.inverse();
    Permutation acc = inv;
    for (int e = 1; e < p_; ++e) {
      piv->inverse_powers.push_back(acc);
      acc = acc * inv;
    }
    adopt(piv);
    return *pivots_[v];
  }

  int p_;
  int depth_;
  std::vector<std::size_t> level_offset_;  // level l occupies [offset[l], offset[l+1])
  std::vector<std::size_t> stride_;        // leaf block size below a level-l vertex
  std::vector<std::shared_ptr<const Pivot>> pivots_;
  std::vector<std::size_t> base_;
};

class GroupBuilder {
 public:
  GroupBuilder(int p, std::size_t degree)
      : p_(p), depth_(depth_of_degree(p, degree)), degree_(degree), chain_(std::make_shared<StabilizerChain>(p, depth_)) {}

  std::vector<std::size_t> add(const Permutation& g) { return chain_->add(g); }
  const StabilizerChain& chain() const { return *chain_; }

  GroupHandle finish(std::vector<Permutation> gens) {
    return GroupHandle(p_, depth_, degree_, std::move(chain_), std::move(gens));
  }

  static GroupHandle tail(const GroupHandle& g, int min_vertex_level) {
    auto chain = std::make_shared<StabilizerChain>(g.p_, g.depth_);
    for (std::size_t v : g.chain_->base())
      if (g.chain_->level_of(v) >= min_vertex_level) chain->adopt(g.chain_->shared_pivot(v));
    std::vector<Permutation> gens;
    for (std::size_t v : chain->base()) gens.push_back(chain->pivot(v).u);
    return GroupHandle(g.p_, g.depth_, g.degree_, std::move(chain), std::move(gens));
  }

 private:
  int p_;
  int depth_;
  std::size_t degree_;
  std::shared_ptr<StabilizerChain> chain_;
};

// --- GroupHandle ----------------------------------------------------------

GroupHandle::GroupHandle(int p, int depth, std::size_t degree,
                         std::shared_ptr<const StabilizerChain> chain, std::vector<Permutation> gens)
    : p_(p), depth_(depth), degree_(degree), chain_(std::move(chain)), generators_(std::move(gens)) {}

void GroupHandle::check_degree(const Permutation& x) const {
  if (x.degree() != degree_)
    throw DegreeMismatch("permutation of degree " + std::to_string(x.degree()) +
                         " used with a group of degree " + std::to_string(degree_));
}

GroupHandle GroupHandle::generate(int p, std::size_t degree, std::vector<Permutation> gens) {
  GroupBuilder builder(p, degree);
  const int depth = builder.chain().depth();
  std::vector<Permutation> kept;
  for (auto& g : gens) {
    if (g.degree() != degree)
      throw DegreeMismatch("generator of degree " + std::to_string(g.degree()) +
                           ", expected " + std::to_string(degree));
    for (int m = 1; m < depth; ++m) {
      const std::size_t block = ipow(static_cast<std::size_t>(p), depth - m);
      for (std::size_t x = 0; x < degree; ++x)
        if (g[static_cast<Point>(x)] / block != g[static_cast<Point>(x - x % block)] / block)
          throw NotTreeAutomorphism("generator does not preserve the level-" + std::to_string(m) +
                                    " blocks");
    }
    if (g.is_identity()) continue;
    builder.add(g);
    kept.push_back(std::move(g));
  }
  return builder.finish(std::move(kept));
}

GroupHandle GroupHandle::trivial(int p, std::size_t degree) { return generate(p, degree, {}); }

int GroupHandle::order_exponent() const noexcept { return static_cast<int>(chain_->base().size()); }

std::vector<Permutation> GroupHandle::strong_generators() const {
  std::vector<Permutation> out;
  out.reserve(chain_->base().size());
  for (std::size_t v : chain_->base()) out.push_back(chain_->pivot(v).u);
  return out;
}

std::vector<Permutation> GroupHandle::small_generating_set() const {
  if (generators_.size() <= chain_->base().size()) return generators_;
  return strong_generators();
}

std::vector<ChainLevel> GroupHandle::chain_levels() const {
  std::vector<ChainLevel> out;
  for (std::size_t v : chain_->base()) {
    const auto& piv = chain_->pivot(v);
    ChainLevel level{v, chain_->level_of(v), chain_->index_of(v), {}, piv.u};
    const std::size_t parent = level.vertex_index / p_;
    std::vector<std::size_t> orbit(static_cast<std::size_t>(p_));
    for (int d = 0; d < p_; ++d)
      orbit[piv.exponent_of_digit[d]] = parent * p_ + static_cast<std::size_t>(d);
    level.orbit = std::move(orbit);
    out.push_back(std::move(level));
  }
  return out;
}

std::vector<std::size_t> GroupHandle::base() const { return chain_->base(); }

bool GroupHandle::contains(const Permutation& x) const {
  check_degree(x);
  return chain_->contains(x);
}

Permutation GroupHandle::residue(const Permutation& x) const {
  check_degree(x);
  std::vector<Point> cur(x.images().begin(), x.images().end());
  std::vector<Point> scratch;
  chain_->sift(cur, scratch);
  return Permutation::from_images_unchecked(std::move(cur));
}

// --- subgroup algebra -----------------------------------------------------

bool is_subgroup(const GroupHandle& h, const GroupHandle& g) {
  if (h.degree() != g.degree()) throw DegreeMismatch("is_subgroup: degree mismatch");
  if (h.order_exponent() > g.order_exponent()) return false;
  for (const auto& x : h.small_generating_set())
    if (!g.contains(x)) return false;
  return true;
}

bool equals(const GroupHandle& a, const GroupHandle& b) {
  if (a.degree() != b.degree()) throw DegreeMismatch("equals: degree mismatch");
  return a.order_exponent() == b.order_exponent() && is_subgroup(a, b) && is_subgroup(b, a);
}

std::optional<Permutation> find_non_member(const GroupHandle& h, const GroupHandle& g) {
  if (h.degree() != g.degree()) throw DegreeMismatch("find_non_member: degree mismatch");
  for (const auto& x : h.strong_generators())
    if (!g.contains(x)) return x;
  return std::nullopt;
}

GroupHandle normal_closure(const GroupHandle& ambient, std::span<const Permutation> normal_gens) {
  for (const auto& s : normal_gens)
    if (!ambient.contains(s)) throw ElementNotInAmbient("normal_closure: generator outside the ambient group");
  GroupBuilder builder(ambient.prime(), ambient.degree());
  const auto conjugators = ambient.small_generating_set();
  std::vector<Permutation> conjugator_inverses;
  for (const auto& g : conjugators) conjugator_inverses.push_back(g.inverse());

  std::deque<Permutation> pending(normal_gens.begin(), normal_gens.end());
  while (!pending.empty()) {
    Permutation x = std::move(pending.front());
    pending.pop_front();
    for (std::size_t v : builder.add(x)) {
      const Permutation& u = builder.chain().pivot(v).u;
      for (std::size_t k = 0; k < conjugators.size(); ++k)
        pending.push_back(conjugator_inverses[k] * u * conjugators[k]);
    }
  }
  auto strong = std::vector<Permutation>{};
  for (std::size_t v : builder.chain().base()) strong.push_back(builder.chain().pivot(v).u);
  return builder.finish(std::move(strong));
}

namespace {

std::vector<Permutation> pairwise_commutators(const std::vector<Permutation>& xs,
                                              const std::vector<Permutation>& ys, bool skip_mirror) {
  std::vector<Permutation> out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = skip_mirror ? i + 1 : 0; j < ys.size(); ++j) {
      auto c = commutator(xs[i], ys[j]);
      if (!c.is_identity()) out.push_back(std::move(c));
    }
  return out;
}

}  // namespace

GroupHandle derived(const GroupHandle& g) {
  const auto gens = g.small_generating_set();
  return normal_closure(g, pairwise_commutators(gens, gens, true));
}

GroupHandle commutator_subgroup(const GroupHandle& a, const GroupHandle& b, const GroupHandle& ambient) {
  if (!is_subgroup(a, ambient) || !is_subgroup(b, ambient))
    throw ContainmentViolation("commutator_subgroup: factors must lie in the ambient group");
  return normal_closure(ambient, pairwise_commutators(a.small_generating_set(), b.small_generating_set(), false));
}

GroupHandle frattini(const GroupHandle& g) {
  const auto gens = g.small_generating_set();
  auto normal_gens = pairwise_commutators(gens, gens, true);
  for (const auto& x : gens) {
    auto y = x.pow(g.prime());
    if (!y.is_identity()) normal_gens.push_back(std::move(y));
  }
  return normal_closure(g, normal_gens);
}

int rank(const GroupHandle& g) { return g.order_exponent() - frattini(g).order_exponent(); }

GroupHandle level_stabilizer(const GroupHandle& g, int m) {
  if (m < 0 || m > g.depth()) throw std::out_of_range("level_stabilizer: level out of range");
  // A base vertex at level l is moved by its pivot, which therefore acts
  // nontrivially on level l; the kernel on level m is spanned by pivots below m.
  return GroupBuilder::tail(g, m + 1);
}

GroupHandle level_image(const GroupHandle& g, int m) {
  if (m < 0 || m > g.depth()) throw std::out_of_range("level_image: level out of range");
  std::vector<Permutation> images;
  for (const auto& x : g.small_generating_set())
    images.push_back(restrict_to_level(x, g.prime(), g.depth(), m));
  return GroupHandle::generate(g.prime(), ipow(static_cast<std::size_t>(g.prime()), m), std::move(images));
}

}  // namespace ggs
