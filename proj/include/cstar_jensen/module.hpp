#pragma once

// The free inner product module E = A^m with left action
//   (b.x)_i = b x_i,   <x, y> = sum_i x_i y_i^*,
// so <b.x, y> = b <x, y> and <x, b.y> = <x, y> b^*.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cstar_jensen/algebra.hpp"

namespace cstar_jensen {

class ModuleSpace {
 public:
  ModuleSpace() = default;
  ModuleSpace(AlgebraShape algebra, int rank) : algebra_(std::move(algebra)), rank_(rank) {
    if (rank < 1) throw ShapeError("module rank must be >= 1");
  }

  const AlgebraShape& algebra() const { return algebra_; }
  int rank() const { return rank_; }

  std::string to_string() const {
    return "A" + algebra_.to_string() + "^" + std::to_string(rank_);
  }

  friend bool operator==(const ModuleSpace& a, const ModuleSpace& b) {
    return a.rank_ == b.rank_ && a.algebra_ == b.algebra_;
  }

 private:
  AlgebraShape algebra_;
  int rank_ = 1;
};

template <typename Scalar_>
class BasicModuleVector {
 public:
  using Scalar = Scalar_;
  using Element = BasicAlgebraElement<Scalar>;

  BasicModuleVector() : BasicModuleVector(zero(ModuleSpace{})) {}

  BasicModuleVector(ModuleSpace space, std::vector<Element> coords)
      : space_(std::move(space)), coords_(std::move(coords)) {
    if (static_cast<int>(coords_.size()) != space_.rank())
      throw ShapeError("expected " + std::to_string(space_.rank()) + " coordinates, got " +
                       std::to_string(coords_.size()));
    for (const auto& c : coords_)
      if (!(c.shape() == space_.algebra()))
        throw ShapeError("coordinate shape " + c.shape().to_string() +
                         " does not match module algebra " + space_.algebra().to_string());
  }

  static BasicModuleVector zero(const ModuleSpace& space) {
    return BasicModuleVector(
        space, std::vector<Element>(space.rank(), Element::zero(space.algebra())));
  }
  /// Unit of the algebra in coordinate i, zero elsewhere.
  static BasicModuleVector basis(const ModuleSpace& space, int i) {
    auto v = zero(space);
    v.coords_.at(i) = Element::identity(space.algebra());
    return v;
  }

  const ModuleSpace& space() const { return space_; }
  int rank() const { return space_.rank(); }
  const Element& coord(int i) const { return coords_[i]; }
  const std::vector<Element>& coords() const { return coords_; }

  BasicModuleVector& operator+=(const BasicModuleVector& o) {
    require_same_space(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  BasicModuleVector& operator-=(const BasicModuleVector& o) {
    require_same_space(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  BasicModuleVector& operator*=(Scalar s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }

  friend BasicModuleVector operator+(BasicModuleVector x, const BasicModuleVector& y) {
    return x += y;
  }
  friend BasicModuleVector operator-(BasicModuleVector x, const BasicModuleVector& y) {
    return x -= y;
  }
  friend BasicModuleVector operator-(BasicModuleVector x) {
    for (auto& c : x.coords_) c = -c;
    return x;
  }
  friend BasicModuleVector operator*(Scalar s, BasicModuleVector x) { return x *= s; }

  /// Left action b.x.
  friend BasicModuleVector operator*(const Element& b, const BasicModuleVector& x) {
    if (!(b.shape() == x.space_.algebra()))
      throw ShapeError("action by element of shape " + b.shape().to_string() + " on " +
                       x.space_.to_string());
    BasicModuleVector out = x;
    for (auto& c : out.coords_) c = b * c;
    return out;
  }

  friend bool operator==(const BasicModuleVector& x, const BasicModuleVector& y) {
    return x.space_ == y.space_ && x.coords_ == y.coords_;
  }

  void require_same_space(const BasicModuleVector& o) const {
    if (!(space_ == o.space_))
      throw SpaceMismatch("space mismatch: " + space_.to_string() + " vs " +
                          o.space_.to_string());
  }

  Element& mutable_coord(int i) { return coords_.at(i); }

 private:
  ModuleSpace space_;
  std::vector<Element> coords_;
};

template <typename Scalar>
BasicAlgebraElement<Scalar> inner_product(const BasicModuleVector<Scalar>& x,
                                          const BasicModuleVector<Scalar>& y) {
  x.require_same_space(y);
  auto acc = BasicAlgebraElement<Scalar>::zero(x.space().algebra());
  for (int i = 0; i < x.rank(); ++i) acc += x.coord(i) * adjoint(y.coord(i));
  return acc;
}

template <typename Scalar>
BasicModuleVector<Scalar> act(const BasicAlgebraElement<Scalar>& b,
                              const BasicModuleVector<Scalar>& x) {
  return b * x;
}

enum class VecOp { add, sub, neg };

template <typename Scalar>
BasicModuleVector<Scalar> vec_combine(VecOp kind, const BasicModuleVector<Scalar>& x,
                                      const BasicModuleVector<Scalar>& y) {
  switch (kind) {
    case VecOp::add:
      return x + y;
    case VecOp::sub:
      return x - y;
    case VecOp::neg:
      break;
  }
  throw std::invalid_argument("vec_combine: neg is unary");
}

template <typename Scalar>
BasicModuleVector<Scalar> vec_combine(VecOp kind, const BasicModuleVector<Scalar>& x) {
  if (kind != VecOp::neg) throw std::invalid_argument("vec_combine: add/sub are binary");
  return -x;
}

/// ||x|| = ||<x, x>||^{1/2}.
template <typename Scalar>
double module_norm(const BasicModuleVector<Scalar>& x) {
  return std::sqrt(static_cast<double>(cstar_norm(inner_product(x, x))));
}

template <typename Scalar>
double residual(const BasicModuleVector<Scalar>& lhs, const BasicModuleVector<Scalar>& rhs) {
  return module_norm(lhs - rhs) / (1 + module_norm(lhs) + module_norm(rhs));
}

template <typename Scalar>
bool is_orthogonal(const BasicModuleVector<Scalar>& x, const BasicModuleVector<Scalar>& y,
                   double tol = tolerance::kOrthogonal) {
  const double ip = cstar_norm(inner_product(x, y));
  return ip <= tol * (1 + module_norm(x) * module_norm(y));
}

// ---------------------------------------------------------------------------
// Seeded sampling

/// splitmix64 mix of (seed, stream); sub-seeds are independent of call order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Entries i.i.d. complex standard normal (real and imaginary parts N(0,1)).
template <typename Scalar>
BasicAlgebraElement<Scalar> sample_element(const AlgebraShape& shape, std::mt19937_64& rng) {
  using Element = BasicAlgebraElement<Scalar>;
  using Real = typename Element::Real;
  std::normal_distribution<Real> normal;
  std::vector<typename Element::Block> blocks;
  blocks.reserve(shape.num_blocks());
  for (std::size_t k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.dim(k);
    typename Element::Block b(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const Real re = normal(rng);
        const Real im = normal(rng);
        b(r, c) = Scalar(re, im);
      }
    blocks.push_back(std::move(b));
  }
  return Element(shape, std::move(blocks));
}

template <typename Scalar>
BasicModuleVector<Scalar> sample_vector(const ModuleSpace& space, std::mt19937_64& rng) {
  std::vector<BasicAlgebraElement<Scalar>> coords;
  coords.reserve(space.rank());
  for (int i = 0; i < space.rank(); ++i)
    coords.push_back(sample_element<Scalar>(space.algebra(), rng));
  return BasicModuleVector<Scalar>(space, std::move(coords));
}

template <typename Scalar>
BasicModuleVector<Scalar> sample_vector(const ModuleSpace& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_vector<Scalar>(space, rng);
}

// ---------------------------------------------------------------------------
// Exactly orthogonal pairs

struct DisjointSupport {
  std::vector<int> left_coords;
  std::vector<int> right_coords;
};

template <typename Scalar>
struct BasicPairImage {
  std::string pair_id;
  /// Bound by the mapping layer: seed -> (a^{-1} phi(z), (1-a)^{-1} psi(w)).
  std::function<std::pair<BasicModuleVector<Scalar>, BasicModuleVector<Scalar>>(std::uint64_t)>
      draw;
};

template <typename Scalar>
struct BasicExplicitPairs {
  std::vector<std::pair<BasicModuleVector<Scalar>, BasicModuleVector<Scalar>>> pairs;
};

template <typename Scalar>
using BasicOrthoSamplerMode =
    std::variant<DisjointSupport, BasicPairImage<Scalar>, BasicExplicitPairs<Scalar>>;

inline void validate_disjoint_support(const DisjointSupport& d, int rank) {
  std::vector<int> seen(rank, 0);
  for (const auto* side : {&d.left_coords, &d.right_coords})
    for (int i : *side) {
      if (i < 0 || i >= rank)
        throw InvalidMode("disjoint_support coordinate " + std::to_string(i) +
                          " out of range for rank " + std::to_string(rank));
      if (seen[i]++) throw InvalidMode("disjoint_support coordinate repeated: " + std::to_string(i));
    }
  for (int i = 0; i < rank; ++i)
    if (!seen[i])
      throw InvalidMode("disjoint_support split does not cover coordinate " + std::to_string(i));
}

/// Returns (x, y) with <x, y> = 0 by construction. `index` selects the pair in
/// explicit mode (cycled); the other modes draw from `seed`.
template <typename Scalar>
std::pair<BasicModuleVector<Scalar>, BasicModuleVector<Scalar>> sample_orthogonal_pair(
    const ModuleSpace& space, const BasicOrthoSamplerMode<Scalar>& mode, std::uint64_t seed,
    std::size_t index = 0) {
  using Vector = BasicModuleVector<Scalar>;
  if (const auto* d = std::get_if<DisjointSupport>(&mode)) {
    validate_disjoint_support(*d, space.rank());
    std::mt19937_64 rng(seed);
    Vector x = Vector::zero(space);
    Vector y = Vector::zero(space);
    for (int i : d->left_coords)
      x.mutable_coord(i) = sample_element<Scalar>(space.algebra(), rng);
    for (int i : d->right_coords)
      y.mutable_coord(i) = sample_element<Scalar>(space.algebra(), rng);
    return {std::move(x), std::move(y)};
  }
  if (const auto* p = std::get_if<BasicPairImage<Scalar>>(&mode)) {
    if (!p->draw) throw InvalidMode("pair_image mode '" + p->pair_id + "' is not bound to a pair");
    auto xy = p->draw(seed);
    if (!(xy.first.space() == space) || !(xy.second.space() == space))
      throw InvalidMode("pair_image '" + p->pair_id + "' draws outside " + space.to_string());
    return xy;
  }
  const auto& e = std::get<BasicExplicitPairs<Scalar>>(mode);
  if (e.pairs.empty()) throw InvalidMode("explicit mode has no pairs");
  const auto& xy = e.pairs[index % e.pairs.size()];
  if (!(xy.first.space() == space) || !(xy.second.space() == space))
    throw InvalidMode("explicit pair lives outside " + space.to_string());
  return xy;
}

}  // namespace cstar_jensen
