#pragma once

// Finite-dimensional C*-algebras  M_{n_1}(C) + ... + M_{n_k}(C)  stored as
// block-diagonal tuples of dense matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cstar_jensen/errors.hpp"

namespace cstar_jensen {

namespace tolerance {
/// Smallest singular value at or below kSingular * ||block|| counts as singular.
inline constexpr double kSingular = 1e-10;
/// ||x - x*|| <= kSelfAdjoint * (1 + ||x||).
inline constexpr double kSelfAdjoint = 1e-10;
inline constexpr double kOrthogonal = 1e-9;
inline constexpr double kPairValidation = 1e-10;
inline constexpr double kCheck = 1e-9;
}  // namespace tolerance

class AlgebraShape {
 public:
  AlgebraShape() : dims_(std::make_shared<const std::vector<int>>(1, 1)) {}

  explicit AlgebraShape(std::vector<int> block_dims) {
    if (block_dims.empty()) throw ShapeError("algebra shape needs at least one block");
    for (int n : block_dims)
      if (n < 1) throw ShapeError("algebra block dimension must be >= 1");
    dims_ = std::make_shared<const std::vector<int>>(std::move(block_dims));
  }

  const std::vector<int>& block_dims() const { return *dims_; }
  std::size_t num_blocks() const { return dims_->size(); }
  int dim(std::size_t k) const { return (*dims_)[k]; }

  /// Complex dimension sum(n_i^2); also the real dimension of the self-adjoint part.
  int complex_dimension() const {
    int d = 0;
    for (int n : *dims_) d += n * n;
    return d;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t k = 0; k < dims_->size(); ++k) {
      if (k) s += ",";
      s += std::to_string((*dims_)[k]);
    }
    return s + ")";
  }

  friend bool operator==(const AlgebraShape& a, const AlgebraShape& b) {
    return a.dims_ == b.dims_ || *a.dims_ == *b.dims_;
  }

 private:
  std::shared_ptr<const std::vector<int>> dims_;
};

enum class Compose { add, sub, mul };

template <typename Scalar_>
class BasicAlgebraElement {
 public:
  using Scalar = Scalar_;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Block = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicAlgebraElement() : BasicAlgebraElement(zero(AlgebraShape{})) {}

  BasicAlgebraElement(AlgebraShape shape, std::vector<Block> blocks)
      : shape_(std::move(shape)), blocks_(std::move(blocks)) {
    if (blocks_.size() != shape_.num_blocks())
      throw ShapeError("block count " + std::to_string(blocks_.size()) +
                       " does not match shape " + shape_.to_string());
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const auto n = shape_.dim(k);
      if (blocks_[k].rows() != n || blocks_[k].cols() != n)
        throw ShapeError("block " + std::to_string(k) + " is not " + std::to_string(n) +
                         "x" + std::to_string(n));
      if (!blocks_[k].allFinite())
        throw ShapeError("block " + std::to_string(k) + " has non-finite entries");
    }
  }

  static BasicAlgebraElement zero(const AlgebraShape& shape) {
    return scalar(shape, Scalar(0));
  }
  static BasicAlgebraElement identity(const AlgebraShape& shape) {
    return scalar(shape, Scalar(1));
  }
  static BasicAlgebraElement scalar(const AlgebraShape& shape, Scalar s) {
    BasicAlgebraElement e(shape);
    for (std::size_t k = 0; k < shape.num_blocks(); ++k)
      e.blocks_[k] = s * Block::Identity(shape.dim(k), shape.dim(k));
    return e;
  }
  /// Matrix unit E_{row,col} in block k.
  static BasicAlgebraElement matrix_unit(const AlgebraShape& shape, std::size_t k, int row,
                                         int col) {
    auto e = zero(shape);
    e.blocks_.at(k)(row, col) = Scalar(1);
    return e;
  }

  const AlgebraShape& shape() const { return shape_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(std::size_t k) const { return blocks_[k]; }
  std::size_t num_blocks() const { return blocks_.size(); }

  BasicAlgebraElement& operator+=(const BasicAlgebraElement& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += o.blocks_[k];
    return *this;
  }
  BasicAlgebraElement& operator-=(const BasicAlgebraElement& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= o.blocks_[k];
    return *this;
  }
  BasicAlgebraElement& operator*=(Scalar s) {
    for (auto& b : blocks_) b *= s;
    return *this;
  }

  friend BasicAlgebraElement operator+(BasicAlgebraElement x, const BasicAlgebraElement& y) {
    return x += y;
  }
  friend BasicAlgebraElement operator-(BasicAlgebraElement x, const BasicAlgebraElement& y) {
    return x -= y;
  }
  friend BasicAlgebraElement operator-(BasicAlgebraElement x) {
    for (auto& b : x.blocks_) b = -b;
    return x;
  }
  friend BasicAlgebraElement operator*(const BasicAlgebraElement& x,
                                       const BasicAlgebraElement& y) {
    x.require_same_shape(y);
    BasicAlgebraElement out(x.shape_);
    for (std::size_t k = 0; k < x.blocks_.size(); ++k)
      out.blocks_[k].noalias() = x.blocks_[k] * y.blocks_[k];
    return out;
  }
  friend BasicAlgebraElement operator*(Scalar s, BasicAlgebraElement x) { return x *= s; }
  friend BasicAlgebraElement operator*(BasicAlgebraElement x, Scalar s) { return x *= s; }

  /// Exact comparison, entry by entry.
  friend bool operator==(const BasicAlgebraElement& x, const BasicAlgebraElement& y) {
    if (!(x.shape_ == y.shape_)) return false;
    for (std::size_t k = 0; k < x.blocks_.size(); ++k)
      if (x.blocks_[k] != y.blocks_[k]) return false;
    return true;
  }

  void require_same_shape(const BasicAlgebraElement& o) const {
    if (!(shape_ == o.shape_))
      throw ShapeError("shape mismatch: " + shape_.to_string() + " vs " +
                       o.shape_.to_string());
  }

 private:
  explicit BasicAlgebraElement(AlgebraShape shape)
      : shape_(std::move(shape)), blocks_(shape_.num_blocks()) {}

  template <typename S>
  friend BasicAlgebraElement<S> adjoint(const BasicAlgebraElement<S>& x);

  AlgebraShape shape_;
  std::vector<Block> blocks_;
};

template <typename Scalar>
BasicAlgebraElement<Scalar> compose(Compose kind, const BasicAlgebraElement<Scalar>& x,
                                    const BasicAlgebraElement<Scalar>& y) {
  switch (kind) {
    case Compose::add:
      return x + y;
    case Compose::sub:
      return x - y;
    case Compose::mul:
      return x * y;
  }
  throw std::invalid_argument("unknown compose kind");
}

template <typename Scalar>
BasicAlgebraElement<Scalar> adjoint(const BasicAlgebraElement<Scalar>& x) {
  BasicAlgebraElement<Scalar> out(x.shape());
  for (std::size_t k = 0; k < x.num_blocks(); ++k) out.blocks_[k] = x.block(k).adjoint();
  return out;
}

namespace detail {
template <typename Block>
auto singular_values(const Block& b) {
  using Real = typename Eigen::NumTraits<typename Block::Scalar>::Real;
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  if (b.rows() == 1) return Vec::Constant(1, std::abs(b(0, 0))).eval();
  return Vec(Eigen::JacobiSVD<Block>(b).singularValues());
}
}  // namespace detail

/// Largest singular value over all blocks.
template <typename Scalar>
auto cstar_norm(const BasicAlgebraElement<Scalar>& x) {
  typename BasicAlgebraElement<Scalar>::Real n = 0;
  for (const auto& b : x.blocks()) n = std::max(n, detail::singular_values(b)(0));
  return n;
}

/// ||lhs - rhs|| / (1 + ||lhs|| + ||rhs||).
template <typename Scalar>
auto residual(const BasicAlgebraElement<Scalar>& lhs, const BasicAlgebraElement<Scalar>& rhs) {
  return cstar_norm(lhs - rhs) / (1 + cstar_norm(lhs) + cstar_norm(rhs));
}

template <typename Scalar>
BasicAlgebraElement<Scalar> invert(const BasicAlgebraElement<Scalar>& x) {
  using Element = BasicAlgebraElement<Scalar>;
  std::vector<typename Element::Block> out;
  out.reserve(x.num_blocks());
  for (std::size_t k = 0; k < x.num_blocks(); ++k) {
    const auto& b = x.block(k);
    const auto sv = detail::singular_values(b);
    const double smax = static_cast<double>(sv(0));
    const double smin = static_cast<double>(sv(sv.size() - 1));
    if (!(smin > tolerance::kSingular * smax)) throw NearSingular(k, smin);
    out.push_back(b.partialPivLu().inverse());
  }
  return Element(x.shape(), std::move(out));
}

template <typename Scalar>
bool is_self_adjoint(const BasicAlgebraElement<Scalar>& x) {
  return cstar_norm(x - adjoint(x)) <= tolerance::kSelfAdjoint * (1 + cstar_norm(x));
}

struct SpectrumBounds {
  double min_eig;
  double max_eig;
};

template <typename Scalar>
SpectrumBounds spectrum_bounds(const BasicAlgebraElement<Scalar>& x) {
  using Block = typename BasicAlgebraElement<Scalar>::Block;
  if (!is_self_adjoint(x)) throw NotSelfAdjoint("spectrum_bounds needs a self-adjoint element");
  SpectrumBounds s{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
  for (const auto& b : x.blocks()) {
    const Block h = (b + b.adjoint()) / 2;
    Eigen::SelfAdjointEigenSolver<Block> es(h, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    s.min_eig = std::min(s.min_eig, static_cast<double>(ev(0)));
    s.max_eig = std::max(s.max_eig, static_cast<double>(ev(ev.size() - 1)));
  }
  return s;
}

/// The fixed coefficient a together with cached a^{-1}, 1-a and (1-a)^{-1}.
template <typename Scalar>
struct BasicCoefficient {
  BasicAlgebraElement<Scalar> value;
  BasicAlgebraElement<Scalar> inv;
  BasicAlgebraElement<Scalar> complement;  // 1 - a
  BasicAlgebraElement<Scalar> co_inv;      // (1 - a)^{-1}
  bool strict_order = false;

  const AlgebraShape& shape() const { return value.shape(); }
};

/// Certifies that a and 1-a are invertible; in strict mode also that a is
/// self-adjoint with spectrum inside (0,1).
template <typename Scalar>
BasicCoefficient<Scalar> validate_coefficient(const BasicAlgebraElement<Scalar>& x,
                                              bool require_strict_order) {
  using Element = BasicAlgebraElement<Scalar>;
  BasicCoefficient<Scalar> c;
  c.value = x;
  c.complement = Element::identity(x.shape()) - x;
  c.inv = invert(x);
  c.co_inv = invert(c.complement);
  if (require_strict_order) {
    if (!is_self_adjoint(x)) throw OrderViolation("strict order needs a self-adjoint coefficient");
    const auto s = spectrum_bounds(x);
    if (!(s.min_eig > 0.0 && s.max_eig < 1.0))
      throw OrderViolation("spectrum [" + std::to_string(s.min_eig) + ", " +
                           std::to_string(s.max_eig) + "] not inside (0,1)");
    c.strict_order = true;
  }
  return c;
}

}  // namespace cstar_jensen
