#pragma once

#include <random>
#include <vector>

#include <Eigen/QR>

#include "cstar_jensen/jensen.hpp"

namespace cstar_jensen::testing {

inline AlgebraElement diag_element(const AlgebraShape& shape, const std::vector<Scalar>& per_block) {
  std::vector<AlgebraElement::Block> blocks;
  for (std::size_t k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.dim(k);
    blocks.push_back(per_block[k] * AlgebraElement::Block::Identity(n, n));
  }
  return AlgebraElement(shape, std::move(blocks));
}

/// Block k given explicitly as a matrix.
inline AlgebraElement element(const AlgebraShape& shape, std::vector<AlgebraElement::Block> blocks) {
  return AlgebraElement(shape, std::move(blocks));
}

inline AlgebraElement random_element(const AlgebraShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_element<Scalar>(shape, rng);
}

inline AlgebraElement random_self_adjoint(const AlgebraShape& shape, std::uint64_t seed) {
  const auto x = random_element(shape, seed);
  return Scalar(0.5) * (x + adjoint(x));
}

/// U diag(l) U* per block with eigenvalues drawn from [lo, hi].
inline AlgebraElement random_spectral(const AlgebraShape& shape, std::uint64_t seed, double lo,
                                      double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eig(lo, hi);
  std::vector<AlgebraElement::Block> blocks;
  for (std::size_t k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.dim(k);
    const auto g = sample_element<Scalar>(AlgebraShape({n}), rng).block(0);
    const AlgebraElement::Block q = Eigen::HouseholderQR<AlgebraElement::Block>(g).householderQ();
    Eigen::VectorXcd d(n);
    for (int i = 0; i < n; ++i) d(i) = eig(rng);
    blocks.push_back(q * d.asDiagonal() * q.adjoint());
  }
  return AlgebraElement(shape, std::move(blocks));
}

/// Strictly ordered coefficient 0 < a < 1, generically non-central.
inline Coefficient random_coefficient(const AlgebraShape& shape, std::uint64_t seed) {
  return validate_coefficient(random_spectral(shape, seed, 0.1, 0.9), true);
}

inline CoeffMatrix random_coeffs(const AlgebraShape& shape, int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CoeffMatrix c(rows);
  for (auto& row : c)
    for (int j = 0; j < cols; ++j) row.push_back(sample_element<Scalar>(shape, rng));
  return c;
}

/// f = L + c with L a random right-coefficient map E -> G.
inline Mapping random_affine(const ModuleSpace& e, const ModuleSpace& g, std::uint64_t seed,
                             bool with_constant = true) {
  const auto L = linear_map(random_coeffs(e.algebra(), e.rank(), g.rank(), derive_seed(seed, 0)));
  const auto c = with_constant ? sample_vector<Scalar>(g, derive_seed(seed, 1))
                               : ModuleVector::zero(g);
  return compose_jensen(L, std::nullopt, c);
}

inline ModuleVector unit_vector(const ModuleSpace& space, int i) {
  return ModuleVector::basis(space, i);
}

/// Module vector over C^n with the given scalar coordinates.
inline ModuleVector scalars(const std::vector<Scalar>& xs, const AlgebraShape& shape = AlgebraShape{}) {
  std::vector<AlgebraElement> coords;
  for (auto x : xs) coords.push_back(AlgebraElement::scalar(shape, x));
  return ModuleVector(ModuleSpace(shape, static_cast<int>(xs.size())), std::move(coords));
}

inline Evaluable as_evaluable(const Mapping& f) {
  return [f](const ModuleVector& x) { return f(x); };
}

inline DisjointSupport even_odd_split(int rank) {
  DisjointSupport d;
  for (int i = 0; i < rank; ++i) (i % 2 == 0 ? d.left_coords : d.right_coords).push_back(i);
  return d;
}

}  // namespace cstar_jensen::testing
