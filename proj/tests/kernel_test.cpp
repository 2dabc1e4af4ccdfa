#include <gtest/gtest.h>

#include "cstar_jensen/kernel.hpp"
#include "support.hpp"

using namespace cstar_jensen;
using namespace cstar_jensen::testing;

TEST(SelfAdjointBasis, HasRealDimensionSumOfSquares) {
  const AlgebraShape shape({3, 1, 2});
  const auto basis = self_adjoint_basis(shape);
  EXPECT_EQ(basis.size(), 9u + 1u + 4u);
  for (const auto& b : basis) EXPECT_TRUE(is_self_adjoint(b));
}

TEST(SelfAdjointBasis, CoordinatesReconstructHermitianPart) {
  const AlgebraShape shape({3, 2});
  const auto basis = self_adjoint_basis(shape);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto h = random_self_adjoint(shape, s);
    const auto c = self_adjoint_coords(h);
    auto sum = AlgebraElement::zero(shape);
    for (std::size_t k = 0; k < basis.size(); ++k) sum += Scalar(c(k)) * basis[k];
    EXPECT_LE(residual(sum, h), 1e-14);
  }
}

TEST(RealCoordinates, RoundTrip) {
  const ModuleSpace g(AlgebraShape({2, 1}), 3);
  const auto v = sample_vector<Scalar>(g, 5);
  const auto r = to_real(v);
  EXPECT_EQ(r.size(), 2 * 3 * 5);
  EXPECT_EQ(from_real(g, r), v);
}

TEST(KernelSolver, ScalarCoefficientOnComplexLineForcesZero) {
  for (double p : {0.1, 1.0 / 3, 0.5, 0.75, 0.9}) {
    const auto a = validate_coefficient(AlgebraElement::scalar(AlgebraShape{}, p), true);
    for (int rank : {1, 2, 4}) {
      const auto sol = solve_abiadditive_kernel(a, ModuleSpace(AlgebraShape{}, rank));
      EXPECT_EQ(sol.dimension, 0) << "p=" << p << " rank=" << rank;
      EXPECT_TRUE(sol.basis.empty());
    }
  }
}

TEST(KernelSolver, DistinctBlockScalarsForceZero) {
  const AlgebraShape shape({1, 1});
  const auto a = validate_coefficient(diag_element(shape, {1.0 / 3, 0.5}), true);
  EXPECT_EQ(solve_abiadditive_kernel(a, ModuleSpace(shape, 2)).dimension, 0);
}

TEST(KernelSolver, NonStrictCoefficientWithMatchedModuli) {
  // a = (alpha, beta) on shape (1,1) with |alpha|^2 = beta and
  // |1 - alpha|^2 = 1 - beta. Psi(e_1) may then take any value in the second
  // block of every G coordinate: real dimension 2 per coordinate.
  const AlgebraShape shape({1, 1});
  const auto a = validate_coefficient(diag_element(shape, {Scalar(0.5, 0.5), 0.5}), false);
  for (int rank : {1, 2, 3}) {
    const ModuleSpace g(shape, rank);
    const auto sol = solve_abiadditive_kernel(a, g);
    EXPECT_EQ(sol.dimension, 2 * rank);
    for (std::size_t k = 0; k < sol.basis.size(); ++k) {
      EXPECT_LE(kernel_constraint_residual(sol.basis[k], a, ModuleSpace(shape, 2), 50, k), 1e-8);
      // Psi(e_2) = 0 and Psi(e_1) lives in the second block only.
      const auto v1 = sol.basis[k].apply(AlgebraElement::matrix_unit(shape, 0, 0, 0));
      const auto v2 = sol.basis[k].apply(AlgebraElement::matrix_unit(shape, 1, 0, 0));
      EXPECT_LE(module_norm(v2), 1e-12);
      for (int i = 0; i < rank; ++i) EXPECT_LE(std::abs(v1.coord(i).block(0)(0, 0)), 1e-12);
    }
  }
}

TEST(KernelSolver, RandomStrictCoefficientsReverify) {
  for (const auto& dims : std::vector<std::vector<int>>{{1}, {2}, {1, 1}, {2, 1}, {3}}) {
    const AlgebraShape shape(dims);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto a = random_coefficient(shape, s);
      const auto sol = solve_abiadditive_kernel(a, ModuleSpace(shape, 2));
      EXPECT_EQ(sol.dimension, static_cast<int>(sol.basis.size()));
      for (std::size_t k = 0; k < sol.basis.size(); ++k)
        EXPECT_LE(kernel_constraint_residual(sol.basis[k], a, ModuleSpace(shape, 2), 30, k), 1e-8);
    }
  }
}

TEST(KernelMap, FormIsSymmetricAndOrthogonalityPreserving) {
  const AlgebraShape shape({1, 1});
  const auto a = validate_coefficient(diag_element(shape, {Scalar(0.5, 0.5), 0.5}), false);
  const auto sol = solve_abiadditive_kernel(a, ModuleSpace(shape, 1));
  ASSERT_FALSE(sol.basis.empty());
  const ModuleSpace e(shape, 4);
  const OrthoSamplerMode mode = even_odd_split(4);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto [x, y] = sample_orthogonal_pair(e, mode, s);
    EXPECT_LE(module_norm(sol.basis[0].form(x, y)), 1e-14);
    const auto u = sample_vector<Scalar>(e, derive_seed(s, 7));
    EXPECT_EQ(sol.basis[0].form(x, u), sol.basis[0].form(u, x));
  }
}
