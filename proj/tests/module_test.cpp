#include <gtest/gtest.h>

#include "support.hpp"

using namespace cstar_jensen;
using namespace cstar_jensen::testing;

namespace {

const AlgebraShape kC{};
const AlgebraShape kMixed({2, 1});

}  // namespace

TEST(ModuleSpace, RankMustBePositive) {
  EXPECT_THROW(ModuleSpace(kC, 0), ShapeError);
  EXPECT_EQ(ModuleSpace(kMixed, 3).to_string(), "A(2,1)^3");
}

TEST(ModuleVector, ConstructorChecksCoordinates) {
  const ModuleSpace e(kMixed, 2);
  EXPECT_THROW(ModuleVector(e, {AlgebraElement::identity(kMixed)}), ShapeError);
  EXPECT_THROW(ModuleVector(e, {AlgebraElement::identity(kMixed), AlgebraElement::identity(kC)}),
               ShapeError);
}

TEST(InnerProduct, BasisExamples) {
  const ModuleSpace e(kMixed, 3);
  const auto e1 = unit_vector(e, 0);
  const auto e2 = unit_vector(e, 1);
  EXPECT_EQ(inner_product(e1, e1), AlgebraElement::identity(kMixed));
  EXPECT_EQ(inner_product(e1, e2), AlgebraElement::zero(kMixed));
}

TEST(InnerProduct, MatchesCoordinateLoopOracle) {
  const ModuleSpace e(kMixed, 2);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto x = sample_vector<Scalar>(e, 2 * s);
    const auto y = sample_vector<Scalar>(e, 2 * s + 1);
    const auto ip = inner_product(x, y);
    for (std::size_t k = 0; k < kMixed.num_blocks(); ++k) {
      const int n = kMixed.dim(k);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          Scalar sum = 0;
          for (int i = 0; i < e.rank(); ++i)
            for (int l = 0; l < n; ++l)
              sum += x.coord(i).block(k)(r, l) * std::conj(y.coord(i).block(k)(c, l));
          EXPECT_NEAR(std::abs(ip.block(k)(r, c) - sum), 0.0, 1e-13);
        }
    }
  }
}

TEST(InnerProduct, SpaceMismatchThrows) {
  EXPECT_THROW(inner_product(ModuleVector::zero(ModuleSpace(kC, 2)),
                             ModuleVector::zero(ModuleSpace(kC, 3))),
               SpaceMismatch);
  EXPECT_THROW(inner_product(ModuleVector::zero(ModuleSpace(kC, 2)),
                             ModuleVector::zero(ModuleSpace(kMixed, 2))),
               SpaceMismatch);
}

TEST(InnerProduct, ConjugateSymmetryPositivityAndSlotLinearity) {
  const ModuleSpace e(AlgebraShape({3, 1}), 3);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto x = sample_vector<Scalar>(e, derive_seed(s, 0));
    const auto y = sample_vector<Scalar>(e, derive_seed(s, 1));
    const auto b = random_element(e.algebra(), derive_seed(s, 2));
    EXPECT_LE(residual(inner_product(x, y), adjoint(inner_product(y, x))), 1e-12);
    EXPECT_GE(spectrum_bounds(inner_product(x, x)).min_eig, -1e-10);
    EXPECT_LE(residual(inner_product(b * x, y), b * inner_product(x, y)), 1e-10);
    EXPECT_LE(residual(inner_product(x, b * y), inner_product(x, y) * adjoint(b)), 1e-10);
  }
  const auto z = ModuleVector::zero(e);
  EXPECT_LE(cstar_norm(inner_product(z, z)), 1e-12);
}

TEST(Act, Examples) {
  const ModuleSpace e(kMixed, 2);
  const auto x = sample_vector<Scalar>(e, 5);
  EXPECT_EQ(act(AlgebraElement::identity(kMixed), x), x);
  const auto a = random_coefficient(kMixed, 7);
  EXPECT_LE(residual(act(a.value, act(a.inv, x)), x), 1e-9);
  const auto v = act(AlgebraElement::scalar(kC, 0.5), scalars({4.0, 6.0}));
  EXPECT_EQ(v, scalars({2.0, 3.0}));
  EXPECT_THROW(act(AlgebraElement::identity(kC), x), ShapeError);
}

TEST(VecCombine, Examples) {
  const ModuleSpace e(kMixed, 3);
  const auto x = sample_vector<Scalar>(e, 11);
  const auto zero = ModuleVector::zero(e);
  EXPECT_EQ(vec_combine(VecOp::add, x, vec_combine(VecOp::neg, x)), zero);
  EXPECT_EQ(vec_combine(VecOp::sub, x, zero), x);
  EXPECT_EQ(vec_combine(VecOp::add, scalars({1.0, 2.0}), scalars({3.0, 4.0})), scalars({4.0, 6.0}));
  EXPECT_THROW(vec_combine(VecOp::add, x, ModuleVector::zero(ModuleSpace(kMixed, 2))), SpaceMismatch);
}

TEST(IsOrthogonal, Examples) {
  const ModuleSpace e(kMixed, 2);
  EXPECT_TRUE(is_orthogonal(unit_vector(e, 0), unit_vector(e, 1)));
  EXPECT_FALSE(is_orthogonal(unit_vector(e, 0), unit_vector(e, 0)));
  EXPECT_THROW(is_orthogonal(unit_vector(e, 0), unit_vector(ModuleSpace(kMixed, 3), 0)),
               SpaceMismatch);
}

TEST(SampleVector, DeterministicPerSeed) {
  const ModuleSpace e(kMixed, 3);
  EXPECT_EQ(sample_vector<Scalar>(e, 42), sample_vector<Scalar>(e, 42));
  EXPECT_FALSE(sample_vector<Scalar>(e, 42) == sample_vector<Scalar>(e, 43));
}

TEST(SampleVector, MeanSquaredNormIsTwoOnComplexLine) {
  const ModuleSpace e(kC, 1);
  const int n = 10000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double norm = module_norm(sample_vector<Scalar>(e, derive_seed(99, i)));
    sum += norm * norm;
  }
  EXPECT_NEAR(sum / n, 2.0, 0.2);
}

TEST(SampleOrthogonalPair, DisjointSupportIsBitwiseOrthogonal) {
  const ModuleSpace e(kMixed, 5);
  const OrthoSamplerMode mode = DisjointSupport{{0, 3}, {1, 2, 4}};
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto [x, y] = sample_orthogonal_pair(e, mode, s);
    EXPECT_EQ(inner_product(x, y), AlgebraElement::zero(kMixed));
    for (int i : {1, 2, 4}) EXPECT_EQ(x.coord(i), AlgebraElement::zero(kMixed));
    for (int i : {0, 3}) EXPECT_EQ(y.coord(i), AlgebraElement::zero(kMixed));
  }
}

TEST(SampleOrthogonalPair, SplitOfRankTwo) {
  const ModuleSpace e(kC, 2);
  const auto [x, y] = sample_orthogonal_pair(e, OrthoSamplerMode(DisjointSupport{{0}, {1}}), 3);
  EXPECT_EQ(inner_product(x, y), AlgebraElement::zero(kC));
}

TEST(SampleOrthogonalPair, PairImageFromInterleavingIsOrthogonal) {
  const auto pair = interleave_pair(0.3, 8);
  const OrthoSamplerMode mode = pair_image_mode(pair);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto [x, y] = sample_orthogonal_pair(pair.target(), mode, s);
    EXPECT_EQ(inner_product(x, y), AlgebraElement::zero(AlgebraShape{}));
  }
}

TEST(SampleOrthogonalPair, ExplicitReturnsPairVerbatim) {
  const ModuleSpace e(kMixed, 2);
  ExplicitPairs ex;
  ex.pairs.emplace_back(unit_vector(e, 0), unit_vector(e, 1));
  const auto [x, y] = sample_orthogonal_pair(e, OrthoSamplerMode(ex), 0, 7);
  EXPECT_EQ(x, unit_vector(e, 0));
  EXPECT_EQ(y, unit_vector(e, 1));
}

TEST(SampleOrthogonalPair, InvalidModes) {
  const ModuleSpace e(kC, 3);
  EXPECT_THROW(sample_orthogonal_pair(e, OrthoSamplerMode(DisjointSupport{{0}, {1}}), 0), InvalidMode);
  EXPECT_THROW(sample_orthogonal_pair(e, OrthoSamplerMode(DisjointSupport{{0, 1}, {1, 2}}), 0),
               InvalidMode);
  EXPECT_THROW(sample_orthogonal_pair(e, OrthoSamplerMode(DisjointSupport{{0, 5}, {1, 2}}), 0),
               InvalidMode);
  EXPECT_THROW(sample_orthogonal_pair(e, OrthoSamplerMode(ExplicitPairs{}), 0), InvalidMode);
  EXPECT_THROW(sample_orthogonal_pair(e, OrthoSamplerMode(PairImage{"unbound", {}}), 0), InvalidMode);
}

TEST(DeriveSeed, StreamsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}
