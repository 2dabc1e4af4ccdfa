#include <gtest/gtest.h>

#include "support.hpp"

using namespace cstar_jensen;
using namespace cstar_jensen::testing;

namespace {

const AlgebraShape kC{};

CoeffMatrix identity_coeffs(const AlgebraShape& shape, int m, Scalar s = 1.0) {
  CoeffMatrix c(m, std::vector<AlgebraElement>(m, AlgebraElement::zero(shape)));
  for (int i = 0; i < m; ++i) c[i][i] = AlgebraElement::scalar(shape, s);
  return c;
}

CoeffMatrix swap_halves(const AlgebraShape& shape, int m) {
  CoeffMatrix c(2 * m, std::vector<AlgebraElement>(2 * m, AlgebraElement::zero(shape)));
  for (int k = 0; k < m; ++k) {
    c[k][m + k] = AlgebraElement::identity(shape);
    c[m + k][k] = AlgebraElement::identity(shape);
  }
  return c;
}

}  // namespace

TEST(LinearMap, IdentityCoefficientsGiveIdentity) {
  const ModuleSpace e(AlgebraShape({2, 1}), 3);
  const auto T = linear_map(identity_coeffs(e.algebra(), 3));
  const auto x = sample_vector<Scalar>(e, 1);
  EXPECT_EQ(T(x), x);
  EXPECT_EQ(identity_map(e)(x), x);
}

TEST(LinearMap, ScalarExample) {
  const auto T = linear_map({{AlgebraElement::scalar(kC, 3.0)}});
  const auto x = scalars({Scalar(2.0, -1.0)});
  EXPECT_EQ(T(x), scalars({Scalar(6.0, -3.0)}));
  const auto half = AlgebraElement::scalar(kC, 0.5);
  EXPECT_EQ(T(half * x), half * T(x));
}

TEST(LinearMap, ModuleLinearAndAdditive) {
  const AlgebraShape shape({2, 3});
  const ModuleSpace e(shape, 3);
  const ModuleSpace g(shape, 2);
  const auto T = linear_map(random_coeffs(shape, 3, 2, 17));
  EXPECT_EQ(T(ModuleVector::zero(e)), ModuleVector::zero(g));
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto x = sample_vector<Scalar>(e, derive_seed(s, 0));
    const auto y = sample_vector<Scalar>(e, derive_seed(s, 1));
    const auto b = random_element(shape, derive_seed(s, 2));
    EXPECT_LE(residual(T(b * x), b * T(x)), 1e-12);
    EXPECT_LE(residual(T(x + y), T(x) + T(y)), 1e-12);
  }
}

TEST(LinearMap, RejectsRaggedOrMixedCoefficients) {
  CoeffMatrix ragged = {{AlgebraElement::identity(kC), AlgebraElement::identity(kC)},
                        {AlgebraElement::identity(kC)}};
  EXPECT_THROW(linear_map(ragged), ShapeError);
  CoeffMatrix mixed = {{AlgebraElement::identity(kC), AlgebraElement::identity(AlgebraShape({2}))}};
  EXPECT_THROW(linear_map(mixed), ShapeError);
}

TEST(Mapping, WrongInputSpaceThrows) {
  const auto T = identity_map(ModuleSpace(kC, 2));
  EXPECT_THROW(T(ModuleVector::zero(ModuleSpace(kC, 3))), SpaceMismatch);
}

TEST(QuadForm, VanishesOnOrthogonalPairsAndIsSymmetric) {
  const AlgebraShape shape({2, 1});
  const ModuleSpace e(shape, 4);
  const auto B = quad_form(sample_vector<Scalar>(ModuleSpace(shape, 2), 3), 0.7);
  const OrthoSamplerMode mode = even_odd_split(4);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto [x, y] = sample_orthogonal_pair(e, mode, s);
    EXPECT_EQ(B(x, y), ModuleVector::zero(B.g.space()));
    const auto u = sample_vector<Scalar>(e, derive_seed(s, 1));
    const auto v = sample_vector<Scalar>(e, derive_seed(s, 2));
    EXPECT_EQ(B(u, v), B(v, u));
  }
}

TEST(QuadForm, BiadditiveInBothSlots) {
  const AlgebraShape shape({2});
  const ModuleSpace e(shape, 3);
  const auto B = quad_form(sample_vector<Scalar>(ModuleSpace(shape, 2), 4), 1.5);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto x = sample_vector<Scalar>(e, derive_seed(s, 0));
    const auto y = sample_vector<Scalar>(e, derive_seed(s, 1));
    const auto z = sample_vector<Scalar>(e, derive_seed(s, 2));
    EXPECT_LE(residual(B(x + y, z), B(x, z) + B(y, z)), 1e-10);
    EXPECT_LE(residual(B(z, x + y), B(z, x) + B(z, y)), 1e-10);
  }
}

TEST(QuadForm, DiagonalIsEvenAndNotABiadditiveForDistinctEigenvalues) {
  const AlgebraShape shape({2});
  const ModuleSpace e(shape, 2);
  const auto B = quad_form(sample_vector<Scalar>(ModuleSpace(shape, 1), 5), 1.0);
  const auto f = B.diagonal(e);
  AlgebraElement::Block d(2, 2);
  d << 1.0 / 3, 0, 0, 0.5;
  const AlgebraElement a(shape, {d});
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto x = sample_vector<Scalar>(e, s);
    EXPECT_EQ(f(x), f(-x));
    EXPECT_GT(residual(B(a * x, a * x), a * B(x, x)), 1e-3);
  }
}

TEST(ComposeJensen, Examples) {
  const ModuleSpace e(kC, 1);
  const auto c0 = scalars({Scalar(5.0)});
  const auto constant = compose_jensen(zero_map(e, e), std::nullopt, c0);
  EXPECT_EQ(constant(scalars({Scalar(7.0, 1.0)})), c0);

  const auto f = compose_jensen(linear_map({{AlgebraElement::scalar(kC, 3.0)}}), std::nullopt, c0);
  EXPECT_EQ(f(ModuleVector::zero(e)), c0);
  EXPECT_EQ(f(scalars({Scalar(2.0)})), scalars({Scalar(11.0)}));

  EXPECT_THROW(compose_jensen(identity_map(e), std::nullopt, scalars({1.0, 2.0})), SpaceMismatch);
}

TEST(Perturb, Examples) {
  const ModuleSpace e(kC, 1);
  const auto f = compose_jensen(linear_map({{AlgebraElement::scalar(kC, 3.0)}}), std::nullopt,
                                scalars({Scalar(5.0)}));
  const auto site = scalars({Scalar(1.0)});
  const auto same = perturb(f, site, ModuleVector::zero(e), 0.01);
  const auto bumped = perturb(f, site, scalars({Scalar(0.1)}), 0.01);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto x = sample_vector<Scalar>(e, s);
    EXPECT_EQ(same(x), f(x));
  }
  EXPECT_LE(residual(bumped(site), f(site) + scalars({Scalar(0.1)})), 1e-15);
  EXPECT_EQ(bumped(scalars({Scalar(1.5)})), f(scalars({Scalar(1.5)})));
  EXPECT_THROW(perturb(f, site, site, 0.0), DomainError);
}

TEST(InterleavePair, HalfExampleOnFirstBasisVector) {
  const auto pair = interleave_pair(0.5, 4);
  const auto e1 = unit_vector(pair.source(), 0);
  const auto ip = inner_product(pair.phi(e1), pair.phi(e1));
  EXPECT_LE(residual(ip, AlgebraElement::scalar(kC, 4.0)), 1e-15);
  const auto& a = pair.coefficient.value;
  EXPECT_LE(residual(a * ip * adjoint(a), AlgebraElement::identity(kC)), 1e-15);
}

TEST(InterleavePair, ThirdExampleBothSidesAreOne) {
  const auto pair = interleave_pair(1.0 / 3, 4);
  const auto e1 = unit_vector(pair.source(), 0);
  const auto& c = pair.coefficient;
  const auto lhs = c.value * inner_product(pair.phi(e1), pair.phi(e1)) * adjoint(c.value);
  const auto rhs =
      c.complement * inner_product(pair.psi(e1), pair.psi(e1)) * adjoint(c.complement);
  EXPECT_LE(residual(lhs, AlgebraElement::identity(kC)), 1e-15);
  EXPECT_LE(residual(rhs, AlgebraElement::identity(kC)), 1e-15);
}

TEST(InterleavePair, ValidatesWithinPicoTolerance) {
  for (double p : {0.1, 0.25, 0.5, 0.75, 0.9})
    for (int n : {2, 4, 8, 16}) {
      const auto pair = interleave_pair(p, n);
      EXPECT_TRUE(pair.validated);
      EXPECT_LE(pair.cross_residual, 1e-12) << p << " " << n;
      EXPECT_LE(pair.balance_residual, 1e-12) << p << " " << n;
      const auto x = sample_vector<Scalar>(pair.source(), 1);
      const auto y = sample_vector<Scalar>(pair.source(), 2);
      EXPECT_EQ(inner_product(pair.phi(x), pair.psi(y)), AlgebraElement::zero(kC));
    }
}

TEST(InterleavePair, DomainErrors) {
  EXPECT_THROW(interleave_pair(0.0, 4), DomainError);
  EXPECT_THROW(interleave_pair(1.0, 4), DomainError);
  EXPECT_THROW(interleave_pair(0.5, 3), DomainError);
}

TEST(InterleavePair, NonCentralCoefficientValidates) {
  for (const auto& dims : std::vector<std::vector<int>>{{2}, {2, 1}, {3}}) {
    const AlgebraShape shape(dims);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto a = random_coefficient(shape, s);
      const auto pair = interleave_pair(a, 2);
      EXPECT_TRUE(pair.validated);
      EXPECT_LE(pair.balance_residual, 1e-10);
    }
  }
}

TEST(ValidatePair, RightCoefficientPairFailsForNonCentralA) {
  // Module-linear pairs cannot absorb a non-central a; the two-sided builder can.
  const AlgebraShape shape({2});
  AlgebraElement::Block d(2, 2);
  d << 1.0 / 3, 0, 0, 0.5;
  const auto a = validate_coefficient(AlgebraElement(shape, {d}), true);
  const auto zero = AlgebraElement::zero(shape);
  CoeffMatrix cphi = {{a.inv, zero}};
  CoeffMatrix cpsi = {{zero, a.co_inv}};
  EXPECT_THROW(validate_pair(linear_map(cphi), linear_map(cpsi), a), PairConditionViolated);
}

TEST(ValidatePair, IdenticalMapsViolateCrossCondition) {
  const ModuleSpace e(kC, 2);
  const auto a = validate_coefficient(AlgebraElement::scalar(kC, 0.5), true);
  try {
    validate_pair(identity_map(e), identity_map(e), a);
    FAIL() << "expected PairConditionViolated";
  } catch (const PairConditionViolated& ex) {
    EXPECT_EQ(ex.condition(), "<phi(z), psi(w)> = 0");
    EXPECT_GT(ex.residual(), 0.1);
  }
}

TEST(ValidatePair, RejectsNonLinearNodes) {
  const ModuleSpace e(kC, 1);
  const auto a = validate_coefficient(AlgebraElement::scalar(kC, 0.5), true);
  EXPECT_THROW(validate_pair(constant_map(e, scalars({1.0})), identity_map(e), a), ValidationError);
}

TEST(MorphismShiftPair, ShiftIsAMorphismOrthogonalToInclusion) {
  const auto pair = morphism_shift_pair(1);
  const auto e1 = unit_vector(pair.source(), 0);
  EXPECT_EQ(pair.phi(e1), unit_vector(pair.target(), 1));
  EXPECT_EQ(inner_product(pair.phi(e1), pair.psi(e1)), AlgebraElement::zero(kC));

  const auto big = morphism_shift_pair(3, AlgebraShape({2, 1}));
  const auto basis = complex_basis(big.source());
  for (const auto& z : basis)
    for (const auto& w : basis)
      EXPECT_EQ(inner_product(big.phi(z), big.phi(w)), inner_product(z, w));
}

TEST(MorphismShiftPair, SatisfiesHalfRatioCondition) {
  const auto pair = morphism_shift_pair(2, AlgebraShape({2}));
  const auto basis = complex_basis(pair.source());
  for (const auto& z : basis)
    for (const auto& w : basis)
      EXPECT_EQ(Scalar(0.25) * inner_product(pair.phi(z), pair.phi(w)),
                Scalar(0.25) * inner_product(pair.psi(z), pair.psi(w)));
}

TEST(UnitaryEquivalence, Examples) {
  const AlgebraShape shape({2, 1});
  const ModuleSpace e(shape, 2);
  EXPECT_TRUE(check_unitary_equivalence(identity_coeffs(shape, 2), e, e));
  EXPECT_TRUE(check_unitary_equivalence(swap_halves(shape, 1), e, e));
  EXPECT_FALSE(check_unitary_equivalence(identity_coeffs(shape, 2, 2.0), e, e));
  EXPECT_THROW(check_unitary_equivalence(identity_coeffs(shape, 2), e, ModuleSpace(shape, 3)),
               ShapeError);
}

TEST(UnitaryEquivalence, RandomBlockUnitaryCoefficients) {
  // u = diag(q1, q2) with q unitary in each block, acting coordinatewise on A^1.
  const AlgebraShape shape({3});
  const ModuleSpace e(shape, 1);
  const auto h = random_self_adjoint(shape, 8);
  Eigen::SelfAdjointEigenSolver<AlgebraElement::Block> es(h.block(0));
  const AlgebraElement q(shape, {es.eigenvectors()});
  EXPECT_TRUE(check_unitary_equivalence({{q}}, e, e));
}

TEST(RestrictedMorphismPair, RestrictionOfSwapIsValidated) {
  const AlgebraShape shape({2});
  const ModuleSpace e(shape, 4);
  const auto u = swap_halves(shape, 2);
  ASSERT_TRUE(check_unitary_equivalence(u, e, e));
  const auto pair = restricted_morphism_pair(u, e, 2);
  EXPECT_TRUE(pair.validated);
  const auto z = sample_vector<Scalar>(pair.source(), 4);
  EXPECT_EQ(inner_product(pair.phi(z), pair.phi(z)), inner_product(z, z));
  EXPECT_THROW(restricted_morphism_pair(identity_coeffs(shape, 4), e, 2), PairConditionViolated);
  EXPECT_THROW(restricted_morphism_pair(u, e, 4), DomainError);
}

TEST(PairImageMode, RequiresValidatedPair) {
  auto pair = interleave_pair(0.5, 4);
  pair.validated = false;
  EXPECT_THROW(pair_image_mode(pair), PairNotValidated);
}

TEST(SampleK, LiesInSumOfRanges) {
  const auto pair = interleave_pair(0.25, 6);
  const auto x = sample_k(pair, 3);
  EXPECT_EQ(x.space(), pair.target());
  EXPECT_EQ(sample_k(pair, 3), x);
}
