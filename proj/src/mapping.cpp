#include "cstar_jensen/mapping.hpp"

#include <algorithm>
#include <string>

namespace cstar_jensen {

namespace {

struct SpacePair {
  ModuleSpace domain;
  ModuleSpace codomain;
};

SpacePair linear_spaces(const CoeffMatrix& coeffs) {
  if (coeffs.empty() || coeffs.front().empty())
    throw ShapeError("linear map needs a non-empty coefficient matrix");
  const auto& shape = coeffs.front().front().shape();
  const int m = static_cast<int>(coeffs.size());
  const int mp = static_cast<int>(coeffs.front().size());
  for (const auto& row : coeffs) {
    if (static_cast<int>(row.size()) != mp) throw ShapeError("ragged coefficient matrix");
    for (const auto& c : row)
      if (!(c.shape() == shape)) throw ShapeError("coefficients of mixed algebra shapes");
  }
  return {ModuleSpace(shape, m), ModuleSpace(shape, mp)};
}

ModuleVector eval_linear(const LinearNode& n, const ModuleSpace& cod, const ModuleVector& x) {
  auto out = ModuleVector::zero(cod);
  for (int j = 0; j < cod.rank(); ++j) {
    AlgebraElement acc = AlgebraElement::zero(cod.algebra());
    for (int i = 0; i < x.rank(); ++i) {
      if (n.left.empty())
        acc += x.coord(i) * n.coeffs[i][j];
      else
        acc += n.left[i][j] * x.coord(i) * n.coeffs[i][j];
    }
    out.mutable_coord(j) = std::move(acc);
  }
  return out;
}

}  // namespace

Mapping::Mapping(ModuleSpace domain, ModuleSpace codomain, MappingNode node)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      node_(std::make_shared<const MappingNode>(std::move(node))) {}

ModuleVector Mapping::operator()(const ModuleVector& x) const {
  if (!(x.space() == domain_))
    throw SpaceMismatch("mapping on " + domain_.to_string() + " applied to vector in " +
                        x.space().to_string());
  return std::visit(
      [&](const auto& n) -> ModuleVector {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinearNode>) {
          return eval_linear(n, codomain_, x);
        } else if constexpr (std::is_same_v<T, QuadKernelNode>) {
          return (2.0 * n.scale) * (inner_product(x, x) * n.g);
        } else if constexpr (std::is_same_v<T, ConstantNode>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, SumNode>) {
          auto acc = ModuleVector::zero(codomain_);
          for (const auto& child : n.children) acc += child(x);
          return acc;
        } else {
          if (module_norm(x - n.site) < n.radius) return n.delta;
          return ModuleVector::zero(codomain_);
        }
      },
      *node_);
}

Mapping linear_map(const CoeffMatrix& coeffs) {
  auto [dom, cod] = linear_spaces(coeffs);
  return Mapping(dom, cod, LinearNode{coeffs, {}});
}

Mapping linear_map(const CoeffMatrix& coeffs, const CoeffMatrix& left) {
  auto [dom, cod] = linear_spaces(coeffs);
  if (left.empty()) return Mapping(dom, cod, LinearNode{coeffs, {}});
  auto [ldom, lcod] = linear_spaces(left);
  if (!(ldom == dom) || !(lcod == cod))
    throw ShapeError("left and right coefficient matrices differ in shape");
  return Mapping(dom, cod, LinearNode{coeffs, left});
}

Mapping identity_map(const ModuleSpace& space) {
  const auto& shape = space.algebra();
  CoeffMatrix c(space.rank(), std::vector<AlgebraElement>(space.rank(), AlgebraElement::zero(shape)));
  for (int i = 0; i < space.rank(); ++i) c[i][i] = AlgebraElement::identity(shape);
  return linear_map(c);
}

Mapping zero_map(const ModuleSpace& domain, const ModuleSpace& codomain) {
  if (!(domain.algebra() == codomain.algebra()))
    throw ShapeError("domain and codomain over different algebras");
  CoeffMatrix c(domain.rank(), std::vector<AlgebraElement>(
                                   codomain.rank(), AlgebraElement::zero(domain.algebra())));
  return linear_map(c);
}

Mapping constant_map(const ModuleSpace& domain, const ModuleVector& value) {
  if (!(domain.algebra() == value.space().algebra()))
    throw ShapeError("constant value over a different algebra");
  return Mapping(domain, value.space(), ConstantNode{value});
}

Mapping sum_map(std::vector<Mapping> children) {
  if (children.empty()) throw ShapeError("sum of no mappings");
  const auto dom = children.front().domain();
  const auto cod = children.front().codomain();
  for (const auto& c : children)
    if (!(c.domain() == dom) || !(c.codomain() == cod))
      throw SpaceMismatch("sum children disagree on domain/codomain");
  return Mapping(dom, cod, SumNode{std::move(children)});
}

ModuleVector QuadForm::operator()(const ModuleVector& x, const ModuleVector& y) const {
  return scale * ((inner_product(x, y) + inner_product(y, x)) * g);
}

Mapping QuadForm::diagonal(const ModuleSpace& domain) const {
  if (!(domain.algebra() == g.space().algebra()))
    throw ShapeError("quadratic kernel over a different algebra");
  return Mapping(domain, g.space(), QuadKernelNode{g, scale});
}

QuadForm quad_form(const ModuleVector& g, double scale) { return QuadForm{g, scale}; }

Mapping compose_jensen(const Mapping& A, const std::optional<Mapping>& b_diag,
                       const ModuleVector& c) {
  if (!(c.space() == A.codomain()))
    throw SpaceMismatch("translation lives in " + c.space().to_string() + ", expected " +
                        A.codomain().to_string());
  std::vector<Mapping> parts{A};
  if (b_diag) {
    if (!(b_diag->domain() == A.domain()) || !(b_diag->codomain() == A.codomain()))
      throw SpaceMismatch("quadratic part disagrees with additive part on spaces");
    parts.push_back(*b_diag);
  }
  parts.push_back(constant_map(A.domain(), c));
  return sum_map(std::move(parts));
}

Mapping perturb(const Mapping& f, const ModuleVector& site, const ModuleVector& delta,
                double radius) {
  if (!(radius > 0)) throw DomainError("perturbation radius must be positive");
  if (!(site.space() == f.domain())) throw SpaceMismatch("perturbation site outside domain");
  if (!(delta.space() == f.codomain())) throw SpaceMismatch("perturbation delta outside codomain");
  Mapping bump(f.domain(), f.codomain(), PerturbationNode{site, delta, radius});
  return sum_map({f, bump});
}

// ---------------------------------------------------------------------------

std::vector<ModuleVector> complex_basis(const ModuleSpace& space) {
  std::vector<ModuleVector> basis;
  const auto& shape = space.algebra();
  for (int i = 0; i < space.rank(); ++i)
    for (std::size_t k = 0; k < shape.num_blocks(); ++k)
      for (int r = 0; r < shape.dim(k); ++r)
        for (int c = 0; c < shape.dim(k); ++c) {
          auto v = ModuleVector::zero(space);
          v.mutable_coord(i) = AlgebraElement::matrix_unit(shape, k, r, c);
          basis.push_back(std::move(v));
        }
  return basis;
}

AdditivePair validate_pair(const Mapping& phi, const Mapping& psi, const Coefficient& a,
                           double tol) {
  if (!phi.is_linear() || !psi.is_linear())
    throw ValidationError("pair maps must be linear nodes");
  if (!(phi.domain() == psi.domain()) || !(phi.codomain() == psi.codomain()))
    throw SpaceMismatch("phi and psi must share domain and codomain");
  if (!(a.shape() == phi.domain().algebra()))
    throw ShapeError("coefficient and pair live over different algebras");

  AdditivePair pair{phi, psi, a, false, 0.0, 0.0};
  const auto basis = complex_basis(phi.domain());
  std::vector<ModuleVector> phis, psis;
  for (const auto& z : basis) {
    phis.push_back(phi(z));
    psis.push_back(psi(z));
  }
  const auto a_star = adjoint(a.value);
  const auto c_star = adjoint(a.complement);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto cross = inner_product(phis[i], psis[j]);
      const double rc = residual(cross, AlgebraElement::zero(cross.shape()));
      pair.cross_residual = std::max(pair.cross_residual, rc);
      if (rc > tol) throw PairConditionViolated("<phi(z), psi(w)> = 0", i, j, rc);

      const auto lhs = a.value * inner_product(phis[i], phis[j]) * a_star;
      const auto rhs = a.complement * inner_product(psis[i], psis[j]) * c_star;
      const double rb = residual(lhs, rhs);
      pair.balance_residual = std::max(pair.balance_residual, rb);
      if (rb > tol)
        throw PairConditionViolated("a<phi(z),phi(w)>a* = (1-a)<psi(z),psi(w)>(1-a)*", i, j, rb);
    }
  pair.validated = true;
  return pair;
}

AdditivePair interleave_pair(double p, int n, const AlgebraShape& shape) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("interleave_pair needs p in (0,1)");
  if (n < 2 || n % 2 != 0) throw DomainError("interleave_pair needs an even truncation N >= 2");
  const int m = n / 2;
  const auto zero = AlgebraElement::zero(shape);
  CoeffMatrix cphi(m, std::vector<AlgebraElement>(n, zero));
  CoeffMatrix cpsi = cphi;
  for (int k = 0; k < m; ++k) {
    cphi[k][2 * k] = AlgebraElement::scalar(shape, 1.0 / (1.0 - p));
    cpsi[k][2 * k + 1] = AlgebraElement::scalar(shape, 1.0 / p);
  }
  const auto a = validate_coefficient(AlgebraElement::scalar(shape, 1.0 - p), true);
  return validate_pair(linear_map(cphi), linear_map(cpsi), a);
}

AdditivePair interleave_pair(const Coefficient& a, int m) {
  if (m < 1) throw DomainError("interleave_pair needs rank >= 1");
  const auto& shape = a.shape();
  const auto zero = AlgebraElement::zero(shape);
  const auto one = AlgebraElement::identity(shape);
  CoeffMatrix right(m, std::vector<AlgebraElement>(2 * m, zero));
  CoeffMatrix right_psi = right;
  CoeffMatrix left(m, std::vector<AlgebraElement>(2 * m, one));
  CoeffMatrix left_psi = left;
  for (int k = 0; k < m; ++k) {
    right[k][2 * k] = one;
    left[k][2 * k] = a.inv;
    right_psi[k][2 * k + 1] = one;
    left_psi[k][2 * k + 1] = a.co_inv;
  }
  return validate_pair(linear_map(right, left), linear_map(right_psi, left_psi), a);
}

AdditivePair morphism_shift_pair(int m, const AlgebraShape& shape) {
  if (m < 1) throw DomainError("morphism_shift_pair needs rank >= 1");
  const auto zero = AlgebraElement::zero(shape);
  CoeffMatrix shift(m, std::vector<AlgebraElement>(2 * m, zero));
  CoeffMatrix incl = shift;
  for (int k = 0; k < m; ++k) {
    shift[k][m + k] = AlgebraElement::identity(shape);
    incl[k][k] = AlgebraElement::identity(shape);
  }
  const auto a = validate_coefficient(AlgebraElement::scalar(shape, 0.5), true);
  return validate_pair(linear_map(shift), linear_map(incl), a);
}

PairImage pair_image_mode(const AdditivePair& pair, std::string pair_id) {
  if (!pair.validated) throw PairNotValidated();
  PairImage mode;
  mode.pair_id = std::move(pair_id);
  mode.draw = [pair](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto z = sample_vector<Scalar>(pair.source(), rng);
    const auto w = sample_vector<Scalar>(pair.source(), rng);
    return VectorPair{pair.coefficient.inv * pair.phi(z), pair.coefficient.co_inv * pair.psi(w)};
  };
  return mode;
}

ModuleVector sample_k(const AdditivePair& pair, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto z = sample_vector<Scalar>(pair.source(), rng);
  const auto w = sample_vector<Scalar>(pair.source(), rng);
  return pair.phi(z) + pair.psi(w);
}

namespace {

CoeffMatrix coeff_adjoint(const CoeffMatrix& u) {
  const std::size_t m = u.size();
  const std::size_t n = u.front().size();
  CoeffMatrix d(n, std::vector<AlgebraElement>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) d[j][i] = adjoint(u[i][j]);
  return d;
}

/// Coefficient matrix of x -> v(u(x)) for right-coefficient maps.
CoeffMatrix coeff_then(const CoeffMatrix& u, const CoeffMatrix& v) {
  const std::size_t m = u.size();
  const std::size_t k = v.front().size();
  const auto& shape = u.front().front().shape();
  CoeffMatrix out(m, std::vector<AlgebraElement>(k, AlgebraElement::zero(shape)));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < v.size(); ++j) out[i][l] += u[i][j] * v[j][l];
  return out;
}

double identity_residual(const CoeffMatrix& c) {
  const auto& shape = c.front().front().shape();
  const auto one = AlgebraElement::identity(shape);
  const auto zero = AlgebraElement::zero(shape);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c[i].size(); ++j)
      worst = std::max(worst, residual(c[i][j], i == j ? one : zero));
  return worst;
}

}  // namespace

bool check_unitary_equivalence(const CoeffMatrix& u, const ModuleSpace& from,
                               const ModuleSpace& to) {
  const auto spaces = linear_spaces(u);
  if (!(spaces.domain == from) || !(spaces.codomain == to))
    throw ShapeError("coefficient matrix does not map " + from.to_string() + " to " +
                     to.to_string());
  // <u x, y> = <x, u* y> with u* given by the blockwise conjugate transpose.
  const auto u_star = coeff_adjoint(u);
  constexpr double kTol = 1e-9;
  return identity_residual(coeff_then(u, u_star)) <= kTol &&
         identity_residual(coeff_then(u_star, u)) <= kTol;
}

AdditivePair restricted_morphism_pair(const CoeffMatrix& u, const ModuleSpace& e, int m) {
  const auto spaces = linear_spaces(u);
  if (!(spaces.domain == e) || !(spaces.codomain == e))
    throw ShapeError("restriction needs an endomorphism of " + e.to_string());
  if (m < 1 || m >= e.rank()) throw DomainError("submodule rank must be in [1, rank(E))");
  const auto zero = AlgebraElement::zero(e.algebra());
  CoeffMatrix phi(u.begin(), u.begin() + m);
  CoeffMatrix incl(m, std::vector<AlgebraElement>(e.rank(), zero));
  for (int k = 0; k < m; ++k) incl[k][k] = AlgebraElement::identity(e.algebra());
  const auto a = validate_coefficient(AlgebraElement::scalar(e.algebra(), 0.5), true);
  return validate_pair(linear_map(phi), linear_map(incl), a);
}

}  // namespace cstar_jensen
