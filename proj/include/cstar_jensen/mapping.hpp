#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "cstar_jensen/types.hpp"

namespace cstar_jensen {

class Mapping;

using CoeffMatrix = std::vector<std::vector<AlgebraElement>>;

/// T(x)_j = sum_i left[i][j] x_i coeffs[i][j]; `left` empty means the unit.
/// Right coefficients commute with the left action, so without `left` the map
/// is a-additive for every a.
struct LinearNode {
  CoeffMatrix coeffs;
  CoeffMatrix left;
};

/// x -> B(x, x) with B(x, y) = scale (<x,y> + <y,x>) g.
struct QuadKernelNode {
  ModuleVector g;
  double scale = 0.0;
};

struct ConstantNode {
  ModuleVector value;
};

struct SumNode {
  std::vector<Mapping> children;
};

/// delta when ||x - site|| < radius, zero otherwise.
struct PerturbationNode {
  ModuleVector site;
  ModuleVector delta;
  double radius = 0.0;
};

using MappingNode =
    std::variant<LinearNode, QuadKernelNode, ConstantNode, SumNode, PerturbationNode>;

/// Immutable evaluable expression tree f: E -> G.
class Mapping {
 public:
  Mapping(ModuleSpace domain, ModuleSpace codomain, MappingNode node);

  const ModuleSpace& domain() const { return domain_; }
  const ModuleSpace& codomain() const { return codomain_; }
  const MappingNode& node() const { return *node_; }

  ModuleVector operator()(const ModuleVector& x) const;

  bool is_linear() const { return std::holds_alternative<LinearNode>(*node_); }

 private:
  ModuleSpace domain_;
  ModuleSpace codomain_;
  std::shared_ptr<const MappingNode> node_;
};

Mapping linear_map(const CoeffMatrix& coeffs);
/// Two-sided variant, T(x)_j = sum_i left[i][j] x_i coeffs[i][j]. Additive but
/// not module-linear; used for pairs over non-central coefficients.
Mapping linear_map(const CoeffMatrix& coeffs, const CoeffMatrix& left);
Mapping identity_map(const ModuleSpace& space);
Mapping zero_map(const ModuleSpace& domain, const ModuleSpace& codomain);
Mapping constant_map(const ModuleSpace& domain, const ModuleVector& value);
Mapping sum_map(std::vector<Mapping> children);

/// Symmetric biadditive orthogonality-preserving form
/// B(x, y) = scale (<x,y> + <y,x>) g.
struct QuadForm {
  ModuleVector g;
  double scale = 0.0;

  ModuleVector operator()(const ModuleVector& x, const ModuleVector& y) const;
  Mapping diagonal(const ModuleSpace& domain) const;
};

QuadForm quad_form(const ModuleVector& g, double scale);

/// f(x) = A(x) + Bdiag(x) + c.
Mapping compose_jensen(const Mapping& A, const std::optional<Mapping>& b_diag,
                       const ModuleVector& c);

/// g(x) = f(x) + delta inside the open ball of `radius` around `site`.
Mapping perturb(const Mapping& f, const ModuleVector& site, const ModuleVector& delta,
                double radius);

// ---------------------------------------------------------------------------
// Additive pairs (phi, psi): F -> E

struct AdditivePair {
  Mapping phi;
  Mapping psi;
  Coefficient coefficient;
  bool validated = false;
  /// max over basis pairs of ||<phi z, psi w>|| residual
  double cross_residual = 0.0;
  /// max over basis pairs of r(a<phi z, phi w>a*, (1-a)<psi z, psi w>(1-a)*)
  double balance_residual = 0.0;

  const ModuleSpace& source() const { return phi.domain(); }
  const ModuleSpace& target() const { return phi.codomain(); }
};

/// Complex-linear basis of a module: matrix units placed in each coordinate.
std::vector<ModuleVector> complex_basis(const ModuleSpace& space);

/// Checks both pair conditions on every pair of a complex-linear basis of F
/// (matrix units times module basis vectors). Throws PairConditionViolated.
AdditivePair validate_pair(const Mapping& phi, const Mapping& psi, const Coefficient& a,
                           double tol = tolerance::kPairValidation);

/// Interleaving pair on C^N: phi -> even slots scaled by 1/(1-p), psi -> odd
/// slots scaled by 1/p, a = (1-p).1. The algebra may be any shape; the
/// coefficient is then the scalar (1-p).1.
AdditivePair interleave_pair(double p, int n, const AlgebraShape& shape = AlgebraShape{});

/// Interleaving pair for an arbitrary valid coefficient: F = A^m, E = A^{2m},
/// phi(z)_{2k} = a^{-1} z_k, psi(z)_{2k+1} = (1-a)^{-1} z_k.
AdditivePair interleave_pair(const Coefficient& a, int m);

/// E = A^{2m}, F = A^m; psi includes F in the first m coordinates, phi shifts
/// it into the last m, a = 1/2.
AdditivePair morphism_shift_pair(int m, const AlgebraShape& shape = AlgebraShape{});

/// Sampler drawing (a^{-1} phi(z), (1-a)^{-1} psi(w)) for random z, w.
PairImage pair_image_mode(const AdditivePair& pair, std::string pair_id = "pair");

/// x = phi(z) + psi(w) with z, w drawn from `seed`.
ModuleVector sample_k(const AdditivePair& pair, std::uint64_t seed);

/// u given by its right-coefficient matrix (from.rank x to.rank). True iff
/// u* u = id and u u* = id within 1e-9 residual.
bool check_unitary_equivalence(const CoeffMatrix& u, const ModuleSpace& from,
                               const ModuleSpace& to);

/// Restriction phi := u|F of a coordinate map u: E -> E to the first m
/// coordinates, paired with the inclusion of F.
AdditivePair restricted_morphism_pair(const CoeffMatrix& u, const ModuleSpace& e, int m);

}  // namespace cstar_jensen
