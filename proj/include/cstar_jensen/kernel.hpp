#pragma once

// Search for a-biadditive kernels of the form B(x, y) = Psi(<x,y> + <y,x>),
// Psi a real-linear map from the self-adjoint part of A into G.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cstar_jensen/types.hpp"

namespace cstar_jensen {

/// Real basis of the self-adjoint part of A: diagonal units, E_kl + E_lk and
/// i(E_kl - E_lk) for k < l, block by block.
std::vector<AlgebraElement> self_adjoint_basis(const AlgebraShape& shape);

/// Coordinates of the Hermitian part of h in self_adjoint_basis().
Eigen::VectorXd self_adjoint_coords(const AlgebraElement& h);

/// Real coordinates (re, im per entry) of a module vector, and back.
Eigen::VectorXd to_real(const ModuleVector& v);
ModuleVector from_real(const ModuleSpace& space, const Eigen::VectorXd& r);

struct KernelMap {
  ModuleSpace target;
  /// real dim(G) x dim(A_sa)
  Eigen::MatrixXd matrix;

  ModuleVector apply(const AlgebraElement& h) const;
  /// B(x, y) = Psi(<x,y> + <y,x>)
  ModuleVector form(const ModuleVector& x, const ModuleVector& y) const;
};

struct KernelSolution {
  std::vector<KernelMap> basis;
  int dimension = 0;
  /// smallest singular value kept out of the nullspace (diagnostic)
  double spectral_gap = 0.0;
};

/// Nullspace of Psi(a b a*) = a Psi(b), Psi((1-a) b (1-a)*) = (1-a) Psi(b)
/// over all self-adjoint b, via SVD of the stacked real system.
KernelSolution solve_abiadditive_kernel(const Coefficient& a, const ModuleSpace& target);

/// Max residual of both intertwining constraints on n random self-adjoint b,
/// and of B(ax, ax) = a B(x, x), B((1-a)x, (1-a)x) = (1-a) B(x, x) on n random x
/// in `domain` (which must live over the same algebra).
double kernel_constraint_residual(const KernelMap& psi, const Coefficient& a,
                                  const ModuleSpace& domain, int n, std::uint64_t seed);

}  // namespace cstar_jensen
