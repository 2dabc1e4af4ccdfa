#include "cstar_jensen/kernel.hpp"

#include <algorithm>
#include <complex>
#include <random>

namespace cstar_jensen {

std::vector<AlgebraElement> self_adjoint_basis(const AlgebraShape& shape) {
  std::vector<AlgebraElement> basis;
  for (std::size_t k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.dim(k);
    for (int r = 0; r < n; ++r) basis.push_back(AlgebraElement::matrix_unit(shape, k, r, r));
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) {
        const auto e_rc = AlgebraElement::matrix_unit(shape, k, r, c);
        const auto e_cr = AlgebraElement::matrix_unit(shape, k, c, r);
        basis.push_back(e_rc + e_cr);
        basis.push_back(Scalar(0, 1) * (e_rc - e_cr));
      }
  }
  return basis;
}

Eigen::VectorXd self_adjoint_coords(const AlgebraElement& h) {
  const auto& shape = h.shape();
  Eigen::VectorXd out(shape.complex_dimension());
  Eigen::Index idx = 0;
  for (std::size_t k = 0; k < shape.num_blocks(); ++k) {
    const int n = shape.dim(k);
    const auto& b = h.block(k);
    for (int r = 0; r < n; ++r) out(idx++) = b(r, r).real();
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) {
        // Hermitian part: (b_rc + conj(b_cr)) / 2
        const Scalar hrc = (b(r, c) + std::conj(b(c, r))) / 2.0;
        out(idx++) = hrc.real();
        out(idx++) = hrc.imag();
      }
  }
  return out;
}

Eigen::VectorXd to_real(const ModuleVector& v) {
  const auto& shape = v.space().algebra();
  Eigen::VectorXd out(2 * v.rank() * shape.complex_dimension());
  Eigen::Index idx = 0;
  for (const auto& c : v.coords())
    for (const auto& b : c.blocks())
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        for (Eigen::Index col = 0; col < b.cols(); ++col) {
          out(idx++) = b(r, col).real();
          out(idx++) = b(r, col).imag();
        }
  return out;
}

ModuleVector from_real(const ModuleSpace& space, const Eigen::VectorXd& r) {
  const auto& shape = space.algebra();
  if (r.size() != 2 * space.rank() * shape.complex_dimension())
    throw ShapeError("real coordinate vector of wrong length");
  std::vector<AlgebraElement> coords;
  Eigen::Index idx = 0;
  for (int i = 0; i < space.rank(); ++i) {
    std::vector<AlgebraElement::Block> blocks;
    for (std::size_t k = 0; k < shape.num_blocks(); ++k) {
      const int n = shape.dim(k);
      AlgebraElement::Block b(n, n);
      for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col) {
          b(row, col) = Scalar(r(idx), r(idx + 1));
          idx += 2;
        }
      blocks.push_back(std::move(b));
    }
    coords.emplace_back(shape, std::move(blocks));
  }
  return ModuleVector(space, std::move(coords));
}

ModuleVector KernelMap::apply(const AlgebraElement& h) const {
  return from_real(target, matrix * self_adjoint_coords(h));
}

ModuleVector KernelMap::form(const ModuleVector& x, const ModuleVector& y) const {
  return apply(inner_product(x, y) + inner_product(y, x));
}

namespace {

/// Real matrix of v -> c.v on G.
Eigen::MatrixXd left_action_matrix(const AlgebraElement& c, const ModuleSpace& target) {
  const Eigen::Index dim = 2 * target.rank() * target.algebra().complex_dimension();
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e(j) = 1.0;
    m.col(j) = to_real(c * from_real(target, e));
  }
  return m;
}

/// Rows expressing  M s(c b_k c*) - L_c M e_k = 0  for every basis b_k, in the
/// column-major unknown vec(M).
void append_constraints(const AlgebraElement& c, const ModuleSpace& target,
                        const std::vector<AlgebraElement>& sa_basis, Eigen::MatrixXd& system,
                        Eigen::Index& row) {
  const Eigen::Index dim_g = 2 * target.rank() * target.algebra().complex_dimension();
  const Eigen::Index dim_sa = static_cast<Eigen::Index>(sa_basis.size());
  const Eigen::MatrixXd lc = left_action_matrix(c, target);
  const auto c_star = adjoint(c);
  for (Eigen::Index k = 0; k < dim_sa; ++k) {
    const Eigen::VectorXd s = self_adjoint_coords(c * sa_basis[k] * c_star);
    auto rows = system.middleRows(row, dim_g);
    // (s^T kron I) vec(M)
    for (Eigen::Index l = 0; l < dim_sa; ++l)
      rows.middleCols(l * dim_g, dim_g).diagonal().array() += s(l);
    // -(e_k^T kron L_c) vec(M)
    rows.middleCols(k * dim_g, dim_g) -= lc;
    row += dim_g;
  }
}

}  // namespace

KernelSolution solve_abiadditive_kernel(const Coefficient& a, const ModuleSpace& target) {
  if (!(a.shape() == target.algebra()))
    throw ShapeError("coefficient and target module over different algebras");
  const auto sa_basis = self_adjoint_basis(a.shape());
  const Eigen::Index dim_sa = static_cast<Eigen::Index>(sa_basis.size());
  const Eigen::Index dim_g = 2 * target.rank() * target.algebra().complex_dimension();
  const Eigen::Index unknowns = dim_g * dim_sa;

  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(2 * unknowns, unknowns);
  Eigen::Index row = 0;
  append_constraints(a.value, target, sa_basis, system, row);
  append_constraints(a.complement, target, sa_basis, system, row);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cutoff = 1e-10 * std::max(1.0, smax) * static_cast<double>(unknowns);

  KernelSolution sol;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  sol.spectral_gap = rank > 0 ? sv(rank - 1) : 0.0;
  for (Eigen::Index j = rank; j < unknowns; ++j) {
    const Eigen::VectorXd v = svd.matrixV().col(j);
    KernelMap psi{target, Eigen::Map<const Eigen::MatrixXd>(v.data(), dim_g, dim_sa)};
    sol.basis.push_back(std::move(psi));
  }
  sol.dimension = static_cast<int>(sol.basis.size());
  return sol;
}

double kernel_constraint_residual(const KernelMap& psi, const Coefficient& a,
                                  const ModuleSpace& domain, int n, std::uint64_t seed) {
  if (!(domain.algebra() == a.shape())) throw ShapeError("domain over a different algebra");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const auto a_star = adjoint(a.value);
  const auto c_star = adjoint(a.complement);
  for (int s = 0; s < n; ++s) {
    const auto r = sample_element<Scalar>(a.shape(), rng);
    const auto b = r + adjoint(r);
    worst = std::max(worst, residual(psi.apply(a.value * b * a_star), a.value * psi.apply(b)));
    worst = std::max(worst, residual(psi.apply(a.complement * b * c_star),
                                     a.complement * psi.apply(b)));
    const auto x = sample_vector<Scalar>(domain, rng);
    const auto ax = a.value * x;
    const auto cx = a.complement * x;
    worst = std::max(worst, residual(psi.form(ax, ax), a.value * psi.form(x, x)));
    worst = std::max(worst, residual(psi.form(cx, cx), a.complement * psi.form(x, x)));
  }
  return worst;
}

}  // namespace cstar_jensen
