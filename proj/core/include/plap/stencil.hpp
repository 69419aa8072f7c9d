// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_STENCIL_HPP
#define PLAP_STENCIL_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "plap/grid_domain.hpp"

namespace plap
{

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

// Forward-difference discretization of the p-Dirichlet energy on a lattice.
// Cell values are either unknowns (compressed to 0..unknowns()-1), clamped to
// zero, or clamped to one. Only cells whose forward-difference stencil touches
// a nonzero value are stored.
class Stencil
{
public:
  static constexpr std::int32_t kZero = -1;
  static constexpr std::int32_t kOne = -2;

  struct Cell
  {
    std::int32_t self;
    std::array<std::int32_t, 3> next;
  };

  // `free_cells` marks unknowns, `one_cells` (optional) marks cells held at 1.
  Stencil(const Grid &grid, std::span<const std::uint8_t> free_cells,
          std::span<const std::uint8_t> one_cells = {});

  const Grid &grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  double h() const { return grid_.h; }
  double cell_volume() const { return volume_; }
  Index unknowns() const { return static_cast<Index>(unknown_cells_.size()); }
  const std::vector<Index> &unknown_cells() const { return unknown_cells_; }
  const std::vector<Cell> &cells() const { return cells_; }

  // Scatter compressed values to a full lattice array (fixed cells included).
  std::vector<double> expand(const Vector &x) const;
  // Gather the unknowns from a full lattice array.
  Vector compress(std::span<const double> values) const;

private:
  Grid grid_;
  double volume_;
  std::vector<Index> unknown_cells_;
  std::vector<std::int32_t> code_;  // per lattice cell: unknown index, kZero or kOne
  std::vector<Cell> cells_;
};

// Energy V * sum_c [(|g_c|^2 + eps^2)^{p/2} - eps^p], g_c the forward-difference
// gradient at cell c and V the cell volume. With eps = 0 this is the plain
// discrete integral of |grad u|^p.
double p_energy(const Stencil &st, const Vector &x, double p, double eps);

// Energy and its derivative with respect to the unknowns.
double p_energy_gradient(const Stencil &st, const Vector &x, double p, double eps, Vector &grad);

// V * sum |x|^p and its derivative.
double p_mass(const Stencil &st, const Vector &x, double p);
void p_mass_gradient(const Stencil &st, const Vector &x, double p, Vector &grad);

// Builds and refills the Hessian of the regularized energy on a fixed sparsity
// pattern. The regularization `delta` enters only the Hessian, so it may be
// larger than the energy's eps to bound the conditioning of degenerate weights.
class HessianAssembler
{
public:
  explicit HessianAssembler(const Stencil &st);

  const SparseMatrix &assemble(const Vector &x, double p, double delta);
  const SparseMatrix &matrix() const { return matrix_; }

private:
  const Stencil *st_;
  SparseMatrix matrix_;
  // Per stencil cell: value slots for the (N+1)^2 local pairs, -1 when a pair
  // involves a fixed value.
  std::vector<std::int32_t> slots_;
};

// Root-mean-square of |g_c| over stencil cells (0 for a constant field).
double rms_gradient(const Stencil &st, const Vector &x);

}  // namespace plap

#endif  // PLAP_STENCIL_HPP
