// SPDX-License-Identifier: Apache-2.0

#include "plap/stencil.hpp"

#include <algorithm>
#include <cmath>

#include "plap/error.hpp"

namespace plap
{

namespace
{

inline double value_of(const Vector &x, std::int32_t code)
{
  return code >= 0 ? x[code] : (code == Stencil::kOne ? 1.0 : 0.0);
}

// Forward-difference gradient at one stencil cell; returns |g|^2.
inline double cell_gradient(const Stencil::Cell &c, const Vector &x, int dim, double inv_h, double *g)
{
  const double u0 = value_of(x, c.self);
  double s = 0.0;
  for (int d = 0; d < dim; d++)
  {
    g[d] = (value_of(x, c.next[d]) - u0) * inv_h;
    s += g[d] * g[d];
  }
  return s;
}

}  // namespace

Stencil::Stencil(const Grid &grid, std::span<const std::uint8_t> free_cells, std::span<const std::uint8_t> one_cells)
  : grid_(grid), volume_(grid.cell_volume())
{
  const Index total = grid.cell_count();
  if (static_cast<Index>(free_cells.size()) != total || (!one_cells.empty() && static_cast<Index>(one_cells.size()) != total))
  {
    throw Error("stencil mask size does not match grid");
  }
  code_.assign(static_cast<std::size_t>(total), kZero);
  for (Index cell = 0; cell < total; cell++)
  {
    const bool one = !one_cells.empty() && one_cells[cell];
    const bool free = free_cells[cell] && !one;
    if (!free && !one)
    {
      continue;
    }
    const Coord c = grid.coords(cell);
    for (int d = 0; d < grid.dim; d++)
    {
      if (c[d] == 0 || c[d] == grid.size[d] - 1)
      {
        throw Error("nonzero cells must not touch the lattice border");
      }
    }
    if (one)
    {
      code_[cell] = kOne;
    }
    else
    {
      code_[cell] = static_cast<std::int32_t>(unknown_cells_.size());
      unknown_cells_.push_back(cell);
    }
  }
  if (unknown_cells_.size() > static_cast<std::size_t>(INT32_MAX))
  {
    throw Error("lattice too large");
  }

  for (Index cell = 0; cell < total; cell++)
  {
    const Coord c = grid.coords(cell);
    bool defined = true;
    for (int d = 0; d < grid.dim; d++)
    {
      defined = defined && c[d] + 1 < grid.size[d];
    }
    if (!defined)
    {
      continue;
    }
    Cell sc{code_[cell], {kZero, kZero, kZero}};
    bool active = sc.self != kZero;
    for (int d = 0; d < grid.dim; d++)
    {
      sc.next[d] = code_[cell + grid.stride(d)];
      active = active || sc.next[d] != kZero;
    }
    // Cells whose whole stencil is clamped carry no dependence on the unknowns
    // but may still carry energy (two different clamped values).
    if (active)
    {
      cells_.push_back(sc);
    }
  }
}

std::vector<double> Stencil::expand(const Vector &x) const
{
  std::vector<double> out(code_.size(), 0.0);
  for (std::size_t cell = 0; cell < code_.size(); cell++)
  {
    out[cell] = value_of(x, code_[cell]);
  }
  return out;
}

Vector Stencil::compress(std::span<const double> values) const
{
  Vector x(unknowns());
  for (Index i = 0; i < unknowns(); i++)
  {
    x[i] = values[unknown_cells_[i]];
  }
  return x;
}

double p_energy(const Stencil &st, const Vector &x, double p, double eps)
{
  const int dim = st.dim();
  const double inv_h = 1.0 / st.h();
  const double e2 = eps * eps;
  const double ep = eps > 0.0 ? std::pow(eps, p) : 0.0;
  double sum = 0.0;
  double g[3];
  for (const auto &c : st.cells())
  {
    const double s = cell_gradient(c, x, dim, inv_h, g);
    if (s + e2 > 0.0)
    {
      sum += std::pow(s + e2, 0.5 * p) - ep;
    }
  }
  return sum * st.cell_volume();
}

double p_energy_gradient(const Stencil &st, const Vector &x, double p, double eps, Vector &grad)
{
  const int dim = st.dim();
  const double inv_h = 1.0 / st.h();
  const double e2 = eps * eps;
  const double ep = eps > 0.0 ? std::pow(eps, p) : 0.0;
  const double vol = st.cell_volume();
  grad.setZero(st.unknowns());
  double sum = 0.0;
  double g[3];
  for (const auto &c : st.cells())
  {
    const double s = cell_gradient(c, x, dim, inv_h, g);
    if (!(s + e2 > 0.0))
    {
      continue;
    }
    const double pw = std::pow(s + e2, 0.5 * (p - 2.0));
    sum += pw * (s + e2) - ep;
    const double w = p * pw * vol * inv_h;
    for (int d = 0; d < dim; d++)
    {
      const double flux = w * g[d];
      if (c.next[d] >= 0)
      {
        grad[c.next[d]] += flux;
      }
      if (c.self >= 0)
      {
        grad[c.self] -= flux;
      }
    }
  }
  return sum * vol;
}

double p_mass(const Stencil &st, const Vector &x, double p)
{
  double sum = 0.0;
  for (Index i = 0; i < x.size(); i++)
  {
    sum += std::pow(std::abs(x[i]), p);
  }
  return sum * st.cell_volume();
}

void p_mass_gradient(const Stencil &st, const Vector &x, double p, Vector &grad)
{
  grad.resize(x.size());
  const double scale = p * st.cell_volume();
  for (Index i = 0; i < x.size(); i++)
  {
    const double a = std::abs(x[i]);
    grad[i] = a > 0.0 ? scale * std::pow(a, p - 2.0) * x[i] : 0.0;
  }
}

double rms_gradient(const Stencil &st, const Vector &x)
{
  const int dim = st.dim();
  const double inv_h = 1.0 / st.h();
  double sum = 0.0;
  double g[3];
  for (const auto &c : st.cells())
  {
    sum += cell_gradient(c, x, dim, inv_h, g);
  }
  return st.cells().empty() ? 0.0 : std::sqrt(sum / static_cast<double>(st.cells().size()));
}

HessianAssembler::HessianAssembler(const Stencil &st) : st_(&st)
{
  const int dim = st.dim();
  const int nodes = dim + 1;
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(st.cells().size() * static_cast<std::size_t>(nodes * nodes));
  auto node = [](const Stencil::Cell &c, int a) { return a == 0 ? c.self : c.next[a - 1]; };
  for (const auto &c : st.cells())
  {
    for (int a = 0; a < nodes; a++)
    {
      for (int b = 0; b < nodes; b++)
      {
        if (node(c, a) >= 0 && node(c, b) >= 0)
        {
          triplets.emplace_back(node(c, a), node(c, b), 0.0);
        }
      }
    }
  }
  const auto n = static_cast<int>(st.unknowns());
  matrix_.resize(n, n);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();

  const int *outer = matrix_.outerIndexPtr();
  const int *inner = matrix_.innerIndexPtr();
  auto find = [&](int row, int col) {
    const int *lo = inner + outer[row];
    const int *hi = inner + outer[row + 1];
    const int *it = std::lower_bound(lo, hi, col);
    return static_cast<std::int32_t>(it - inner);
  };
  slots_.reserve(st.cells().size() * static_cast<std::size_t>(nodes * nodes));
  for (const auto &c : st.cells())
  {
    for (int a = 0; a < nodes; a++)
    {
      for (int b = 0; b < nodes; b++)
      {
        slots_.push_back(node(c, a) >= 0 && node(c, b) >= 0 ? find(node(c, a), node(c, b)) : -1);
      }
    }
  }
}

const SparseMatrix &HessianAssembler::assemble(const Vector &x, double p, double delta)
{
  const Stencil &st = *st_;
  const int dim = st.dim();
  const int nodes = dim + 1;
  const double inv_h = 1.0 / st.h();
  const double scale = st.cell_volume() * inv_h * inv_h;
  const double d2 = delta * delta;
  double *values = matrix_.valuePtr();
  std::fill(values, values + matrix_.nonZeros(), 0.0);

  double g[3];
  double q[3][3];
  double k[4][4];
  std::size_t offset = 0;
  for (const auto &c : st.cells())
  {
    const double s = cell_gradient(c, x, dim, inv_h, g);
    const double r = s + d2;
    // At r = 0 the weight is 2 for p = 2, 0 for p > 2 and unbounded for p < 2;
    // the last case is capped at p so the matrix stays finite.
    const double w = r > 0.0 ? p * std::pow(r, 0.5 * (p - 2.0)) : (p > 2.0 ? 0.0 : p);
    const double aniso = r > 0.0 ? (p - 2.0) / r : 0.0;
    for (int d = 0; d < dim; d++)
    {
      for (int e = 0; e < dim; e++)
      {
        q[d][e] = w * ((d == e ? 1.0 : 0.0) + aniso * g[d] * g[e]) * scale;
      }
    }
    // Local matrix on nodes [self, next_0, ..., next_{N-1}].
    double row_sum_total = 0.0;
    for (int d = 0; d < dim; d++)
    {
      double row_sum = 0.0;
      for (int e = 0; e < dim; e++)
      {
        k[1 + d][1 + e] = q[d][e];
        row_sum += q[d][e];
      }
      k[0][1 + d] = -row_sum;
      k[1 + d][0] = -row_sum;
      row_sum_total += row_sum;
    }
    k[0][0] = row_sum_total;
    for (int a = 0; a < nodes; a++)
    {
      for (int b = 0; b < nodes; b++)
      {
        const std::int32_t slot = slots_[offset + static_cast<std::size_t>(a * nodes + b)];
        if (slot >= 0)
        {
          values[slot] += k[a][b];
        }
      }
    }
    offset += static_cast<std::size_t>(nodes * nodes);
  }
  return matrix_;
}

}  // namespace plap
