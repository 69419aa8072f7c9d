// SPDX-License-Identifier: Apache-2.0

#include "plap/grid_domain.hpp"

#include <cmath>
#include <deque>

#include "plap/error.hpp"

namespace plap
{

Point Grid::center(Index cell) const
{
  const Coord c = coords(cell);
  Point x = {0.0, 0.0, 0.0};
  for (int d = 0; d < dim; d++)
  {
    x[d] = origin[d] + static_cast<double>(c[d]) * h;
  }
  return x;
}

double Grid::cell_volume() const
{
  return std::pow(h, dim);
}

Grid Grid::centered(int dim, double h, const Point &half_extent, Index margin)
{
  if (dim < 1 || dim > 3)
  {
    throw Error("grid dimension must be 1, 2 or 3");
  }
  if (!(h > 0.0) || !std::isfinite(h))
  {
    throw Error("grid spacing must be positive");
  }
  Grid g;
  g.dim = dim;
  g.h = h;
  for (int d = 0; d < dim; d++)
  {
    // Cells with |i h| <= half_extent, plus the margin.
    const auto k = static_cast<Index>(std::floor(half_extent[d] / h + 1e-9)) + margin;
    g.size[d] = 2 * k + 1;
    g.origin[d] = -static_cast<double>(k) * h;
  }
  return g;
}

void validate(const Ball &ball)
{
  if (!(ball.radius > 0.0) || !std::isfinite(ball.radius))
  {
    throw Error("ball radius must be positive");
  }
}

double distance(const Point &a, const Point &b, int dim)
{
  double s = 0.0;
  for (int d = 0; d < dim; d++)
  {
    s += (a[d] - b[d]) * (a[d] - b[d]);
  }
  return std::sqrt(s);
}

int count_components(const Grid &grid, std::span<const std::uint8_t> mask)
{
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::deque<Index> queue;
  int components = 0;
  for (Index start = 0; start < grid.cell_count(); start++)
  {
    if (!mask[start] || seen[start])
    {
      continue;
    }
    components++;
    seen[start] = 1;
    queue.push_back(start);
    while (!queue.empty())
    {
      const Index cell = queue.front();
      queue.pop_front();
      const Coord c = grid.coords(cell);
      for (int d = 0; d < grid.dim; d++)
      {
        const Index s = grid.stride(d);
        if (c[d] > 0 && mask[cell - s] && !seen[cell - s])
        {
          seen[cell - s] = 1;
          queue.push_back(cell - s);
        }
        if (c[d] + 1 < grid.size[d] && mask[cell + s] && !seen[cell + s])
        {
          seen[cell + s] = 1;
          queue.push_back(cell + s);
        }
      }
    }
  }
  return components;
}

Index nearest_cell(const Grid &grid, const Point &x)
{
  Coord c = {0, 0, 0};
  for (int d = 0; d < grid.dim; d++)
  {
    const auto i = static_cast<Index>(std::llround((x[d] - grid.origin[d]) / grid.h));
    if (i < 0 || i >= grid.size[d])
    {
      return -1;
    }
    c[d] = i;
  }
  return grid.index(c);
}

GridDomain::GridDomain(Grid grid, std::vector<std::uint8_t> mask, std::string label)
  : grid_(grid), mask_(std::move(mask)), label_(std::move(label))
{
  if (grid_.dim < 1 || grid_.dim > 3)
  {
    throw Error("domain dimension must be 1, 2 or 3");
  }
  if (!(grid_.h > 0.0) || !std::isfinite(grid_.h))
  {
    throw Error("grid spacing must be positive");
  }
  for (int d = 0; d < 3; d++)
  {
    if (grid_.size[d] < 1 || (d >= grid_.dim && grid_.size[d] != 1))
    {
      throw Error("invalid grid size");
    }
  }
  if (static_cast<Index>(mask_.size()) != grid_.cell_count())
  {
    throw Error("mask size does not match grid");
  }
  for (Index cell = 0; cell < grid_.cell_count(); cell++)
  {
    if (!mask_[cell])
    {
      continue;
    }
    mask_[cell] = 1;
    const Coord c = grid_.coords(cell);
    for (int d = 0; d < grid_.dim; d++)
    {
      if (c[d] == 0 || c[d] == grid_.size[d] - 1)
      {
        throw Error("domain touches the grid border; a one-cell empty margin is required");
      }
    }
    cells_.push_back(cell);
  }
  if (cells_.empty())
  {
    throw Error("domain mask is empty");
  }
  if (count_components(grid_, mask_) != 1)
  {
    throw Error("disconnected domain");
  }
}

GridDomain GridDomain::scaled(double t) const
{
  if (!(t > 0.0))
  {
    throw Error("scale factor must be positive");
  }
  Grid g = grid_;
  g.h *= t;
  for (auto &o : g.origin)
  {
    o *= t;
  }
  return GridDomain(g, mask_, label_);
}

GridDomain GridDomain::relabeled(std::string label) const
{
  GridDomain copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

Coord GridDomain::occupied_extent() const
{
  Coord lo = {grid_.size[0], grid_.size[1], grid_.size[2]};
  Coord hi = {-1, -1, -1};
  for (Index cell : cells_)
  {
    const Coord c = grid_.coords(cell);
    for (int d = 0; d < 3; d++)
    {
      lo[d] = std::min(lo[d], c[d]);
      hi[d] = std::max(hi[d], c[d]);
    }
  }
  return {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1};
}

}  // namespace plap
