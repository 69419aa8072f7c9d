// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_GRID_DOMAIN_HPP
#define PLAP_GRID_DOMAIN_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace plap
{

using Index = std::int64_t;
using Point = std::array<double, 3>;
using Coord = std::array<Index, 3>;

// Uniform cell-centered lattice in N <= 3 dimensions. Unused trailing axes have
// size 1. Cell i has its center at origin + i * h.
struct Grid
{
  int dim = 2;
  double h = 1.0;
  Point origin = {0.0, 0.0, 0.0};
  Coord size = {1, 1, 1};

  Index cell_count() const { return size[0] * size[1] * size[2]; }
  Index stride(int axis) const { return axis == 0 ? 1 : (axis == 1 ? size[0] : size[0] * size[1]); }
  Index index(const Coord &c) const { return c[0] + size[0] * (c[1] + size[1] * c[2]); }
  Coord coords(Index cell) const
  {
    return {cell % size[0], (cell / size[0]) % size[1], cell / (size[0] * size[1])};
  }
  Point center(Index cell) const;
  double cell_volume() const;

  // Lattice with a cell center at the coordinate origin, covering the box
  // [-half_extent, half_extent] plus `margin` extra cells on every side.
  static Grid centered(int dim, double h, const Point &half_extent, Index margin = 1);

  bool operator==(const Grid &) const = default;
};

struct Ball
{
  Point center = {0.0, 0.0, 0.0};
  double radius = 1.0;
};

// Throws unless radius > 0 and finite.
void validate(const Ball &ball);

double distance(const Point &a, const Point &b, int dim);

// Binary occupancy mask of a connected bounded domain. A cell belongs to the
// domain iff its center does. Immutable after construction.
class GridDomain
{
public:
  // Validates: nonempty, one face-connected component, one-cell false margin.
  GridDomain(Grid grid, std::vector<std::uint8_t> mask, std::string label = {});

  const Grid &grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  double h() const { return grid_.h; }
  const std::string &label() const { return label_; }

  bool contains(Index cell) const { return mask_[static_cast<std::size_t>(cell)] != 0; }
  std::span<const std::uint8_t> mask() const { return mask_; }

  // Indices of the cells inside the domain, in increasing order.
  const std::vector<Index> &cells() const { return cells_; }
  Index interior_count() const { return static_cast<Index>(cells_.size()); }
  double volume() const { return static_cast<double>(cells_.size()) * grid_.cell_volume(); }

  // Same cells on a lattice stretched by t (h and origin multiplied by t).
  GridDomain scaled(double t) const;
  GridDomain relabeled(std::string label) const;

  // Extent of the occupied cells along each axis, in cells.
  Coord occupied_extent() const;

private:
  Grid grid_;
  std::vector<std::uint8_t> mask_;
  std::vector<Index> cells_;
  std::string label_;
};

// Number of face-connected components of `mask` (cells with value != 0).
int count_components(const Grid &grid, std::span<const std::uint8_t> mask);

// Cell whose center is nearest to `x`, or -1 if x lies outside the lattice.
Index nearest_cell(const Grid &grid, const Point &x);

}  // namespace plap

#endif  // PLAP_GRID_DOMAIN_HPP
