// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_CAPACITY_HPP
#define PLAP_CAPACITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "plap/eigensolver.hpp"
#include "plap/field.hpp"

namespace plap
{

// Condenser (K, B): potential 1 on the cells of K, 0 outside the open ball B.
struct CondenserProblem
{
  Grid grid;
  std::vector<std::uint8_t> inner;  // cells of K
  Ball outer;
  double p = 2.0;
  std::string descriptor;  // free-form text describing K

  // Throws unless K lies strictly inside B (every face neighbor of a K cell is
  // inside B) and B fits inside the lattice with a margin.
  void validate() const;
  bool inner_empty() const;
};

struct CapacityResult
{
  double value = 0.0;
  ScalarField potential;  // on the cells of B; 1 on K
  bool converged = false;
  int iterations = 0;
};

// Throws unless the ball, plus a one-cell margin, lies inside the lattice.
void validate_grid_ball(const Grid &grid, const Ball &ball);

// Lattice with a cell center at the origin large enough for `outer`.
Grid condenser_grid(int dim, double h, const Ball &outer);

// Rasterized compact sets: cells whose center lies within h/2 of the set.
// Each throws "under-resolved" when no cell is hit.
std::vector<std::uint8_t> closed_ball_set(const Grid &grid, const Ball &ball);
std::vector<std::uint8_t> segment_set(const Grid &grid, const Point &a, const Point &b);
std::vector<std::uint8_t> point_set(const Grid &grid, const Point &x);
// Complement of a domain restricted to the closed ball (the set F where a
// function extended by zero vanishes). Both must share the lattice.
std::vector<std::uint8_t> complement_in_ball(const GridDomain &domain, const Ball &ball);

// Minimizes the discrete p-energy over potentials clamped to 1 on K and 0
// outside B. Uses the solver tolerances, backend and line-search settings.
CapacityResult capacity(const CondenserProblem &problem, const SolverConfig &config = {});

// Capacity of the concentric condenser (closed B_a, open B_b) in R^N from the
// radial Euler-Lagrange equation. Throws unless 0 < a < b.
double radial_capacity(double a, double b, double p, int dim);

// Area of the unit sphere in R^N.
double unit_sphere_area(int dim);

struct ButrReport
{
  int dim = 2;
  double p = 2.0;
  double r = 0.0;
  double h = 0.0;
  double segment_capacity = 0.0;  // Cap(K cap closed B_r, B_2r)
  double ball_capacity = 0.0;     // Cap(closed B_r, B_2r)
  double reference_constant = 0.0;
  double margin = 0.0;  // segment_capacity / (reference_constant * ball_capacity) - 1
  bool holds = false;   // margin >= -tolerance
};

// Lower bound for the capacity of a connected set near one of its points:
// Cap(K cap closed B_r(x), B_2r(x)) >= C Cap(closed B_r, B_2r) with
// C = Cap(radius segment [0,1] e_1, B_2) / Cap(closed B_1, B_2), for K a
// straight segment through x. `cells_per_radius` fixes the resolution, so the
// reference constant is evaluated on the matching lattice.
// Throws "lemma hypothesis violated" for p <= N - 1.
ButrReport butr_ratio_check(double segment_length, double r, double p, int dim, int cells_per_radius = 16,
                            double tolerance = 0.05, const SolverConfig &config = {});

// Reference constant C for (N, p, resolution), computed once and cached.
double reference_constant(int dim, double p, int cells_per_radius, const SolverConfig &config = {});

enum class Trend
{
  Positive,  // converging to a positive limit
  Decaying,  // tending to zero
  Undecided
};

const char *to_string(Trend trend);

struct TrendReport
{
  std::vector<double> h;
  std::vector<double> value;
  // Per consecutive triple (finest last): classification, the rate at which
  // the increments of 1/value shrink per unit of log(1/h), and the limit
  // extrapolated from it (0 when decaying).
  std::vector<Trend> triple_trend;
  std::vector<double> triple_rate;
  std::vector<double> triple_limit;
  Trend trend = Trend::Undecided;  // classification of the finest triple
  bool stable = false;             // same classification on all triples
};

// Classifies a refinement series (h decreasing). Needs at least three levels.
TrendReport classify_trend(std::vector<double> h, std::vector<double> value, double min_rate = 0.1);

enum class ProbeSet
{
  Point,   // the cell at the center
  Segment  // the segment from -e_1/2 to e_1/2, one cell thick
};

// Cap(K, B_1) over the refinements, classified.
TrendReport point_capacity_probe(double p, int dim, const std::vector<double> &refinements,
                                 ProbeSet set = ProbeSet::Point, const SolverConfig &config = {});

}  // namespace plap

#endif  // PLAP_CAPACITY_HPP
