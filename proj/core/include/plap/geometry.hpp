// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_GEOMETRY_HPP
#define PLAP_GEOMETRY_HPP

#include <string>
#include <string_view>
#include <vector>

#include "plap/grid_domain.hpp"

namespace plap
{

enum class DomainKind
{
  Interval,
  Rectangle,
  Ball,
  Annulus,
  PuncturedBall,
  SpikedBall,
  Dumbbell
};

// Parametric description of one member of the generated domain families. All
// shapes are centered at the coordinate origin.
//
//   interval(L)               (-L/2, L/2), N = 1
//   rectangle(a, b)           a along x, b along the remaining axes
//   ball(R)                   |x| < R
//   annulus(a, b)             a < |x| < b
//   punctured-ball(R, pts)    ball minus the cell nearest to each point
//   spiked-ball(R, k, w, l)   ball minus k radial slits of width w reaching
//                             depth l in from the sphere
//   dumbbell(w)               balls of radius 1/2 at x = -3/4 and x = 3/4
//                             joined by a neck of width w
struct DomainSpec
{
  DomainKind kind = DomainKind::Ball;
  int dim = 2;
  double a = 1.0;
  double b = 1.0;
  std::vector<Point> punctures;
  int spike_count = 0;
  double spike_width = 0.0;
  double spike_length = 0.0;
  std::string name;

  std::string label() const;
};

DomainSpec interval_spec(double length);
DomainSpec rectangle_spec(int dim, double a, double b);
DomainSpec ball_spec(int dim, double radius);
DomainSpec annulus_spec(int dim, double inner, double outer);
DomainSpec punctured_ball_spec(int dim, double radius, std::vector<Point> punctures);
DomainSpec spiked_ball_spec(int dim, double radius, int count, double width, double length);
DomainSpec dumbbell_spec(int dim, double neck_width);

// Text form used by the CLI and sweep files, e.g. "ball:1", "rectangle:2,1",
// "annulus:0.5,1", "punctured-ball:1;0,0;0.5,0", "spiked-ball:1,8,0.125,0.6",
// "dumbbell:0.25", "interval:1". Throws on malformed input.
DomainSpec parse_domain_spec(std::string_view text, int dim);
std::string to_string(const DomainSpec &spec);

// Decimal or fraction ("1/128"); throws on malformed input.
double parse_real(std::string_view text);

// Rasterizes `spec` on a lattice of spacing h with a cell center at the origin.
// Throws "feature under-resolved" when a slit, neck or gap is narrower than 2h,
// and "disconnected domain" when carving splits the domain.
GridDomain generate_domain(const DomainSpec &spec, double h);

// Copies `domain` onto a larger lattice sharing the same spacing and cell
// centers. Throws if the lattices are not aligned or the frame is too small.
GridDomain embed(const GridDomain &domain, const Grid &frame);

// Lattice containing both domains (they must share h and be aligned).
Grid common_frame(const GridDomain &a, const GridDomain &b);

// True iff every cell of `inner` is a cell of `outer` (aligned lattices).
bool is_subset(const GridDomain &inner, const GridDomain &outer);

// Fixed test families. The adversarial family: ball, square, 2:1 and 20:1
// rectangles, annulus, dumbbell, 8-slit ball, 1/4/16-puncture balls.
std::vector<DomainSpec> adversarial_family(int dim);
// Rectangles of short side 1/2 and aspect ratios 1, 2, 5, 10, 20 (N = 2).
std::vector<DomainSpec> thin_rectangle_family();

//
// Distance transform and derived quantities.
//

struct DistanceMap
{
  // Squared distance, in units of h^2, from each cell center to the nearest
  // center of a cell outside the domain; zero outside.
  std::vector<double> sqdist;
  // Index of that nearest outside cell (the cell itself when outside).
  std::vector<Index> nearest;
};

// Exact Euclidean distance transform by separable lower envelopes of parabolas.
DistanceMap distance_transform(const Grid &grid, std::span<const std::uint8_t> mask);

struct InradiusResult
{
  double radius = 0.0;
  Point center = {0.0, 0.0, 0.0};
  // The discrete value is within +/- h sqrt(N) of the continuum inradius.
  double error_bound = 0.0;
};

InradiusResult inradius_detail(const GridDomain &domain);
double inradius(const GridDomain &domain);

// Outside cells face-adjacent to at least one domain cell.
std::vector<Index> discrete_boundary(const GridDomain &domain);

// Face-connected components of the complement (within the lattice box) that
// touch the domain.
int boundary_components(const GridDomain &domain);

//
// Covering by boundary-centered balls.
//

struct Covering
{
  double radius = 0.0;
  std::vector<Ball> balls;
  std::vector<int> subset;  // subset index per ball
  int subset_count = 0;
};

// Upper bound on the number of subsets: ceil((2 sqrt(N) + 4)^N).
int covering_subset_budget(int dim);

// Balls of radius inradius * (1 + sqrt(N)) centered at discrete boundary cells,
// covering every domain cell, greedily split into subsets of pairwise disjoint
// balls. Throws if the subset budget is exceeded.
Covering hayman_cover(const GridDomain &domain);

struct CoveringCheck
{
  bool covers_all = false;
  bool centers_on_boundary = false;
  bool subsets_disjoint = false;
  bool within_budget = false;
  Index uncovered = 0;

  bool ok() const { return covers_all && centers_on_boundary && subsets_disjoint && within_budget; }
};

CoveringCheck check_covering(const GridDomain &domain, const Covering &covering);

}  // namespace plap

#endif  // PLAP_GEOMETRY_HPP
