// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_BOUNDS_HPP
#define PLAP_BOUNDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "plap/capacity.hpp"
#include "plap/eigensolver.hpp"
#include "plap/geometry.hpp"

namespace plap
{

// Relative slack granted to every guaranteed-sign check.
inline constexpr double kBoundTolerance = 0.02;

struct BoundCheck
{
  bool applicable = false;
  bool pass = false;
  double margin = 0.0;  // relative; pass iff margin >= -kBoundTolerance
  double value = 0.0;   // the compared quantity (see each check)
};

struct BoundReport
{
  std::string label;
  int dim = 2;
  double p = 2.0;
  double h = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  double product = 0.0;  // lambda * rho^p
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  int boundary_components = 0;
  BoundCheck upper;
  BoundCheck faber_krahn;
  BoundCheck planar;
  std::optional<double> free_boundary_product;       // set when p > N
  std::optional<double> connected_boundary_product;  // set when p > N - 1 and the boundary is connected
  std::vector<std::string> notes;

  // False iff an applicable guaranteed-sign check failed.
  bool signs_ok() const;
};

// Principal eigenvalue of the unit ball at spacing h, computed once per
// (N, p, h) and shared between threads.
double unit_ball_eigenvalue(int dim, double p, double h, const SolverConfig &config = {});

// lambda(B_1) rho^-p - lambda, relative to lambda(B_1) rho^-p; `value` holds
// lambda(B_1) rho^-p. Throws on non-converged input.
BoundCheck verify_upper_bound(const GridDomain &domain, const EigenResult &result, double p, double ball_lambda);

// lambda - lambda(ball of equal volume), relative to the latter, which is
// obtained from lambda(B_1) by scaling with the lattice volume of B_1;
// `value` holds it.
BoundCheck verify_faber_krahn(const GridDomain &domain, const EigenResult &result, double p, double ball_lambda);

// lambda rho^2 - pi^2/4, relative to pi^2/4; `value` holds lambda rho^2.
// Throws "hypothesis violated" unless N = 2, p = 2 and the boundary is connected.
BoundCheck verify_planar_simply_connected(const GridDomain &domain, const EigenResult &result, double p);

// Generates the domain, solves, and fills every applicable check.
BoundReport evaluate_domain(const DomainSpec &spec, double p, double h, const SolverConfig &config = {});

struct SweepTask
{
  DomainSpec spec;
  double p = 2.0;
  double h = 0.0;
};

// Runs the tasks on `workers` threads; results keep the task order. A task
// that throws yields a report with converged = false and the message in notes.
std::vector<BoundReport> run_sweep(const std::vector<SweepTask> &tasks, int workers = 1,
                                   const SolverConfig &config = {});

enum class ConstantMode
{
  FreeBoundary,      // p > N, any bounded domain
  ConnectedBoundary  // p > N - 1, connected boundary
};

struct ConstantEstimate
{
  double minimum = 0.0;
  std::string argmin;
  std::vector<BoundReport> table;     // included members
  std::vector<std::string> excluded;  // label: reason
};

// Minimum of lambda rho^p over the family. Members violating the hypothesis of
// the mode are excluded with a note; throws "hypothesis violated" when p is out
// of range for the mode and when no member remains.
ConstantEstimate estimate_constant(const std::vector<DomainSpec> &family, double p, double h, ConstantMode mode,
                                   int workers = 1, const SolverConfig &config = {});

struct HaymanLevel
{
  double h = 0.0;
  double base_lambda = 0.0;
  double featured_lambda = 0.0;
  double gap = 0.0;  // featured - base
  double featured_rho = 0.0;
  double product = 0.0;  // featured lambda * rho^p
  bool converged = false;
};

struct HaymanReport
{
  std::string base_label;
  std::string featured_label;
  double p = 2.0;
  std::vector<HaymanLevel> levels;
  TrendReport gap_trend;
};

// Removes features of width 2h from a ball at each refinement: the cells
// nearest to `punctures`, or `spike_count` radial slits of depth
// `spike_length`. Exactly one of the two must be given. Throws for fewer than
// three levels.
struct HaymanFeatures
{
  std::vector<Point> punctures;
  int spike_count = 0;
  double spike_length = 0.0;
};

HaymanReport hayman_experiment(int dim, double radius, const HaymanFeatures &features, double p,
                               std::vector<double> refinements, const SolverConfig &config = {});

// (int_{B_R(a)} |u|^p) / (R^p int_{B_R(a)} |grad u|^p) with u extended by zero,
// summing over the cells whose center lies in the ball. Returns 0 when u
// vanishes on the ball; throws "degenerate ball" when only the gradient does.
double boundary_ball_poincare(const ScalarField &u, const Point &a, double radius, double p);

struct PoincareCapacityReport
{
  double mass = 0.0;      // int_{B_r} |u|^p
  double energy = 0.0;    // int_{B_r} |grad u|^p
  double capacity = 0.0;  // Cap(F, B_2r), F the complement of the domain in closed B_r
  double constant = 0.0;  // mass * capacity / (r^N energy)
};

// Empirical constant of the capacity Poincare inequality on B_r(x). Throws
// "capacity degenerate" when Cap(F, B_2r) is negligible.
PoincareCapacityReport poincare_capacity_check(const ScalarField &u, const Ball &ball, double p,
                                               const SolverConfig &config = {});

struct CoveringChainReport
{
  double ratio = 0.0;           // int |u|^p / (rho^p int |grad u|^p) over the domain
  double max_ball_ratio = 0.0;  // over the covering balls
  int subset_count = 0;
  double bound = 0.0;  // max_ball_ratio * subset_count * (1 + sqrt N)^p
  bool holds = false;  // ratio <= bound
};

// Combines the boundary-ball ratios on the covering of `u`'s domain into a
// global bound and compares it with the global ratio.
CoveringChainReport covering_chain_check(const ScalarField &u, double p);

}  // namespace plap

#endif  // PLAP_BOUNDS_HPP
