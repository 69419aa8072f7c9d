// SPDX-License-Identifier: Apache-2.0

#include "plap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "line_search.hpp"
#include "plap/error.hpp"
#include "plap/linear_solver.hpp"
#include "plap/stencil.hpp"

namespace plap
{

namespace
{

std::vector<std::uint8_t> open_ball_mask(const Grid &grid, const Ball &ball)
{
  std::vector<std::uint8_t> m(static_cast<std::size_t>(grid.cell_count()), 0);
  const double limit = ball.radius - 1e-9 * grid.h;
  for (Index cell = 0; cell < grid.cell_count(); cell++)
  {
    m[cell] = distance(grid.center(cell), ball.center, grid.dim) < limit ? 1 : 0;
  }
  return m;
}

void require_nonempty(const std::vector<std::uint8_t> &m, const char *what)
{
  if (std::none_of(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; }))
  {
    throw Error(std::string("under-resolved ") + what + ": no lattice cell hit");
  }
}

void check_exponent(double p)
{
  if (!(p >= kMinExponent && p <= kMaxExponent))
  {
    throw Error("exponent p must lie in [1.1, 16]");
  }
}

}  // namespace

void CondenserProblem::validate() const
{
  validate_grid_ball(grid, outer);
  check_exponent(p);
  if (static_cast<Index>(inner.size()) != grid.cell_count())
  {
    throw Error("inner set size does not match grid");
  }
  const auto ball = open_ball_mask(grid, outer);
  for (Index cell = 0; cell < grid.cell_count(); cell++)
  {
    if (!inner[cell])
    {
      continue;
    }
    const Coord c = grid.coords(cell);
    for (int d = 0; d < grid.dim; d++)
    {
      const Index s = grid.stride(d);
      if (!ball[cell] || c[d] == 0 || c[d] + 1 == grid.size[d] || !ball[cell - s] || !ball[cell + s])
      {
        throw Error("inner set must lie strictly inside the outer ball");
      }
    }
  }
}

bool CondenserProblem::inner_empty() const
{
  return std::none_of(inner.begin(), inner.end(), [](std::uint8_t v) { return v != 0; });
}

void validate_grid_ball(const Grid &grid, const Ball &ball)
{
  validate(ball);
  for (int d = 0; d < grid.dim; d++)
  {
    const double lo = grid.origin[d] + grid.h;
    const double hi = grid.origin[d] + static_cast<double>(grid.size[d] - 2) * grid.h;
    if (ball.center[d] - ball.radius < lo - 1e-9 * grid.h || ball.center[d] + ball.radius > hi + 1e-9 * grid.h)
    {
      throw Error("outer ball does not fit inside the lattice");
    }
  }
}

Grid condenser_grid(int dim, double h, const Ball &outer)
{
  validate(outer);
  Point half = {0.0, 0.0, 0.0};
  for (int d = 0; d < dim; d++)
  {
    half[d] = std::abs(outer.center[d]) + outer.radius;
  }
  return Grid::centered(dim, h, half, 2);
}

std::vector<std::uint8_t> closed_ball_set(const Grid &grid, const Ball &ball)
{
  validate(ball);
  std::vector<std::uint8_t> m(static_cast<std::size_t>(grid.cell_count()), 0);
  // Cells whose center lies within h/2 of the ball, as for segments.
  const double limit = ball.radius + 0.5 * grid.h * (1.0 + 1e-9);
  for (Index cell = 0; cell < grid.cell_count(); cell++)
  {
    m[cell] = distance(grid.center(cell), ball.center, grid.dim) <= limit ? 1 : 0;
  }
  require_nonempty(m, "ball");
  return m;
}

std::vector<std::uint8_t> segment_set(const Grid &grid, const Point &a, const Point &b)
{
  std::vector<std::uint8_t> m(static_cast<std::size_t>(grid.cell_count()), 0);
  double ab2 = 0.0;
  for (int d = 0; d < grid.dim; d++)
  {
    ab2 += (b[d] - a[d]) * (b[d] - a[d]);
  }
  // Cells whose center lies within h/2 of the segment.
  const double limit = 0.5 * grid.h * (1.0 + 1e-9);
  for (Index cell = 0; cell < grid.cell_count(); cell++)
  {
    const Point x = grid.center(cell);
    double t = 0.0;
    for (int d = 0; d < grid.dim; d++)
    {
      t += (x[d] - a[d]) * (b[d] - a[d]);
    }
    t = ab2 > 0.0 ? std::clamp(t / ab2, 0.0, 1.0) : 0.0;
    double s = 0.0;
    for (int d = 0; d < grid.dim; d++)
    {
      const double q = a[d] + t * (b[d] - a[d]) - x[d];
      s += q * q;
    }
    m[cell] = std::sqrt(s) <= limit ? 1 : 0;
  }
  require_nonempty(m, "segment");
  return m;
}

std::vector<std::uint8_t> point_set(const Grid &grid, const Point &x)
{
  std::vector<std::uint8_t> m(static_cast<std::size_t>(grid.cell_count()), 0);
  const Index cell = nearest_cell(grid, x);
  if (cell < 0)
  {
    throw Error("under-resolved point: outside the lattice");
  }
  m[cell] = 1;
  return m;
}

std::vector<std::uint8_t> complement_in_ball(const GridDomain &domain, const Ball &ball)
{
  const Grid &grid = domain.grid();
  std::vector<std::uint8_t> m(static_cast<std::size_t>(grid.cell_count()), 0);
  const double limit = ball.radius + 1e-9 * grid.h;
  for (Index cell = 0; cell < grid.cell_count(); cell++)
  {
    m[cell] = !domain.contains(cell) && distance(grid.center(cell), ball.center, grid.dim) <= limit ? 1 : 0;
  }
  return m;
}

CapacityResult capacity(const CondenserProblem &problem, const SolverConfig &cfg)
{
  problem.validate();
  cfg.validate();
  const Grid &grid = problem.grid;
  const double p = problem.p;
  auto ball = open_ball_mask(grid, problem.outer);
  auto domain = std::make_shared<const GridDomain>(grid, ball, "condenser");
  if (problem.inner_empty())
  {
    return CapacityResult{0.0, ScalarField::zeros(domain), true, 0};
  }

  std::vector<std::uint8_t> free = ball;
  for (Index cell = 0; cell < grid.cell_count(); cell++)
  {
    if (problem.inner[cell])
    {
      free[cell] = 0;
    }
  }
  const Stencil st(grid, free, problem.inner);
  HessianAssembler hess(st);
  auto lin = make_spd_solver(st, cfg.backend, 1e-11);

  // The p = 2 problem is quadratic: one Newton step from zero solves it.
  Vector x = Vector::Zero(st.unknowns());
  Vector g, d;
  p_energy_gradient(st, x, 2.0, 0.0, g);
  lin->factor(hess.assemble(x, 2.0, 0.0));
  d.setZero(st.unknowns());
  lin->solve(-g, d);
  x = d.cwiseMax(0.0).cwiseMin(1.0);

  int iterations = 1;
  bool converged = true;
  if (p != 2.0)
  {
    // Damped Newton on the convex energy. Truncation to [0, 1] never raises
    // the energy, so it is applied after every step.
    lin->set_tolerance(1e-8);
    const double scale = rms_gradient(st, x);
    const double eps = cfg.eps * scale;
    converged = false;
    double e = p_energy_gradient(st, x, p, eps, g);
    std::vector<double> history{e};
    Vector y, gy;
    for (int it = 0; it < cfg.max_iterations; it++)
    {
      const double delta = p < 2.0 ? eps : cfg.hessian_floor * rms_gradient(st, x);
      lin->factor(hess.assemble(x, p, delta));
      d.setZero(st.unknowns());
      lin->solve(-g, d);
      double slope = g.dot(d);
      if (!(slope < 0.0))
      {
        d = -g;
        slope = g.dot(d);
      }
      // Newton decrement relative to the energy.
      if (-slope <= cfg.gradient_tol * e)
      {
        converged = true;
        break;
      }
      auto eval = [&](double t, double &value, double &dslope) {
        y = x + t * d;
        value = p_energy_gradient(st, y, p, eps, gy);
        dslope = gy.dot(d);
      };
      const detail::LineSearchParams prm{cfg.initial_step, cfg.backtrack, cfg.armijo};
      const double t = detail::line_search(eval, e, slope, prm);
      iterations++;
      if (t == 0.0)
      {
        converged = -slope <= std::sqrt(cfg.gradient_tol) * e;
        break;
      }
      x = (x + t * d).cwiseMax(0.0).cwiseMin(1.0);
      e = p_energy_gradient(st, x, p, eps, g);
      history.push_back(e);
    }
  }
  const double value = p_energy(st, x, p, 0.0);
  return CapacityResult{value, ScalarField(domain, st.expand(x)), converged, iterations};
}

double unit_sphere_area(int dim)
{
  switch (dim)
  {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * std::numbers::pi;
    case 3:
      return 4.0 * std::numbers::pi;
    default:
      return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
  }
}

double radial_capacity(double a, double b, double p, int dim)
{
  if (!(a > 0.0) || !(b > a))
  {
    throw Error("radial capacity needs 0 < a < b");
  }
  if (!(p > 1.0) || dim < 1)
  {
    throw Error("radial capacity needs p > 1 and N >= 1");
  }
  const double area = unit_sphere_area(dim);
  if (p == static_cast<double>(dim))
  {
    return area * std::pow(std::log(b / a), 1.0 - p);
  }
  // phi(r) solves (r^{N-1} |phi'|^{p-2} phi')' = 0: phi' ~ r^{(1-N)/(p-1)}.
  const double gamma = (p - dim) / (p - 1.0);
  return area * std::pow(std::abs(gamma), p - 1.0) * std::pow(std::abs(std::pow(b, gamma) - std::pow(a, gamma)), 1.0 - p);
}

namespace
{

// Cap(set, B_2) at the origin with `n` cells per unit length.
double unit_condenser(int dim, double p, int n, bool segment, const SolverConfig &cfg)
{
  const double h = 1.0 / n;
  const Ball outer{{0.0, 0.0, 0.0}, 2.0};
  CondenserProblem prob;
  prob.grid = condenser_grid(dim, h, outer);
  prob.outer = outer;
  prob.p = p;
  prob.inner = segment ? segment_set(prob.grid, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0})
                       : closed_ball_set(prob.grid, {{0.0, 0.0, 0.0}, 1.0});
  return capacity(prob, cfg).value;
}

}  // namespace

double reference_constant(int dim, double p, int cells_per_radius, const SolverConfig &cfg)
{
  static std::mutex mutex;
  static std::map<std::tuple<int, double, int>, double> cache;
  const auto key = std::make_tuple(dim, p, cells_per_radius);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (const auto it = cache.find(key); it != cache.end())
    {
      return it->second;
    }
  }
  const double c = unit_condenser(dim, p, cells_per_radius, true, cfg) /
                   unit_condenser(dim, p, cells_per_radius, false, cfg);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, c);
  return c;
}

ButrReport butr_ratio_check(double segment_length, double r, double p, int dim, int cells_per_radius,
                            double tolerance, const SolverConfig &cfg)
{
  if (dim < 2 || dim > 3)
  {
    throw Error("dimension must be 2 or 3");
  }
  if (!(p > dim - 1.0))
  {
    throw Error("lemma hypothesis violated: p must exceed N - 1");
  }
  if (!(r > 0.0) || !(r < 0.5 * segment_length))
  {
    throw Error("lemma hypothesis violated: r must be below half the diameter of K");
  }
  if (cells_per_radius < 4)
  {
    throw Error("resolution too coarse");
  }
  ButrReport rep;
  rep.dim = dim;
  rep.p = p;
  rep.r = r;
  rep.h = r / cells_per_radius;
  const Ball outer{{0.0, 0.0, 0.0}, 2.0 * r};
  CondenserProblem prob;
  prob.grid = condenser_grid(dim, rep.h, outer);
  prob.outer = outer;
  prob.p = p;
  // K is the segment of the given length with x = 0 at its midpoint; its part
  // inside the closed ball B_r is the diameter segment.
  const double reach = std::min(0.5 * segment_length, r);
  prob.inner = segment_set(prob.grid, {-reach, 0.0, 0.0}, {reach, 0.0, 0.0});
  rep.segment_capacity = capacity(prob, cfg).value;
  prob.inner = closed_ball_set(prob.grid, {{0.0, 0.0, 0.0}, r});
  rep.ball_capacity = capacity(prob, cfg).value;
  rep.reference_constant = reference_constant(dim, p, cells_per_radius, cfg);
  rep.margin = rep.segment_capacity / (rep.reference_constant * rep.ball_capacity) - 1.0;
  rep.holds = rep.margin >= -tolerance;
  return rep;
}

const char *to_string(Trend trend)
{
  switch (trend)
  {
    case Trend::Positive:
      return "positive";
    case Trend::Decaying:
      return "decaying";
    case Trend::Undecided:
      return "undecided";
  }
  return "?";
}

TrendReport classify_trend(std::vector<double> h, std::vector<double> value, double min_rate)
{
  if (h.size() != value.size() || h.size() < 3)
  {
    throw Error("trend undecidable: fewer than 3 refinement levels");
  }
  for (std::size_t i = 0; i < h.size(); i++)
  {
    if (!(h[i] > 0.0) || (i > 0 && !(h[i] < h[i - 1])))
    {
      throw Error("refinements must be positive and decreasing");
    }
  }
  TrendReport rep;
  rep.h = std::move(h);
  rep.value = std::move(value);
  // With t = log(1/h) and w = 1/value: a positive limit v makes w converge to
  // 1/v, so the increments of w shrink geometrically in t; decay to zero makes
  // w grow without bound (increments constant for logarithmic decay, growing
  // for power-law decay).
  for (std::size_t k = 0; k + 2 < rep.h.size(); k++)
  {
    double t[3], w[3];
    bool positive_values = true;
    for (int i = 0; i < 3; i++)
    {
      t[i] = std::log(1.0 / rep.h[k + i]);
      positive_values = positive_values && rep.value[k + i] > 0.0;
      w[i] = positive_values ? 1.0 / rep.value[k + i] : 0.0;
    }
    Trend tr = Trend::Undecided;
    double rate = std::numeric_limits<double>::quiet_NaN();
    double limit = 0.0;
    if (!positive_values)
    {
      tr = Trend::Decaying;
    }
    else
    {
      const double s1 = (w[1] - w[0]) / (t[1] - t[0]);
      const double s2 = (w[2] - w[1]) / (t[2] - t[1]);
      const double gap = 0.5 * (t[2] - t[0]);
      if (s2 <= 0.0)
      {
        // 1/value no longer grows: the value is flat or increasing.
        tr = Trend::Positive;
        rate = std::numeric_limits<double>::infinity();
        limit = rep.value[k + 2];
      }
      else if (s1 <= 0.0)
      {
        tr = Trend::Undecided;
      }
      else
      {
        rate = std::log(s1 / s2) / gap;
        if (rate >= min_rate)
        {
          tr = Trend::Positive;
          limit = 1.0 / (w[2] + s2 / rate);
        }
        else
        {
          tr = Trend::Decaying;
        }
      }
    }
    rep.triple_trend.push_back(tr);
    rep.triple_rate.push_back(rate);
    rep.triple_limit.push_back(limit);
  }
  rep.trend = rep.triple_trend.back();
  rep.stable = rep.trend != Trend::Undecided &&
               std::all_of(rep.triple_trend.begin(), rep.triple_trend.end(), [&](Trend t) { return t == rep.trend; });
  return rep;
}

TrendReport point_capacity_probe(double p, int dim, const std::vector<double> &refinements, ProbeSet set,
                                 const SolverConfig &cfg)
{
  if (dim < 2 || dim > 3)
  {
    throw Error("dimension must be 2 or 3");
  }
  std::vector<double> hs = refinements;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  std::vector<double> values;
  const Ball outer{{0.0, 0.0, 0.0}, 1.0};
  for (double h : hs)
  {
    CondenserProblem prob;
    prob.grid = condenser_grid(dim, h, outer);
    prob.outer = outer;
    prob.p = p;
    prob.inner = set == ProbeSet::Point ? point_set(prob.grid, {0.0, 0.0, 0.0})
                                        : segment_set(prob.grid, {-0.5, 0.0, 0.0}, {0.5, 0.0, 0.0});
    values.push_back(capacity(prob, cfg).value);
  }
  return classify_trend(hs, values);
}

}  // namespace plap
