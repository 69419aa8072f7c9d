// SPDX-License-Identifier: Apache-2.0

#include "plap/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

#include "plap/error.hpp"
#include "plap/variational.hpp"

namespace plap
{

namespace
{

using BallKey = std::tuple<int, double, double>;
using BallFuture = std::shared_future<std::shared_ptr<const EigenResult>>;

std::shared_ptr<const EigenResult> unit_ball_result(int dim, double p, double h, const SolverConfig &cfg)
{
  static std::mutex mutex;
  static std::map<BallKey, BallFuture> cache;
  const BallKey key{dim, p, h};
  std::promise<std::shared_ptr<const EigenResult>> promise;
  BallFuture pending;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (const auto it = cache.find(key); it != cache.end())
    {
      pending = it->second;
    }
    else
    {
      cache.emplace(key, promise.get_future().share());
    }
  }
  if (pending.valid())
  {
    return pending.get();
  }
  try
  {
    auto domain = std::make_shared<const GridDomain>(generate_domain(ball_spec(dim, 1.0), h));
    auto result = std::make_shared<const EigenResult>(solve_principal(domain, p, cfg));
    promise.set_value(result);
    return result;
  }
  catch (...)
  {
    promise.set_exception(std::current_exception());
    std::lock_guard<std::mutex> lock(mutex);
    cache.erase(key);
    throw;
  }
}

void require_converged(const EigenResult &result)
{
  if (!result.converged)
  {
    throw Error("eigenvalue estimate did not converge");
  }
}

BoundCheck make_check(double margin, double value)
{
  BoundCheck c;
  c.applicable = true;
  c.margin = margin;
  c.value = value;
  c.pass = margin >= -kBoundTolerance;
  return c;
}

bool is_unit_ball(const DomainSpec &spec)
{
  return spec.kind == DomainKind::Ball && spec.a == 1.0;
}

// Integrals of |u|^p and |grad u|^p over the cells whose center lies in the
// open ball.
std::pair<double, double> ball_integrals(const ScalarField &u, const VectorField &grad, const Point &center,
                                         double radius, double p)
{
  const Grid &g = u.grid();
  const double v = g.cell_volume();
  Coord lo{0, 0, 0}, hi{0, 0, 0};
  for (int d = 0; d < g.dim; d++)
  {
    lo[d] = std::max<Index>(0, static_cast<Index>(std::floor((center[d] - radius - g.origin[d]) / g.h)));
    hi[d] = std::min<Index>(g.size[d] - 1, static_cast<Index>(std::ceil((center[d] + radius - g.origin[d]) / g.h)));
  }
  double mass = 0.0, energy = 0.0;
  for (Index k = lo[2]; k <= hi[2]; k++)
  {
    for (Index j = lo[1]; j <= hi[1]; j++)
    {
      for (Index i = lo[0]; i <= hi[0]; i++)
      {
        const Index cell = g.index({i, j, k});
        if (distance(g.center(cell), center, g.dim) < radius)
        {
          mass += std::pow(std::abs(u[cell]), p) * v;
          energy += std::pow(grad.norm(cell), p) * v;
        }
      }
    }
  }
  return {mass, energy};
}

}  // namespace

bool BoundReport::signs_ok() const
{
  for (const BoundCheck *c : {&upper, &faber_krahn, &planar})
  {
    if (c->applicable && !c->pass)
    {
      return false;
    }
  }
  return true;
}

double unit_ball_eigenvalue(int dim, double p, double h, const SolverConfig &config)
{
  auto r = unit_ball_result(dim, p, h, config);
  require_converged(*r);
  return r->lambda;
}

BoundCheck verify_upper_bound(const GridDomain &domain, const EigenResult &result, double p, double ball_lambda)
{
  require_converged(result);
  const double bound = ball_lambda * std::pow(inradius(domain), -p);
  return make_check((bound - result.lambda) / bound, bound);
}

BoundCheck verify_faber_krahn(const GridDomain &domain, const EigenResult &result, double p, double ball_lambda)
{
  require_converged(result);
  // The reference ball is rasterized on the same lattice, so the ball itself
  // sits at margin zero.
  const int n = domain.dim();
  const double ball_volume = generate_domain(ball_spec(n, 1.0), domain.grid().h).volume();
  const double star = ball_lambda * std::pow(ball_volume / domain.volume(), p / n);
  return make_check((result.lambda - star) / star, star);
}

BoundCheck verify_planar_simply_connected(const GridDomain &domain, const EigenResult &result, double p)
{
  if (domain.dim() != 2 || std::abs(p - 2.0) > 1e-12 || boundary_components(domain) != 1)
  {
    throw Error("hypothesis violated: needs a simply connected planar domain and p = 2");
  }
  require_converged(result);
  const double floor = std::numbers::pi * std::numbers::pi / 4.0;
  const double rho = inradius(domain);
  const double product = result.lambda * rho * rho;
  return make_check((product - floor) / floor, product);
}

BoundReport evaluate_domain(const DomainSpec &spec, double p, double h, const SolverConfig &config)
{
  BoundReport rep;
  rep.label = spec.label();
  rep.dim = spec.dim;
  rep.p = p;
  rep.h = h;
  auto domain = std::make_shared<const GridDomain>(generate_domain(spec, h));
  std::shared_ptr<const EigenResult> result;
  if (is_unit_ball(spec))
  {
    result = unit_ball_result(spec.dim, p, h, config);
  }
  else
  {
    result = std::make_shared<const EigenResult>(solve_principal(domain, p, config));
  }
  rep.rho = inradius(*domain);
  rep.lambda = result->lambda;
  rep.product = rep.lambda * std::pow(rep.rho, p);
  rep.converged = result->converged;
  rep.iterations = result->iterations;
  rep.gradient_norm = result->gradient_norm;
  rep.boundary_components = boundary_components(*domain);
  if (!rep.converged)
  {
    rep.notes.push_back("eigenvalue estimate did not converge; checks skipped");
    return rep;
  }
  const double ball = unit_ball_eigenvalue(spec.dim, p, h, config);
  rep.upper = verify_upper_bound(*domain, *result, p, ball);
  rep.faber_krahn = verify_faber_krahn(*domain, *result, p, ball);
  if (rep.dim == 2 && std::abs(p - 2.0) <= 1e-12 && rep.boundary_components == 1)
  {
    rep.planar = verify_planar_simply_connected(*domain, *result, p);
  }
  if (p > rep.dim)
  {
    rep.free_boundary_product = rep.product;
  }
  if (p > rep.dim - 1 && rep.boundary_components == 1)
  {
    rep.connected_boundary_product = rep.product;
  }
  return rep;
}

std::vector<BoundReport> run_sweep(const std::vector<SweepTask> &tasks, int workers, const SolverConfig &config)
{
  std::vector<BoundReport> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
    {
      const SweepTask &t = tasks[i];
      try
      {
        out[i] = evaluate_domain(t.spec, t.p, t.h, config);
      }
      catch (const std::exception &e)
      {
        BoundReport r;
        r.label = t.spec.label();
        r.dim = t.spec.dim;
        r.p = t.p;
        r.h = t.h;
        r.notes.push_back(e.what());
        out[i] = std::move(r);
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < std::min(n, tasks.size()); k++)
  {
    pool.emplace_back(work);
  }
  work();
  for (auto &t : pool)
  {
    t.join();
  }
  return out;
}

ConstantEstimate estimate_constant(const std::vector<DomainSpec> &family, double p, double h, ConstantMode mode,
                                   int workers, const SolverConfig &config)
{
  if (family.empty())
  {
    throw Error("empty family");
  }
  const int dim = family.front().dim;
  const bool free = mode == ConstantMode::FreeBoundary;
  if (free ? !(p > dim) : !(p > dim - 1))
  {
    throw Error(free ? "hypothesis violated: needs p > N" : "hypothesis violated: needs p > N - 1");
  }
  std::vector<SweepTask> tasks;
  for (const DomainSpec &s : family)
  {
    tasks.push_back({s, p, h});
  }
  ConstantEstimate est;
  est.minimum = std::numeric_limits<double>::infinity();
  for (BoundReport &r : run_sweep(tasks, workers, config))
  {
    if (!r.converged)
    {
      est.excluded.push_back(r.label + ": " + (r.notes.empty() ? "not converged" : r.notes.front()));
      continue;
    }
    if (!free && r.boundary_components != 1)
    {
      est.excluded.push_back(r.label + ": boundary has " + std::to_string(r.boundary_components) + " components");
      continue;
    }
    if (r.product < est.minimum)
    {
      est.minimum = r.product;
      est.argmin = r.label;
    }
    est.table.push_back(std::move(r));
  }
  if (est.table.empty())
  {
    throw Error("hypothesis violated: no family member qualifies");
  }
  return est;
}

HaymanReport hayman_experiment(int dim, double radius, const HaymanFeatures &features, double p,
                               std::vector<double> refinements, const SolverConfig &config)
{
  if (refinements.size() < 3)
  {
    throw Error("trend undecidable: need at least three refinement levels");
  }
  const bool spikes = features.spike_count > 0;
  if (spikes == !features.punctures.empty())
  {
    throw Error("give either punctures or spikes");
  }
  std::sort(refinements.begin(), refinements.end(), std::greater<>());
  HaymanReport rep;
  rep.p = p;
  rep.base_label = ball_spec(dim, radius).label();
  std::vector<double> gaps;
  for (double h : refinements)
  {
    const DomainSpec spec = spikes ? spiked_ball_spec(dim, radius, features.spike_count, 2.0 * h, features.spike_length)
                                   : punctured_ball_spec(dim, radius, features.punctures);
    auto domain = std::make_shared<const GridDomain>(generate_domain(spec, h));
    const EigenResult r = solve_principal(domain, p, config);
    HaymanLevel lv;
    lv.h = h;
    // Discrete scaling is exact: B_R at h is B_1 at h / R stretched by R.
    lv.base_lambda = unit_ball_eigenvalue(dim, p, h / radius, config) * std::pow(radius, -p);
    lv.featured_lambda = r.lambda;
    lv.gap = lv.featured_lambda - lv.base_lambda;
    lv.featured_rho = inradius(*domain);
    lv.product = r.lambda * std::pow(lv.featured_rho, p);
    lv.converged = r.converged;
    rep.featured_label = spikes ? "spiked-ball(" + std::to_string(features.spike_count) + " slits of width 2h)"
                                : spec.label();
    rep.levels.push_back(lv);
    gaps.push_back(lv.gap);
  }
  rep.gap_trend = classify_trend(refinements, gaps);
  return rep;
}

double boundary_ball_poincare(const ScalarField &u, const Point &a, double radius, double p)
{
  validate_exponent(p);
  if (!(radius > 0.0))
  {
    throw Error("ball radius must be positive");
  }
  const auto [mass, energy] = ball_integrals(u, gradient_field(u), a, radius, p);
  if (mass == 0.0)
  {
    return 0.0;
  }
  if (energy == 0.0)
  {
    throw Error("degenerate ball: gradient vanishes on the ball");
  }
  return mass / (std::pow(radius, p) * energy);
}

PoincareCapacityReport poincare_capacity_check(const ScalarField &u, const Ball &ball, double p,
                                               const SolverConfig &config)
{
  validate_exponent(p);
  validate(ball);
  const GridDomain &domain = u.domain();
  const Grid &g = domain.grid();
  const int dim = g.dim;
  PoincareCapacityReport rep;
  std::tie(rep.mass, rep.energy) = ball_integrals(u, gradient_field(u), ball.center, ball.radius, p);

  CondenserProblem prob;
  prob.outer = {ball.center, 2.0 * ball.radius};
  prob.grid = condenser_grid(dim, g.h, prob.outer);
  prob.p = p;
  prob.descriptor = "domain complement in the closed ball";
  prob.inner.assign(static_cast<std::size_t>(prob.grid.cell_count()), 0);
  for (Index cell = 0; cell < prob.grid.cell_count(); cell++)
  {
    const Point y = prob.grid.center(cell);
    if (distance(y, ball.center, dim) > ball.radius * (1.0 + 1e-12))
    {
      continue;
    }
    const Index k = nearest_cell(g, y);
    const bool inside = k >= 0 && distance(g.center(k), y, dim) < 1e-6 * g.h && domain.contains(k);
    prob.inner[cell] = inside ? 0 : 1;
  }
  rep.capacity = prob.inner_empty() ? 0.0 : capacity(prob, config).value;
  const double scale = radial_capacity(ball.radius, 2.0 * ball.radius, p, dim);
  if (!(rep.capacity > 1e-9 * scale))
  {
    throw Error("capacity degenerate: the complement barely meets the ball");
  }
  if (rep.energy == 0.0)
  {
    throw Error("degenerate ball: gradient vanishes on the ball");
  }
  rep.constant = rep.mass * rep.capacity / (std::pow(ball.radius, dim) * rep.energy);
  return rep;
}

CoveringChainReport covering_chain_check(const ScalarField &u, double p)
{
  validate_exponent(p);
  const GridDomain &domain = u.domain();
  const int dim = domain.dim();
  const Covering cover = hayman_cover(domain);
  const VectorField grad = gradient_field(u);
  const Grid &g = u.grid();
  const double v = g.cell_volume();
  double mass = 0.0, energy = 0.0;
  for (Index cell = 0; cell < g.cell_count(); cell++)
  {
    mass += std::pow(std::abs(u[cell]), p) * v;
    energy += std::pow(grad.norm(cell), p) * v;
  }
  CoveringChainReport rep;
  const double rho = inradius(domain);
  rep.ratio = mass / (std::pow(rho, p) * energy);
  for (const Ball &b : cover.balls)
  {
    const auto [m, e] = ball_integrals(u, grad, b.center, b.radius, p);
    if (m > 0.0)
    {
      rep.max_ball_ratio = std::max(rep.max_ball_ratio, m / (std::pow(b.radius, p) * e));
    }
  }
  rep.subset_count = cover.subset_count;
  rep.bound = rep.max_ball_ratio * rep.subset_count * std::pow(1.0 + std::sqrt(static_cast<double>(dim)), p);
  rep.holds = rep.ratio <= rep.bound * (1.0 + 1e-12);
  return rep;
}

}  // namespace plap
