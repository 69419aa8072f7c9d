// SPDX-License-Identifier: Apache-2.0

#include "plap/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "line_search.hpp"
#include "plap/error.hpp"
#include "plap/geometry.hpp"
#include "plap/variational.hpp"

namespace plap
{

void SolverConfig::validate() const
{
  if (max_iterations < 1 || preconditioner_refresh < 1)
  {
    throw Error("iteration counts must be positive");
  }
  if (!(gradient_tol > 0.0) || !(stagnation_tol > 0.0))
  {
    throw Error("tolerances must be positive");
  }
  if (!(eps >= 0.0) || !(hessian_floor >= 0.0))
  {
    throw Error("regularization must be nonnegative");
  }
  if (!(backtrack > 0.0 && backtrack < 1.0))
  {
    throw Error("backtracking factor must lie in (0, 1)");
  }
  if (!(initial_step > 0.0) || !(armijo > 0.0 && armijo < 1.0))
  {
    throw Error("invalid line-search parameters");
  }
}

namespace
{

constexpr int kStagnationWindow = 10;

struct Stage
{
  double lambda = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

void normalize(const Stencil &st, Vector &x, double p)
{
  x = x.cwiseAbs();
  x /= std::pow(p_mass(st, x, p), 1.0 / p);
}

// Quotient gradient with respect to the unknowns; returns the quotient.
double quotient_gradient(const Stencil &st, const Vector &x, double p, double eps, Vector &g)
{
  Vector gm;
  const double e = p_energy_gradient(st, x, p, eps, g);
  p_mass_gradient(st, x, p, gm);
  const double m = p_mass(st, x, p);
  const double r = e / m;
  g = (g - r * gm) / m;
  return r;
}

// L2 norm of the quotient gradient divided by the quotient.
double relative_gradient_norm(const Stencil &st, const Vector &g, double r)
{
  return std::sqrt(g.squaredNorm() / st.cell_volume()) / r;
}

bool stagnated(const std::vector<double> &history, double tol)
{
  if (history.size() <= static_cast<std::size_t>(kStagnationWindow))
  {
    return false;
  }
  const double now = history.back();
  const double then = history[history.size() - 1 - kStagnationWindow];
  return std::abs(then - now) <= tol * std::abs(now);
}

class Workspace
{
public:
  Workspace(const GridDomain &domain, const SolverConfig &cfg)
    : st(domain_stencil(domain)), hess(st), lin(make_spd_solver(st, cfg.backend))
  {
  }

  Stencil st;
  HessianAssembler hess;
  std::unique_ptr<SpdSolver> lin;
};

// Preconditioned descent on the quotient. The search direction is the
// quotient gradient preconditioned by the energy Hessian; the first trial step
// (p-1) reproduces one step of nonlinear inverse iteration.
Stage descent(Workspace &ws, double p, Vector &x, const SolverConfig &cfg, double eps)
{
  const Stencil &st = ws.st;
  Stage s;
  normalize(st, x, p);
  // Directions tolerate inexact solves; the line search absorbs the error.
  ws.lin->set_tolerance(1e-7);
  Vector g, d, y, z, z_prev, g_prev;
  double r = quotient_gradient(st, x, p, eps, g);
  s.history.push_back(r);
  for (int it = 0; it < cfg.max_iterations; it++)
  {
    s.gradient_norm = relative_gradient_norm(st, g, r);
    if (s.gradient_norm < cfg.gradient_tol && stagnated(s.history, cfg.stagnation_tol))
    {
      s.converged = true;
      break;
    }
    // For p < 2 the Hessian weight only needs the energy's own regularization.
    const double delta = p < 2.0 ? eps : cfg.hessian_floor * rms_gradient(st, x);
    if (it % cfg.preconditioner_refresh == 0)
    {
      ws.lin->factor(ws.hess.assemble(x, p, delta));
    }
    z.setZero(g.size());
    ws.lin->solve(g, z);
    // Polak-Ribiere+ momentum on the preconditioned gradient.
    double beta = 0.0;
    if (cfg.momentum && it > 0)
    {
      beta = std::max(0.0, g.dot(z - z_prev) / g_prev.dot(z_prev));
    }
    d = (it > 0 && beta > 0.0) ? Vector(-z + beta * d) : Vector(-z);
    if (!(g.dot(d) < 0.0))
    {
      d = -z;
    }
    z_prev = z;
    g_prev = g;
    Vector gy;
    auto eval = [&](double step, double &value, double &slope) {
      y = x + step * d;
      if (p_mass(st, y, p) == 0.0)
      {
        value = std::numeric_limits<double>::infinity();
        slope = 1.0;
        return;
      }
      value = quotient_gradient(st, y, p, eps, gy);
      slope = gy.dot(d);
    };
    const detail::LineSearchParams prm{(p - 1.0) * cfg.initial_step, cfg.backtrack, cfg.armijo};
    const double t = detail::line_search(eval, r, g.dot(d), prm);
    y = x + t * d;
    s.iterations = it + 1;
    if (t == 0.0)
    {
      // Roundoff floor reached; keep the current iterate.
      break;
    }
    x = y;
    normalize(st, x, p);
    r = quotient_gradient(st, x, p, eps, g);
    s.history.push_back(r);
  }
  s.gradient_norm = relative_gradient_norm(st, g, r);
  if (!s.converged)
  {
    s.converged = s.gradient_norm < cfg.gradient_tol && stagnated(s.history, cfg.stagnation_tol);
  }
  s.lambda = p_energy(st, x, p, 0.0) / p_mass(st, x, p);
  return s;
}

// Inverse power iteration for p = 2 with a single factorization.
Stage inverse_power(Workspace &ws, Vector &x, const SolverConfig &cfg)
{
  const Stencil &st = ws.st;
  Stage s;
  normalize(st, x, 2.0);
  ws.lin->set_tolerance(1e-11);
  ws.lin->factor(ws.hess.assemble(x, 2.0, 0.0));
  Vector g, y;
  double r = quotient_gradient(st, x, 2.0, 0.0, g);
  s.history.push_back(r);
  for (int it = 0; it < cfg.max_iterations; it++)
  {
    s.gradient_norm = relative_gradient_norm(st, g, r);
    if (s.gradient_norm < cfg.gradient_tol && stagnated(s.history, cfg.stagnation_tol))
    {
      s.converged = true;
      break;
    }
    y = x;
    ws.lin->solve(x, y);
    x = y;
    normalize(st, x, 2.0);
    r = quotient_gradient(st, x, 2.0, 0.0, g);
    s.history.push_back(r);
    s.iterations = it + 1;
  }
  s.gradient_norm = relative_gradient_norm(st, g, r);
  if (!s.converged)
  {
    s.converged = s.gradient_norm < cfg.gradient_tol && stagnated(s.history, cfg.stagnation_tol);
  }
  s.lambda = r;
  return s;
}

void check_exponent(double p)
{
  if (!(p >= kMinExponent && p <= kMaxExponent))
  {
    throw Error("exponent p must lie in [1.1, 16]");
  }
}

void check_size(const GridDomain &domain)
{
  const Coord ext = domain.occupied_extent();
  for (int d = 0; d < domain.dim(); d++)
  {
    if (ext[d] < 3)
    {
      throw Error("domain too small: fewer than 3 cells along an axis");
    }
  }
}

Vector initial_guess(const Workspace &ws, const GridDomain &domain, const SolverConfig &cfg)
{
  const Stencil &st = ws.st;
  Vector x(st.unknowns());
  if (cfg.random_init)
  {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Index i = 0; i < x.size(); i++)
    {
      x[i] = unif(rng);
    }
    return x;
  }
  const DistanceMap dm = distance_transform(domain.grid(), domain.mask());
  for (Index i = 0; i < x.size(); i++)
  {
    x[i] = std::sqrt(dm.sqdist[st.unknown_cells()[i]]);
  }
  return x;
}

EigenResult run(std::shared_ptr<const GridDomain> domain, double p, const SolverConfig &cfg, const Vector *start)
{
  check_exponent(p);
  cfg.validate();
  check_size(*domain);
  Workspace ws(*domain, cfg);
  Vector x = start ? *start : initial_guess(ws, *domain, cfg);
  if (x.cwiseAbs().maxCoeff() == 0.0)
  {
    throw Error("initial field is zero");
  }

  EigenMethod method = cfg.method;
  if (method == EigenMethod::Auto)
  {
    method = p == 2.0 ? EigenMethod::InversePower : EigenMethod::Descent;
  }
  if (method == EigenMethod::InversePower && p != 2.0)
  {
    throw Error("inverse power iteration requires p = 2");
  }

  Stage s;
  int warm_iterations = 0;
  std::string name;
  if (method == EigenMethod::InversePower)
  {
    s = inverse_power(ws, x, cfg);
    name = "inverse-power";
  }
  else
  {
    name = "descent";
    if (cfg.continuation && !start && std::abs(p - 2.0) > 0.75)
    {
      // Warm start at p = 2, then intermediate exponents spaced evenly in
      // log(p - 1), each solved loosely.
      SolverConfig warm = cfg;
      warm.gradient_tol = std::max(cfg.gradient_tol, 1e-4);
      warm.stagnation_tol = std::max(cfg.stagnation_tol, 1e-6);
      warm_iterations = inverse_power(ws, x, warm).iterations;
      const double span = std::log(p - 1.0);
      const int stages = static_cast<int>(std::ceil(std::abs(span) / 0.7));
      for (int k = 1; k < stages; k++)
      {
        const double q = 1.0 + std::exp(span * k / stages);
        normalize(ws.st, x, q);
        warm_iterations += descent(ws, q, x, warm, cfg.eps * rms_gradient(ws.st, x)).iterations;
      }
      name = "descent+continuation";
    }
    normalize(ws.st, x, p);
    const double eps = cfg.eps * rms_gradient(ws.st, x);
    s = descent(ws, p, x, cfg, eps);
  }
  return EigenResult{s.lambda,
                     ScalarField(domain, ws.st.expand(x)),
                     s.iterations + warm_iterations,
                     s.gradient_norm,
                     s.converged,
                     name,
                     std::move(s.history)};
}

}  // namespace

EigenResult solve_principal(std::shared_ptr<const GridDomain> domain, double p, const SolverConfig &config)
{
  return run(std::move(domain), p, config, nullptr);
}

EigenResult solve_principal(const GridDomain &domain, double p, const SolverConfig &config)
{
  return solve_principal(std::make_shared<const GridDomain>(domain), p, config);
}

EigenResult solve_principal_from(const ScalarField &start, double p, const SolverConfig &config)
{
  const Stencil st = domain_stencil(start.domain());
  const Vector x = st.compress(start.values());
  return run(start.domain_ptr(), p, config, &x);
}

//
// One-dimensional shooting oracle.
//

namespace
{

inline double phi(double v, double p)
{
  return v > 0.0 ? std::pow(v, 1.0 / (p - 1.0)) : 0.0;
}

// Distance from the zero of u to its maximum for the solution with u(0) = 0,
// |u'|^{p-2}u'(0) = 1. First segment: x as the variable on a mesh graded
// toward 0, up to a point where v >= 1/2. Second segment: w with v = w^k as the
// variable down to v = 0, which removes the singularity of u' there.
double quarter_length(double p, double lambda, int n)
{
  const double x_end = std::pow(p / (2.0 * lambda), 1.0 / p);
  double x = 0.0, u = 0.0, v = 1.0;
  auto f1 = [&](double uu, double vv, double &du, double &dv) {
    du = phi(vv, p);
    dv = -lambda * std::pow(std::max(uu, 0.0), p - 1.0);
  };
  for (int i = 0; i < n; i++)
  {
    const double s0 = static_cast<double>(i) / n;
    const double s1 = static_cast<double>(i + 1) / n;
    const double dx = x_end * (s1 * s1 * s1 - s0 * s0 * s0);
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    f1(u, v, k1u, k1v);
    f1(u + 0.5 * dx * k1u, v + 0.5 * dx * k1v, k2u, k2v);
    f1(u + 0.5 * dx * k2u, v + 0.5 * dx * k2v, k3u, k3v);
    f1(u + dx * k3u, v + dx * k3v, k4u, k4v);
    u += dx / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += dx / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    x += dx;
  }
  if (!(v > 0.0) || !(u > 0.0))
  {
    throw Error("shooting left the admissible range");
  }
  const double k = std::max(1.0, p - 1.0);
  // d/dw of (x, u) with v = w^k.
  auto f2 = [&](double w, double uu, double &dx, double &du) {
    const double jac = k * std::pow(w, k - 1.0);
    const double denom = lambda * std::pow(uu, p - 1.0);
    dx = -jac / denom;
    du = -jac * phi(std::pow(w, k), p) / denom;
  };
  const double w0 = std::pow(v, 1.0 / k);
  const double dw = -w0 / n;
  double w = w0;
  for (int i = 0; i < n; i++)
  {
    double k1x, k1u, k2x, k2u, k3x, k3u, k4x, k4u;
    f2(w, u, k1x, k1u);
    f2(w + 0.5 * dw, u + 0.5 * dw * k1u, k2x, k2u);
    f2(w + 0.5 * dw, u + 0.5 * dw * k2u, k3x, k3u);
    f2(w + dw, u + dw * k3u, k4x, k4u);
    x += dw / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    u += dw / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    w += dw;
  }
  return x;
}

}  // namespace

double solve_1d(double p, double length, int resolution)
{
  if (!(p > 1.0) || !std::isfinite(p))
  {
    throw Error("exponent p must exceed 1");
  }
  if (!(length > 0.0))
  {
    throw Error("interval length must be positive");
  }
  if (resolution < 16)
  {
    throw Error("resolution too small");
  }
  // The first eigenfunction is symmetric: its maximum sits at L/2.
  const double target = 0.5 * length;
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (quarter_length(p, lo, resolution) < target)
  {
    lo *= 0.5;
    if (++guard > 400)
    {
      throw Error("bisection bracket failure");
    }
  }
  while (quarter_length(p, hi, resolution) > target)
  {
    hi *= 2.0;
    if (++guard > 400)
    {
      throw Error("bisection bracket failure");
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; i++)
  {
    const double mid = 0.5 * (lo + hi);
    if (quarter_length(p, mid, resolution) > target)
    {
      lo = mid;
    }
    else
    {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double pi_p(double p)
{
  return 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
}

double eigenvalue_1d_closed_form(double p, double length)
{
  return (p - 1.0) * std::pow(pi_p(p) / length, p);
}

bool positivity_check(const ScalarField &u)
{
  if (u.is_zero())
  {
    throw Error("zero field has no sign");
  }
  // Normalize the sign by the entry of largest magnitude.
  const double lo = u.min_value();
  const double hi = u.max_value();
  const double sign = hi >= -lo ? 1.0 : -1.0;
  const double scale = std::max(hi, -lo);
  const double worst = sign > 0.0 ? lo : -hi;
  return worst / scale >= -1e-10;
}

bool positivity_check(const EigenResult &result)
{
  return positivity_check(result.eigenfunction);
}

}  // namespace plap
