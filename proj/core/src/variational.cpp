// SPDX-License-Identifier: Apache-2.0

#include "plap/variational.hpp"

#include <cmath>

#include "plap/error.hpp"

namespace plap
{

void validate_exponent(double p)
{
  if (!(p > 1.0) || !std::isfinite(p))
  {
    throw Error("exponent p must satisfy 1 < p < infinity");
  }
}

Stencil domain_stencil(const GridDomain &domain)
{
  return Stencil(domain.grid(), domain.mask());
}

VectorField gradient_field(const ScalarField &u)
{
  const Grid &g = u.grid();
  VectorField out{g, std::vector<std::array<double, 3>>(static_cast<std::size_t>(g.cell_count()), {0.0, 0.0, 0.0})};
  const auto vals = u.values();
  for (Index cell = 0; cell < g.cell_count(); cell++)
  {
    const Coord c = g.coords(cell);
    for (int d = 0; d < g.dim; d++)
    {
      if (c[d] + 1 < g.size[d])
      {
        out.values[cell][d] = (vals[cell + g.stride(d)] - vals[cell]) / g.h;
      }
    }
  }
  return out;
}

RayleighEval rayleigh_quotient(const ScalarField &u, double p, double eps)
{
  validate_exponent(p);
  if (u.is_zero())
  {
    throw Error("undefined quotient: zero field");
  }
  const Stencil st = domain_stencil(u.domain());
  const Vector x = st.compress(u.values());
  RayleighEval r;
  r.energy = p_energy(st, x, p, eps);
  r.mass = p_mass(st, x, p);
  r.quotient = r.energy / r.mass;
  return r;
}

ScalarField rayleigh_gradient(const ScalarField &u, double p, double eps)
{
  validate_exponent(p);
  if (u.is_zero())
  {
    throw Error("undefined quotient: zero field");
  }
  const Stencil st = domain_stencil(u.domain());
  const Vector x = st.compress(u.values());
  Vector ge, gm;
  const double energy = p_energy_gradient(st, x, p, eps, ge);
  p_mass_gradient(st, x, p, gm);
  const double mass = p_mass(st, x, p);
  const Vector g = (ge - (energy / mass) * gm) / (mass * st.cell_volume());
  return ScalarField(u.domain_ptr(), st.expand(g));
}

double weak_residual(const ScalarField &u, double lambda, double p, const ScalarField &v)
{
  validate_exponent(p);
  if (!(u.grid() == v.grid()))
  {
    throw Error("test field lives on a different lattice");
  }
  for (Index cell = 0; cell < v.grid().cell_count(); cell++)
  {
    if (v[cell] != 0.0 && !u.domain().contains(cell))
    {
      throw Error("test field must be supported inside the domain");
    }
  }
  const Stencil st = domain_stencil(u.domain());
  const Vector x = st.compress(u.values());
  const Vector y = st.compress(v.values());
  // The energy gradient at eps = 0 is p times the flux pairing with grad v.
  Vector ge, gm;
  p_energy_gradient(st, x, p, 0.0, ge);
  p_mass_gradient(st, x, p, gm);
  return (ge.dot(y) - lambda * gm.dot(y)) / p;
}

double l2_norm(const ScalarField &v)
{
  double s = 0.0;
  for (double x : v.values())
  {
    s += x * x;
  }
  return std::sqrt(s * v.grid().cell_volume());
}

}  // namespace plap
