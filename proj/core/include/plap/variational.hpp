// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_VARIATIONAL_HPP
#define PLAP_VARIATIONAL_HPP

#include "plap/field.hpp"
#include "plap/stencil.hpp"

namespace plap
{

struct RayleighEval
{
  double energy = 0.0;  // h^N sum |grad u|^p
  double mass = 0.0;    // h^N sum |u|^p
  double quotient = 0.0;
};

// Throws unless 1 < p < infinity.
void validate_exponent(double p);

// Stencil whose unknowns are the domain cells.
Stencil domain_stencil(const GridDomain &domain);

VectorField gradient_field(const ScalarField &u);

// With eps > 0, |grad u|^2 is replaced by |grad u|^2 + eps^2 and eps^p is
// subtracted per cell so that the energy of a constant stays zero.
// Throws "undefined quotient" for the zero field.
RayleighEval rayleigh_quotient(const ScalarField &u, double p, double eps = 0.0);

// L2 gradient G of the (regularized) quotient: for every v,
//   d/dt R(u + t v) at t = 0  equals  h^N sum_cells G v.
// For p = 2 and eps = 0 this is 2(-Lap u - R u)/mass with the 5-point Laplacian.
ScalarField rayleigh_gradient(const ScalarField &u, double p, double eps);

// h^N sum |grad u|^{p-2} grad u . grad v  -  lambda h^N sum |u|^{p-2} u v,
// taking |g|^{p-2} g = 0 where g = 0.
double weak_residual(const ScalarField &u, double lambda, double p, const ScalarField &v);

// (h^N sum v^2)^{1/2}
double l2_norm(const ScalarField &v);

}  // namespace plap

#endif  // PLAP_VARIATIONAL_HPP
