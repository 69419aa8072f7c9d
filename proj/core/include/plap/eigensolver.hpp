// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_EIGENSOLVER_HPP
#define PLAP_EIGENSOLVER_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "plap/field.hpp"
#include "plap/linear_solver.hpp"

namespace plap
{

enum class EigenMethod
{
  Auto,          // inverse power for p = 2, descent otherwise
  Descent,
  InversePower  // p = 2 only
};

struct SolverConfig
{
  int max_iterations = 2000;
  // Stop when the L2 norm of the quotient gradient, relative to the quotient,
  // is below gradient_tol and the quotient moved by less than
  // stagnation_tol (relative) over the last 10 iterations.
  double gradient_tol = 1e-9;
  double stagnation_tol = 1e-10;
  // Regularization of |grad u|^{p-2}, relative to the rms gradient of the start.
  double eps = 1e-8;
  // Backtracking line search.
  double backtrack = 0.5;
  double initial_step = 1.0;
  double armijo = 1e-4;
  // Floor on |grad u| in the preconditioning Hessian, relative to the rms gradient.
  double hessian_floor = 1e-2;
  // Reassemble and refactor the preconditioner every this many iterations.
  int preconditioner_refresh = 5;
  std::uint64_t seed = 1;
  bool random_init = false;
  bool continuation = true;
  // Nonlinear conjugate-gradient momentum in the descent method.
  bool momentum = true;
  EigenMethod method = EigenMethod::Auto;
  LinearBackend backend = LinearBackend::Auto;

  void validate() const;
};

struct EigenResult
{
  double lambda = 0.0;
  ScalarField eigenfunction;  // nonnegative, unit discrete p-mass
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::string method;
  std::vector<double> history;  // quotient after each accepted step
};

inline constexpr double kMinExponent = 1.1;
inline constexpr double kMaxExponent = 16.0;

// Estimates the principal eigenvalue of the p-Laplacian on `domain` with
// Dirichlet conditions (values vanish outside the mask).
// Throws for p outside [1.1, 16] or fewer than 3 cells along some axis.
EigenResult solve_principal(std::shared_ptr<const GridDomain> domain, double p, const SolverConfig &config = {});
EigenResult solve_principal(const GridDomain &domain, double p, const SolverConfig &config = {});

// Warm-started solve; `start` must live on the same domain.
EigenResult solve_principal_from(const ScalarField &start, double p, const SolverConfig &config = {});

// First eigenvalue of (|u'|^{p-2}u')' + lambda |u|^{p-2}u = 0 on (0, L) with
// u(0) = u(L) = 0, by shooting and bisection on lambda. `resolution` is the
// number of integration steps per shot segment.
double solve_1d(double p, double length, int resolution = 20000);

// 2 pi / (p sin(pi / p)); the 1D eigenvalue is (p-1) (pi_p / L)^p.
double pi_p(double p);
double eigenvalue_1d_closed_form(double p, double length);

// True iff the eigenfunction is nonnegative up to 1e-10 after sign normalization.
bool positivity_check(const EigenResult &result);
bool positivity_check(const ScalarField &u);

}  // namespace plap

#endif  // PLAP_EIGENSOLVER_HPP
