// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_LINEAR_SOLVER_HPP
#define PLAP_LINEAR_SOLVER_HPP

#include <memory>
#include <string>

#include "plap/stencil.hpp"

namespace plap
{

enum class LinearBackend
{
  Auto,
  Direct,
  Multigrid
};

// Solver for the SPD systems produced by HessianAssembler. The sparsity pattern
// is fixed at construction; factor() may be called repeatedly with new values.
class SpdSolver
{
public:
  virtual ~SpdSolver() = default;
  virtual void factor(const SparseMatrix &a) = 0;
  // On entry x holds an initial guess (used by iterative backends).
  virtual void solve(const Vector &b, Vector &x) = 0;
  virtual std::string name() const = 0;
  // Iterations of the last solve (1 for direct).
  virtual int last_iterations() const = 0;
  // Relative residual target of iterative backends; ignored by direct ones.
  virtual void set_tolerance(double rel_tol) = 0;
};

// Auto picks Direct for N <= 2 or small systems, Multigrid otherwise.
// `rel_tol` applies to the iterative backend only.
std::unique_ptr<SpdSolver> make_spd_solver(const Stencil &st, LinearBackend backend, double rel_tol = 1e-10);

LinearBackend parse_backend(const std::string &name);

}  // namespace plap

#endif  // PLAP_LINEAR_SOLVER_HPP
