// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_LINE_SEARCH_HPP
#define PLAP_LINE_SEARCH_HPP

#include <algorithm>
#include <cmath>

namespace plap::detail
{

struct LineSearchParams
{
  double initial_step = 1.0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  // Relative slack on the objective, absorbing summation roundoff.
  double slack = 1e-12;
};

// Step along a descent direction for phi(t) = f(x + t d). `eval(t, value,
// derivative)` fills both. Looks for |phi'(t)| <= 0.1 |phi'(0)| without
// raising phi beyond roundoff (bracketing, then safeguarded secant on phi'),
// and falls back to Armijo backtracking. Derivatives stay informative near
// convergence, where differences of phi drown in roundoff. Returns 0 if no
// step is acceptable.
template <class Eval>
double line_search(Eval &&eval, double f0, double slope0, const LineSearchParams &prm)
{
  const double slack = prm.slack * std::abs(f0);
  auto ok = [&](double f) { return f <= f0 + slack; };

  double a = 0.0, da = slope0;
  double b = prm.initial_step, fb = 0.0, db = 0.0;
  eval(b, fb, db);
  for (int k = 0; k < 8 && db < 0.0 && ok(fb); k++)
  {
    a = b;
    da = db;
    b *= 2.0;
    eval(b, fb, db);
  }
  if (db < 0.0 && ok(fb))
  {
    return b;
  }
  double best = a;
  for (int k = 0; k < 12; k++)
  {
    if (std::abs(db) <= 0.1 * std::abs(slope0) && ok(fb))
    {
      return b;
    }
    double c = 0.5 * (a + b);
    if (db > 0.0 && da < 0.0)
    {
      c = a - da * (b - a) / (db - da);
      c = std::clamp(c, a + 0.1 * (b - a), b - 0.1 * (b - a));
    }
    double fc = 0.0, dc = 0.0;
    eval(c, fc, dc);
    if (dc < 0.0 && ok(fc))
    {
      a = c;
      da = dc;
      best = a;
    }
    else
    {
      b = c;
      fb = fc;
      db = dc;
    }
  }
  if (best > 0.0)
  {
    return best;
  }
  double t = prm.initial_step;
  for (int k = 0; k < 60; k++)
  {
    double f = 0.0, df = 0.0;
    eval(t, f, df);
    if (f <= f0 + prm.armijo * t * slope0 + slack)
    {
      return t;
    }
    t *= prm.backtrack;
  }
  return 0.0;
}

}  // namespace plap::detail

#endif  // PLAP_LINE_SEARCH_HPP
