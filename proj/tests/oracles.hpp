// SPDX-License-Identifier: Apache-2.0

// Reference values computed independently of the library code paths.

#ifndef PLAP_TESTS_ORACLES_HPP
#define PLAP_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "plap/grid_domain.hpp"

namespace oracle
{

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)> &f, double a, double b, int n = 20000)
{
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; i++)
  {
    s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

// pi_p = 2 int_0^1 (1 - t^p)^(-1/p) dt. The substitution t = 1 - s^q with
// q = 2p/(p-1) removes the endpoint singularity.
inline double pi_p_quadrature(double p)
{
  const double q = 2.0 * p / (p - 1.0);
  auto f = [&](double s) {
    if (s == 0.0)
    {
      return 0.0;
    }
    const double x = std::pow(s, q);
    const double one_minus_tp = -std::expm1(p * std::log1p(-x));
    return std::pow(one_minus_tp, -1.0 / p) * q * std::pow(s, q - 1.0);
  };
  return 2.0 * simpson(f, 0.0, 1.0, 200000);
}

// First positive zero of J0 from the Bessel ODE y'' + y'/r + y = 0 with
// y(0) = 1, y'(0) = 0: series start, RK4, linear interpolation of the sign
// change.
inline double bessel_j0_first_zero()
{
  struct State
  {
    double y, dy;
  };
  auto f = [](double r, State s) { return State{s.dy, -s.dy / r - s.y}; };
  auto axpy = [](State s, double t, State k) { return State{s.y + t * k.y, s.dy + t * k.dy}; };
  const double step = 1e-5;
  double r = 1e-4;
  State s{1.0 - r * r / 4.0, -r / 2.0};
  while (true)
  {
    const State k1 = f(r, s);
    const State k2 = f(r + step / 2, axpy(s, step / 2, k1));
    const State k3 = f(r + step / 2, axpy(s, step / 2, k2));
    const State k4 = f(r + step, axpy(s, step, k3));
    const State n{s.y + step / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
                  s.dy + step / 6 * (k1.dy + 2 * k2.dy + 2 * k3.dy + k4.dy)};
    if (n.y <= 0.0)
    {
      return r + step * s.y / (s.y - n.y);
    }
    r += step;
    s = n;
  }
}

// Cap_p(closed B_a, B_b) in R^N = |S^{N-1}| (int_a^b r^{-(N-1)/(p-1)} dr)^{1-p}.
inline double radial_capacity_quadrature(double a, double b, double p, int dim)
{
  const double area = dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
  const double e = (dim - 1.0) / (p - 1.0);
  const double integral = simpson([&](double r) { return std::pow(r, -e); }, a, b, 200000);
  return area * std::pow(integral, 1.0 - p);
}

// Squared distance (in cells) from each cell center to the nearest outside
// cell center by exhaustive search; zero outside.
inline std::vector<double> brute_force_sqdist(const plap::Grid &g, std::span<const std::uint8_t> mask)
{
  std::vector<plap::Index> outside;
  for (plap::Index c = 0; c < g.cell_count(); c++)
  {
    if (!mask[c])
    {
      outside.push_back(c);
    }
  }
  std::vector<double> d(static_cast<std::size_t>(g.cell_count()), 0.0);
  for (plap::Index c = 0; c < g.cell_count(); c++)
  {
    if (!mask[c])
    {
      continue;
    }
    const auto a = g.coords(c);
    double best = std::numeric_limits<double>::infinity();
    for (plap::Index o : outside)
    {
      const auto b = g.coords(o);
      double s = 0.0;
      for (int k = 0; k < 3; k++)
      {
        s += static_cast<double>((a[k] - b[k]) * (a[k] - b[k]));
      }
      best = std::min(best, s);
    }
    d[c] = best;
  }
  return d;
}

}  // namespace oracle

#endif  // PLAP_TESTS_ORACLES_HPP
