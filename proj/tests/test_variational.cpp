// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "plap/error.hpp"
#include "plap/geometry.hpp"
#include "plap/variational.hpp"

using namespace plap;

namespace
{

std::shared_ptr<const GridDomain> small_disc()
{
  return std::make_shared<const GridDomain>(generate_domain(ball_spec(2, 1.0), 1.0 / 6));
}

ScalarField random_field(const std::shared_ptr<const GridDomain> &d, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.2, 1.5);
  std::vector<double> v(static_cast<std::size_t>(d->interior_count()));
  for (auto &x : v)
  {
    x = u(rng);
  }
  return ScalarField::from_interior(d, v);
}

ScalarField bumped(const ScalarField &u, std::size_t k, double delta)
{
  auto v = u.interior();
  v[k] += delta;
  return ScalarField::from_interior(u.domain_ptr(), v);
}

}  // namespace

TEST_CASE("analytic quotient gradient agrees with central differences")
{
  std::mt19937_64 rng(11);
  const auto d = small_disc();
  const double cell = d->grid().cell_volume();
  for (double p : {1.2, 1.5, 2.0, 3.0, 5.0})
  {
    for (int trial = 0; trial < 10; trial++)
    {
      const ScalarField u = random_field(d, rng);
      const auto g = rayleigh_gradient(u, p, 0.0).interior();
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < g.size(); k++)
      {
        const double delta = 1e-6;
        const double fd = (rayleigh_quotient(bumped(u, k, delta), p).quotient -
                           rayleigh_quotient(bumped(u, k, -delta), p).quotient) /
                          (2 * delta * cell);
        num += (fd - g[k]) * (fd - g[k]);
        den += g[k] * g[k];
      }
      CHECK(std::sqrt(num / den) < 1e-5);
    }
  }
}

TEST_CASE("regularized gradient is consistent with the regularized quotient")
{
  std::mt19937_64 rng(3);
  const auto d = small_disc();
  const ScalarField u = random_field(d, rng);
  const double eps = 0.3;
  const auto g = rayleigh_gradient(u, 1.5, eps).interior();
  const double delta = 1e-6;
  const double fd = (rayleigh_quotient(bumped(u, 5, delta), 1.5, eps).quotient -
                     rayleigh_quotient(bumped(u, 5, -delta), 1.5, eps).quotient) /
                    (2 * delta * d->grid().cell_volume());
  CHECK(fd == doctest::Approx(g[5]).epsilon(1e-6));
}

TEST_CASE("p = 2 gradient is the shifted five-point Laplacian")
{
  std::mt19937_64 rng(5);
  const auto d = small_disc();
  const ScalarField u = random_field(d, rng);
  const auto q = rayleigh_quotient(u, 2.0);
  const auto g = rayleigh_gradient(u, 2.0, 0.0);
  const Grid &grid = d->grid();
  const double h = grid.h;
  for (Index c : d->cells())
  {
    double lap = -4.0 * u[c];
    for (int ax = 0; ax < 2; ax++)
    {
      lap += u[c + grid.stride(ax)] + u[c - grid.stride(ax)];
    }
    lap /= h * h;
    CHECK(g[c] == doctest::Approx(2.0 * (-lap - q.quotient * u[c]) / q.mass).epsilon(1e-10));
  }
}

TEST_CASE("quotient is homogeneous of degree zero")
{
  std::mt19937_64 rng(1);
  const auto d = small_disc();
  const ScalarField u = random_field(d, rng);
  for (double p : {1.3, 2.0, 4.5})
  {
    const double r = rayleigh_quotient(u, p).quotient;
    for (double c : {1e-3, 0.7, 42.0, -3.0})
    {
      CHECK(rayleigh_quotient(u.scaled(c), p).quotient == doctest::Approx(r).epsilon(1e-12));
    }
  }
}

TEST_CASE("quotient scales as t^-p under stretching of the lattice")
{
  std::mt19937_64 rng(2);
  const auto d = small_disc();
  const ScalarField u = random_field(d, rng);
  for (double t : {0.5, 2.0})
  {
    auto dt = std::make_shared<const GridDomain>(d->scaled(t));
    const ScalarField ut(dt, std::vector<double>(u.values().begin(), u.values().end()));
    for (double p : {1.5, 3.0})
    {
      CHECK(rayleigh_quotient(ut, p).quotient ==
            doctest::Approx(std::pow(t, -p) * rayleigh_quotient(u, p).quotient).epsilon(1e-12));
    }
  }
}

TEST_CASE("energy is midpoint convex for p >= 2")
{
  std::mt19937_64 rng(9);
  const auto d = small_disc();
  for (double p : {2.0, 3.0, 6.0})
  {
    for (int trial = 0; trial < 20; trial++)
    {
      const ScalarField a = random_field(d, rng), b = random_field(d, rng);
      auto va = a.interior(), vb = b.interior();
      for (std::size_t k = 0; k < va.size(); k++)
      {
        va[k] = 0.5 * (va[k] + vb[k]);
      }
      const ScalarField m = ScalarField::from_interior(d, va);
      CHECK(rayleigh_quotient(m, p).energy <=
            0.5 * (rayleigh_quotient(a, p).energy + rayleigh_quotient(b, p).energy) * (1 + 1e-12));
    }
  }
}

TEST_CASE("degenerate inputs")
{
  const auto d = small_disc();
  const ScalarField zero = ScalarField::zeros(d);
  CHECK_THROWS_WITH_AS(rayleigh_quotient(zero, 2.0), doctest::Contains("undefined quotient"), Error);
  std::mt19937_64 rng(4);
  const ScalarField v = random_field(d, rng);
  CHECK(weak_residual(zero, 3.0, 2.5, v) == 0.0);
  CHECK_THROWS_AS(validate_exponent(1.0), Error);
  CHECK_THROWS_AS(validate_exponent(std::numeric_limits<double>::infinity()), Error);
  std::vector<double> bad(static_cast<std::size_t>(d->grid().cell_count()), 0.0);
  bad[0] = 1.0;  // lattice corner, outside the disc
  CHECK_THROWS_AS(ScalarField(d, bad), Error);
}

TEST_CASE("weak residual of the interval sine mode vanishes under refinement")
{
  // u = cos(pi x) on (-1/2, 1/2) with lambda = pi^2 and a smooth test field.
  double previous = std::numeric_limits<double>::infinity();
  for (double h : {1.0 / 32, 1.0 / 128, 1.0 / 512})
  {
    auto d = std::make_shared<const GridDomain>(generate_domain(interval_spec(1.0), h));
    const auto u = ScalarField::from_function(d, [](const Point &x) { return std::cos(std::numbers::pi * x[0]); });
    const auto v = ScalarField::from_function(
        d, [](const Point &x) { return (0.25 - x[0] * x[0]) * std::exp(x[0]); });
    const double r = std::abs(weak_residual(u, std::numbers::pi * std::numbers::pi, 2.0, v)) / l2_norm(v);
    CHECK(r < previous);
    previous = r;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("gradient field uses forward differences with zero extension")
{
  auto d = std::make_shared<const GridDomain>(generate_domain(rectangle_spec(2, 1.0, 1.0), 0.25));
  const auto u = ScalarField::from_function(d, [](const Point &x) { return 1.0 + x[0]; });
  const auto g = gradient_field(u);
  const Grid &grid = d->grid();
  for (Index c : d->cells())
  {
    const Index right = c + grid.stride(0);
    const double expected = d->contains(right) ? 1.0 : -(1.0 + grid.center(c)[0]) / grid.h;
    CHECK(g.values[c][0] == doctest::Approx(expected));
  }
}
