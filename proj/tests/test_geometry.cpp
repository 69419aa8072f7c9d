// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "plap/error.hpp"
#include "plap/geometry.hpp"

using namespace plap;

TEST_CASE("distance transform matches exhaustive search on random masks")
{
  std::mt19937_64 rng(7);
  for (int dim : {1, 2, 3})
  {
    for (int trial = 0; trial < 5; trial++)
    {
      Grid g;
      g.dim = dim;
      g.size = {dim >= 1 ? 13 : 1, dim >= 2 ? 11 : 1, dim >= 3 ? 9 : 1};
      std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.cell_count()));
      std::bernoulli_distribution in(0.85);
      for (auto &m : mask)
      {
        m = in(rng) ? 1 : 0;
      }
      mask[0] = 0;
      const auto dm = distance_transform(g, mask);
      const auto ref = oracle::brute_force_sqdist(g, mask);
      for (Index c = 0; c < g.cell_count(); c++)
      {
        CHECK(dm.sqdist[c] == doctest::Approx(ref[c]));
        if (mask[c])
        {
          const auto a = g.coords(c), b = g.coords(dm.nearest[c]);
          double s = 0.0;
          for (int k = 0; k < 3; k++)
          {
            s += static_cast<double>((a[k] - b[k]) * (a[k] - b[k]));
          }
          CHECK(s == doctest::Approx(ref[c]));
          CHECK_FALSE(mask[dm.nearest[c]]);
        }
      }
    }
  }
}

TEST_CASE("inradius of rectangles and balls is within h sqrt(N)")
{
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64})
  {
    const auto rect = generate_domain(rectangle_spec(2, 2.0, 1.0), h);
    const auto r = inradius_detail(rect);
    CHECK(std::abs(r.radius - 0.5) <= h * std::sqrt(2.0));
    CHECK(r.error_bound == doctest::Approx(h * std::sqrt(2.0)));
    const auto ball = generate_domain(ball_spec(3, 1.0), 2 * h);
    CHECK(std::abs(inradius(ball) - 1.0) <= 2 * h * std::sqrt(3.0));
  }
}

TEST_CASE("inradius scales with the lattice")
{
  const auto d = generate_domain(annulus_spec(2, 0.5, 1.0), 1.0 / 32);
  CHECK(inradius(d.scaled(3.0)) == doctest::Approx(3.0 * inradius(d)));
}

TEST_CASE("boundary components count holes")
{
  const double h = 1.0 / 32;
  CHECK(boundary_components(generate_domain(ball_spec(2, 1.0), h)) == 1);
  CHECK(boundary_components(generate_domain(annulus_spec(2, 0.5, 1.0), h)) == 2);
  CHECK(boundary_components(generate_domain(spiked_ball_spec(2, 1.0, 8, 0.125, 0.6), h)) == 1);
  for (const auto &s : adversarial_family(2))
  {
    if (s.name == "punctured-4")
    {
      CHECK(boundary_components(generate_domain(s, h)) == 5);
    }
  }
  CHECK(boundary_components(generate_domain(annulus_spec(3, 0.5, 1.0), 1.0 / 8)) == 2);
}

TEST_CASE("generated domains reject under-resolved features")
{
  CHECK_THROWS_WITH_AS(generate_domain(spiked_ball_spec(2, 1.0, 8, 0.01, 0.5), 1.0 / 32),
                       doctest::Contains("under-resolved"), Error);
  CHECK_THROWS_WITH_AS(generate_domain(annulus_spec(2, 0.98, 1.0), 1.0 / 32), doctest::Contains("under-resolved"),
                       Error);
  CHECK_THROWS_AS(parse_domain_spec("ball:", 2), Error);
  CHECK_THROWS_AS(parse_domain_spec("teapot:1", 2), Error);
}

TEST_CASE("domain specs round-trip through text")
{
  for (const auto &s : adversarial_family(2))
  {
    const auto t = to_string(s);
    const auto back = parse_domain_spec(t, 2);
    CHECK(to_string(back) == t);
    const auto a = generate_domain(s, 1.0 / 16);
    const auto b = generate_domain(back, 1.0 / 16);
    CHECK(std::equal(a.mask().begin(), a.mask().end(), b.mask().begin(), b.mask().end()));
  }
  CHECK(parse_real("1/128") == 1.0 / 128);
  CHECK(parse_real("0.25") == 0.25);
  CHECK_THROWS_AS(parse_real("1/0"), Error);
}

TEST_CASE("every adversarial domain is face connected and has volume close to the continuum")
{
  const double h = 1.0 / 32;
  const auto fam = adversarial_family(2);
  CHECK(fam.size() == 10);
  for (const auto &s : fam)
  {
    const auto d = generate_domain(s, h);
    CHECK(count_components(d.grid(), d.mask()) == 1);
  }
  const auto disc = generate_domain(ball_spec(2, 1.0), 1.0 / 128);
  CHECK(disc.volume() == doctest::Approx(std::numbers::pi).epsilon(0.01));
}

TEST_CASE("embedding into a common frame preserves inclusion")
{
  const double h = 1.0 / 16;
  const auto small = generate_domain(ball_spec(2, 0.5), h);
  const auto big = generate_domain(ball_spec(2, 1.0), h);
  const Grid frame = common_frame(small, big);
  const auto es = embed(small, frame), eb = embed(big, frame);
  CHECK(is_subset(es, eb));
  CHECK_FALSE(is_subset(eb, es));
  CHECK(es.interior_count() == small.interior_count());
}

TEST_CASE("covering by boundary balls covers every cell within the subset budget")
{
  CHECK(covering_subset_budget(2) == static_cast<int>(std::ceil(std::pow(2 * std::sqrt(2.0) + 4, 2))));
  CHECK(covering_subset_budget(3) == static_cast<int>(std::ceil(std::pow(2 * std::sqrt(3.0) + 4, 3))));
  for (const auto &s : adversarial_family(2))
  {
    const auto d = generate_domain(s, 1.0 / 32);
    const Covering c = hayman_cover(d);
    const CoveringCheck chk = check_covering(d, c);
    CHECK_MESSAGE(chk.ok(), s.label());
    CHECK(c.radius == doctest::Approx(inradius(d) * (1 + std::sqrt(2.0))));
  }
}

TEST_CASE("the discrete boundary lies outside and touches the domain")
{
  const auto d = generate_domain(rectangle_spec(2, 1.0, 1.0), 1.0 / 8);
  const auto b = discrete_boundary(d);
  // Perimeter of an n x n block of cells has 4n face neighbors.
  const Index n = static_cast<Index>(std::round(std::sqrt(static_cast<double>(d.interior_count()))));
  CHECK(static_cast<Index>(b.size()) == 4 * n);
  for (Index c : b)
  {
    CHECK_FALSE(d.contains(c));
  }
}
