// SPDX-License-Identifier: Apache-2.0

#include "plap/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "plap/error.hpp"

namespace plap
{

namespace
{

const char *kind_name(DomainKind kind)
{
  switch (kind)
  {
    case DomainKind::Interval:
      return "interval";
    case DomainKind::Rectangle:
      return "rectangle";
    case DomainKind::Ball:
      return "ball";
    case DomainKind::Annulus:
      return "annulus";
    case DomainKind::PuncturedBall:
      return "punctured-ball";
    case DomainKind::SpikedBall:
      return "spiked-ball";
    case DomainKind::Dumbbell:
      return "dumbbell";
  }
  return "?";
}

std::string format_number(double v)
{
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double parse_number(std::string_view s)
{
  while (!s.empty() && s.front() == ' ')
  {
    s.remove_prefix(1);
  }
  while (!s.empty() && s.back() == ' ')
  {
    s.remove_suffix(1);
  }
  // Accept fractions such as 1/128.
  if (const auto slash = s.find('/'); slash != std::string_view::npos)
  {
    const double num = parse_number(s.substr(0, slash));
    const double den = parse_number(s.substr(slash + 1));
    if (den == 0.0)
    {
      throw Error("division by zero in number '" + std::string(s) + "'");
    }
    return num / den;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
  {
    throw Error("malformed number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view s)
{
  std::vector<double> out;
  if (s.empty())
  {
    return out;
  }
  std::size_t pos = 0;
  while (true)
  {
    const auto comma = s.find(',', pos);
    out.push_back(parse_number(s.substr(pos, comma - pos)));
    if (comma == std::string_view::npos)
    {
      break;
    }
    pos = comma + 1;
  }
  return out;
}

double squared_norm(const Point &x, int dim)
{
  double s = 0.0;
  for (int d = 0; d < dim; d++)
  {
    s += x[d] * x[d];
  }
  return s;
}

double segment_distance(const Point &x, const Point &a, const Point &b, int dim)
{
  double ab2 = 0.0, t = 0.0;
  for (int d = 0; d < dim; d++)
  {
    ab2 += (b[d] - a[d]) * (b[d] - a[d]);
    t += (x[d] - a[d]) * (b[d] - a[d]);
  }
  t = ab2 > 0.0 ? std::clamp(t / ab2, 0.0, 1.0) : 0.0;
  double s = 0.0;
  for (int d = 0; d < dim; d++)
  {
    const double q = a[d] + t * (b[d] - a[d]) - x[d];
    s += q * q;
  }
  return std::sqrt(s);
}

std::vector<Point> spike_directions(int dim, int count)
{
  std::vector<Point> dirs;
  for (int k = 0; k < count; k++)
  {
    if (dim == 2)
    {
      const double theta = 2.0 * std::numbers::pi * k / count;
      dirs.push_back({std::cos(theta), std::sin(theta), 0.0});
    }
    else
    {
      // Fibonacci lattice on the sphere.
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = k * std::numbers::pi * (3.0 - std::sqrt(5.0));
      dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  }
  return dirs;
}

void require_resolved(double width, double h, const char *what)
{
  if (width < 2.0 * h * (1.0 - 1e-12))
  {
    throw Error(std::string("feature under-resolved: ") + what + " width " + format_number(width) +
                " is below 2h = " + format_number(2.0 * h));
  }
}

}  // namespace

double parse_real(std::string_view text)
{
  return parse_number(text);
}

std::string DomainSpec::label() const
{
  return name.empty() ? to_string(*this) : name;
}

DomainSpec interval_spec(double length)
{
  DomainSpec s;
  s.kind = DomainKind::Interval;
  s.dim = 1;
  s.a = length;
  return s;
}

DomainSpec rectangle_spec(int dim, double a, double b)
{
  DomainSpec s;
  s.kind = DomainKind::Rectangle;
  s.dim = dim;
  s.a = a;
  s.b = b;
  return s;
}

DomainSpec ball_spec(int dim, double radius)
{
  DomainSpec s;
  s.kind = DomainKind::Ball;
  s.dim = dim;
  s.a = radius;
  return s;
}

DomainSpec annulus_spec(int dim, double inner, double outer)
{
  DomainSpec s;
  s.kind = DomainKind::Annulus;
  s.dim = dim;
  s.a = inner;
  s.b = outer;
  return s;
}

DomainSpec punctured_ball_spec(int dim, double radius, std::vector<Point> punctures)
{
  DomainSpec s;
  s.kind = DomainKind::PuncturedBall;
  s.dim = dim;
  s.a = radius;
  s.punctures = std::move(punctures);
  return s;
}

DomainSpec spiked_ball_spec(int dim, double radius, int count, double width, double length)
{
  DomainSpec s;
  s.kind = DomainKind::SpikedBall;
  s.dim = dim;
  s.a = radius;
  s.spike_count = count;
  s.spike_width = width;
  s.spike_length = length;
  return s;
}

DomainSpec dumbbell_spec(int dim, double neck_width)
{
  DomainSpec s;
  s.kind = DomainKind::Dumbbell;
  s.dim = dim;
  s.a = neck_width;
  return s;
}

DomainSpec parse_domain_spec(std::string_view text, int dim)
{
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  auto numbers = [&](std::size_t lo, std::size_t hi) {
    auto v = parse_list(args);
    if (v.size() < lo || v.size() > hi)
    {
      throw Error("wrong number of parameters in domain '" + std::string(text) + "'");
    }
    return v;
  };
  if (kind == "interval")
  {
    return interval_spec(numbers(1, 1)[0]);
  }
  if (kind == "rectangle")
  {
    const auto v = numbers(2, 2);
    return rectangle_spec(dim, v[0], v[1]);
  }
  if (kind == "ball")
  {
    return ball_spec(dim, numbers(1, 1)[0]);
  }
  if (kind == "annulus")
  {
    const auto v = numbers(2, 2);
    return annulus_spec(dim, v[0], v[1]);
  }
  if (kind == "spiked-ball")
  {
    const auto v = numbers(3, 4);
    const double length = v.size() == 4 ? v[3] : 0.6 * v[0];
    return spiked_ball_spec(dim, v[0], static_cast<int>(v[1]), v[2], length);
  }
  if (kind == "dumbbell")
  {
    return dumbbell_spec(dim, numbers(1, 1)[0]);
  }
  if (kind == "punctured-ball")
  {
    // R;x,y[,z];x,y[,z]...
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true)
    {
      const auto semi = args.find(';', pos);
      parts.push_back(args.substr(pos, semi - pos));
      if (semi == std::string_view::npos)
      {
        break;
      }
      pos = semi + 1;
    }
    const double radius = parse_number(parts.front());
    std::vector<Point> points;
    for (std::size_t i = 1; i < parts.size(); i++)
    {
      if (parts[i] == "center")
      {
        points.push_back({0.0, 0.0, 0.0});
        continue;
      }
      const auto v = parse_list(parts[i]);
      if (static_cast<int>(v.size()) != dim)
      {
        throw Error("puncture point must have " + std::to_string(dim) + " coordinates");
      }
      Point p = {0.0, 0.0, 0.0};
      std::copy(v.begin(), v.end(), p.begin());
      points.push_back(p);
    }
    if (points.empty())
    {
      throw Error("punctured-ball needs at least one puncture point");
    }
    return punctured_ball_spec(dim, radius, std::move(points));
  }
  throw Error("unknown domain kind '" + std::string(kind) + "'");
}

std::string to_string(const DomainSpec &spec)
{
  std::string s = kind_name(spec.kind);
  s += ':';
  switch (spec.kind)
  {
    case DomainKind::Interval:
    case DomainKind::Ball:
    case DomainKind::Dumbbell:
      s += format_number(spec.a);
      break;
    case DomainKind::Rectangle:
    case DomainKind::Annulus:
      s += format_number(spec.a) + "," + format_number(spec.b);
      break;
    case DomainKind::SpikedBall:
      s += format_number(spec.a) + "," + std::to_string(spec.spike_count) + "," +
           format_number(spec.spike_width) + "," + format_number(spec.spike_length);
      break;
    case DomainKind::PuncturedBall:
      s += format_number(spec.a);
      for (const auto &p : spec.punctures)
      {
        s += ';';
        for (int d = 0; d < spec.dim; d++)
        {
          s += (d ? "," : "") + format_number(p[d]);
        }
      }
      break;
  }
  return s;
}

GridDomain generate_domain(const DomainSpec &spec, double h)
{
  const int dim = spec.dim;
  if (dim < 1 || dim > 3)
  {
    throw Error("domain dimension must be 1, 2 or 3");
  }
  if (!(h > 0.0) || !std::isfinite(h))
  {
    throw Error("resolution h must be positive");
  }
  if (spec.kind == DomainKind::Interval && dim != 1)
  {
    throw Error("interval domains are one-dimensional");
  }
  if (!(spec.a > 0.0) || !std::isfinite(spec.a))
  {
    throw Error("domain size must be positive");
  }
  // Boundary points (to within a tiny fraction of h) count as outside.
  const double tol = 1e-9 * h;

  Point half = {0.0, 0.0, 0.0};
  std::vector<std::pair<Point, Point>> slits;
  switch (spec.kind)
  {
    case DomainKind::Interval:
      half = {spec.a / 2, 0.0, 0.0};
      require_resolved(spec.a, h, "interval");
      break;
    case DomainKind::Rectangle:
      if (!(spec.b > 0.0))
      {
        throw Error("domain size must be positive");
      }
      half = {spec.a / 2, spec.b / 2, spec.b / 2};
      require_resolved(std::min(spec.a, spec.b), h, "rectangle side");
      break;
    case DomainKind::Ball:
    case DomainKind::PuncturedBall:
      half = {spec.a, spec.a, spec.a};
      break;
    case DomainKind::Annulus:
      if (!(spec.b > spec.a))
      {
        throw Error("annulus needs inner radius < outer radius");
      }
      require_resolved(spec.b - spec.a, h, "annulus gap");
      half = {spec.b, spec.b, spec.b};
      break;
    case DomainKind::SpikedBall:
    {
      if (spec.spike_count < 1)
      {
        throw Error("spiked-ball needs at least one spike");
      }
      if (!(spec.spike_length > 0.0))
      {
        throw Error("spike length must be positive");
      }
      require_resolved(spec.spike_width, h, "spike");
      half = {spec.a, spec.a, spec.a};
      const double outer = spec.a + 2.0 * h;
      const double inner = spec.a - spec.spike_length;
      for (const Point &u : spike_directions(dim, spec.spike_count))
      {
        Point p0{}, p1{};
        for (int d = 0; d < dim; d++)
        {
          p0[d] = outer * u[d];
          p1[d] = inner * u[d];
        }
        slits.emplace_back(p0, p1);
      }
      break;
    }
    case DomainKind::Dumbbell:
      if (spec.a >= 1.0)
      {
        throw Error("dumbbell neck must be narrower than the lobes");
      }
      require_resolved(spec.a, h, "dumbbell neck");
      half = {1.25, 0.5, 0.5};
      break;
  }
  if (dim > 1 && (spec.kind == DomainKind::Ball || spec.kind == DomainKind::PuncturedBall ||
                  spec.kind == DomainKind::SpikedBall))
  {
    require_resolved(2.0 * spec.a, h, "ball");
  }

  const Grid grid = Grid::centered(dim, h, half, 1);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(grid.cell_count()), 0);
  for (Index cell = 0; cell < grid.cell_count(); cell++)
  {
    const Point x = grid.center(cell);
    bool in = false;
    switch (spec.kind)
    {
      case DomainKind::Interval:
        in = std::abs(x[0]) < half[0] - tol;
        break;
      case DomainKind::Rectangle:
        in = true;
        for (int d = 0; d < dim; d++)
        {
          in = in && std::abs(x[d]) < half[d] - tol;
        }
        break;
      case DomainKind::Ball:
      case DomainKind::PuncturedBall:
        in = std::sqrt(squared_norm(x, dim)) < spec.a - tol;
        break;
      case DomainKind::Annulus:
      {
        const double r = std::sqrt(squared_norm(x, dim));
        in = r > spec.a + tol && r < spec.b - tol;
        break;
      }
      case DomainKind::SpikedBall:
      {
        in = std::sqrt(squared_norm(x, dim)) < spec.a - tol;
        for (std::size_t k = 0; in && k < slits.size(); k++)
        {
          in = segment_distance(x, slits[k].first, slits[k].second, dim) >= spec.spike_width / 2 - tol;
        }
        break;
      }
      case DomainKind::Dumbbell:
      {
        Point l = x, r = x;
        l[0] += 0.75;
        r[0] -= 0.75;
        const double lobe = 0.5 - tol;
        in = std::sqrt(squared_norm(l, dim)) < lobe || std::sqrt(squared_norm(r, dim)) < lobe;
        if (!in && std::abs(x[0]) < 0.75)
        {
          in = true;
          for (int d = 1; d < dim; d++)
          {
            in = in && std::abs(x[d]) < spec.a / 2 - tol;
          }
        }
        break;
      }
    }
    mask[cell] = in ? 1 : 0;
  }
  if (spec.kind == DomainKind::PuncturedBall)
  {
    for (const Point &p : spec.punctures)
    {
      if (std::sqrt(squared_norm(p, dim)) >= spec.a)
      {
        throw Error("puncture point lies outside the ball");
      }
      const Index cell = nearest_cell(grid, p);
      mask[cell] = 0;
    }
  }
  if (std::none_of(mask.begin(), mask.end(), [](auto v) { return v != 0; }))
  {
    throw Error("feature under-resolved: domain contains no cell centers");
  }
  return GridDomain(grid, std::move(mask), spec.label());
}

GridDomain embed(const GridDomain &domain, const Grid &frame)
{
  const Grid &g = domain.grid();
  if (frame.dim != g.dim || std::abs(frame.h - g.h) > 1e-12 * g.h)
  {
    throw Error("embedding requires equal dimension and spacing");
  }
  Coord offset = {0, 0, 0};
  for (int d = 0; d < g.dim; d++)
  {
    const double shift = (g.origin[d] - frame.origin[d]) / g.h;
    offset[d] = std::llround(shift);
    if (std::abs(shift - static_cast<double>(offset[d])) > 1e-6)
    {
      throw Error("lattices are not aligned");
    }
    if (offset[d] < 0 || offset[d] + g.size[d] > frame.size[d])
    {
      throw Error("frame does not contain the domain");
    }
  }
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(frame.cell_count()), 0);
  for (Index cell : domain.cells())
  {
    Coord c = g.coords(cell);
    for (int d = 0; d < 3; d++)
    {
      c[d] += offset[d];
    }
    mask[frame.index(c)] = 1;
  }
  return GridDomain(frame, std::move(mask), domain.label());
}

Grid common_frame(const GridDomain &a, const GridDomain &b)
{
  const Grid &ga = a.grid();
  const Grid &gb = b.grid();
  if (ga.dim != gb.dim || std::abs(ga.h - gb.h) > 1e-12 * ga.h)
  {
    throw Error("domains must share dimension and spacing");
  }
  Grid f = ga;
  for (int d = 0; d < ga.dim; d++)
  {
    const double lo = std::min(ga.origin[d], gb.origin[d]);
    const double hi = std::max(ga.origin[d] + (ga.size[d] - 1) * ga.h, gb.origin[d] + (gb.size[d] - 1) * gb.h);
    f.origin[d] = lo;
    f.size[d] = std::llround((hi - lo) / ga.h) + 1;
  }
  return f;
}

bool is_subset(const GridDomain &inner, const GridDomain &outer)
{
  const Grid frame = common_frame(inner, outer);
  const GridDomain a = embed(inner, frame);
  const GridDomain b = embed(outer, frame);
  for (Index cell : a.cells())
  {
    if (!b.contains(cell))
    {
      return false;
    }
  }
  return true;
}

std::vector<DomainSpec> adversarial_family(int dim)
{
  if (dim != 2 && dim != 3)
  {
    throw Error("the adversarial family is defined for N = 2 and N = 3");
  }
  auto named = [](DomainSpec s, const char *name) {
    s.name = name;
    return s;
  };
  std::vector<Point> four, sixteen;
  if (dim == 2)
  {
    four = {{0.5, 0.0, 0.0}, {-0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.0, -0.5, 0.0}};
    for (double x : {-0.375, -0.125, 0.125, 0.375})
    {
      for (double y : {-0.375, -0.125, 0.125, 0.375})
      {
        sixteen.push_back({x, y, 0.0});
      }
    }
  }
  else
  {
    four = {{0.25, 0.25, 0.25}, {0.25, -0.25, -0.25}, {-0.25, 0.25, -0.25}, {-0.25, -0.25, 0.25}};
    for (double x : {-0.25, 0.25})
    {
      for (double y : {-0.25, 0.25})
      {
        for (double z : {-0.375, -0.125, 0.125, 0.375})
        {
          sixteen.push_back({x, y, z});
        }
      }
    }
  }
  return {
      named(ball_spec(dim, 1.0), "ball"),
      named(rectangle_spec(dim, 2.0, 2.0), "square"),
      named(rectangle_spec(dim, 2.0, 1.0), "rect-2:1"),
      named(rectangle_spec(dim, 10.0, 0.5), "rect-20:1"),
      named(annulus_spec(dim, 0.5, 1.0), "annulus"),
      named(dumbbell_spec(dim, 0.25), "dumbbell"),
      named(spiked_ball_spec(dim, 1.0, 8, 0.125, 0.6), "spiked-8"),
      named(punctured_ball_spec(dim, 1.0, {{0.0, 0.0, 0.0}}), "punctured-1"),
      named(punctured_ball_spec(dim, 1.0, four), "punctured-4"),
      named(punctured_ball_spec(dim, 1.0, sixteen), "punctured-16"),
  };
}

std::vector<DomainSpec> thin_rectangle_family()
{
  std::vector<DomainSpec> out;
  for (int aspect : {1, 2, 5, 10, 20})
  {
    DomainSpec s = rectangle_spec(2, 0.5 * aspect, 0.5);
    s.name = "rect-" + std::to_string(aspect) + ":1";
    out.push_back(s);
  }
  return out;
}

//
// Distance transform.
//

namespace
{

// Lower envelope of parabolas along one line (Felzenszwalb & Huttenlocher).
void envelope_1d(std::span<double> f, std::span<Index> feature, std::vector<Index> &v, std::vector<double> &z,
                 std::vector<double> &out, std::vector<Index> &out_feature)
{
  const auto n = static_cast<Index>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  out.assign(static_cast<std::size_t>(n), inf);
  out_feature.assign(static_cast<std::size_t>(n), -1);
  // Skip leading sources at infinity.
  Index first = 0;
  while (first < n && !std::isfinite(f[first]))
  {
    first++;
  }
  if (first == n)
  {
    return;
  }
  Index k = 0;
  v[0] = first;
  z[0] = -inf;
  z[1] = inf;
  for (Index q = first + 1; q < n; q++)
  {
    if (!std::isfinite(f[q]))
    {
      continue;
    }
    double s = 0.0;
    while (true)
    {
      const Index p = v[k];
      s = ((f[q] + static_cast<double>(q * q)) - (f[p] + static_cast<double>(p * p))) / (2.0 * static_cast<double>(q - p));
      if (s <= z[k] && k > 0)
      {
        k--;
        continue;
      }
      break;
    }
    if (s <= z[k])
    {
      // k == 0 and the new parabola dominates everywhere.
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    k++;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  for (Index q = 0; q < n; q++)
  {
    while (z[k + 1] < static_cast<double>(q))
    {
      k++;
    }
    const Index p = v[k];
    out[q] = static_cast<double>((q - p) * (q - p)) + f[p];
    out_feature[q] = feature[p];
  }
}

}  // namespace

DistanceMap distance_transform(const Grid &grid, std::span<const std::uint8_t> mask)
{
  const Index total = grid.cell_count();
  DistanceMap dm;
  dm.sqdist.assign(static_cast<std::size_t>(total), std::numeric_limits<double>::infinity());
  dm.nearest.assign(static_cast<std::size_t>(total), -1);
  for (Index cell = 0; cell < total; cell++)
  {
    if (!mask[cell])
    {
      dm.sqdist[cell] = 0.0;
      dm.nearest[cell] = cell;
    }
  }
  std::vector<double> f, out, z;
  std::vector<Index> feat, out_feat, v;
  for (int axis = 0; axis < grid.dim; axis++)
  {
    const Index n = grid.size[axis];
    const Index s = grid.stride(axis);
    f.resize(static_cast<std::size_t>(n));
    feat.resize(static_cast<std::size_t>(n));
    for (Index cell = 0; cell < total; cell++)
    {
      // Visit each line once, starting at its first cell.
      if (grid.coords(cell)[axis] != 0)
      {
        continue;
      }
      for (Index i = 0; i < n; i++)
      {
        f[i] = dm.sqdist[cell + i * s];
        feat[i] = dm.nearest[cell + i * s];
      }
      envelope_1d(f, feat, v, z, out, out_feat);
      for (Index i = 0; i < n; i++)
      {
        dm.sqdist[cell + i * s] = out[i];
        dm.nearest[cell + i * s] = out_feat[i];
      }
    }
  }
  return dm;
}

InradiusResult inradius_detail(const GridDomain &domain)
{
  const DistanceMap dm = distance_transform(domain.grid(), domain.mask());
  Index best = domain.cells().front();
  for (Index cell : domain.cells())
  {
    if (dm.sqdist[cell] > dm.sqdist[best])
    {
      best = cell;
    }
  }
  InradiusResult r;
  r.radius = std::sqrt(dm.sqdist[best]) * domain.h();
  r.center = domain.grid().center(best);
  r.error_bound = domain.h() * std::sqrt(static_cast<double>(domain.dim()));
  return r;
}

double inradius(const GridDomain &domain)
{
  return inradius_detail(domain).radius;
}

std::vector<Index> discrete_boundary(const GridDomain &domain)
{
  const Grid &g = domain.grid();
  std::vector<std::uint8_t> flag(static_cast<std::size_t>(g.cell_count()), 0);
  for (Index cell : domain.cells())
  {
    for (int d = 0; d < g.dim; d++)
    {
      const Index s = g.stride(d);
      for (Index nb : {cell - s, cell + s})
      {
        if (!domain.contains(nb))
        {
          flag[nb] = 1;
        }
      }
    }
  }
  std::vector<Index> out;
  for (Index cell = 0; cell < g.cell_count(); cell++)
  {
    if (flag[cell])
    {
      out.push_back(cell);
    }
  }
  return out;
}

int boundary_components(const GridDomain &domain)
{
  const Grid &g = domain.grid();
  std::vector<std::uint8_t> complement(static_cast<std::size_t>(g.cell_count()));
  for (Index cell = 0; cell < g.cell_count(); cell++)
  {
    complement[cell] = domain.contains(cell) ? 0 : 1;
  }
  // Each complement component in the box is adjacent to the domain, since
  // components are only separated from each other by domain cells.
  return count_components(g, complement);
}

int covering_subset_budget(int dim)
{
  return static_cast<int>(std::ceil(std::pow(2.0 * std::sqrt(static_cast<double>(dim)) + 4.0, dim) - 1e-9));
}

Covering hayman_cover(const GridDomain &domain)
{
  const Grid &g = domain.grid();
  const int dim = g.dim;
  const DistanceMap dm = distance_transform(g, domain.mask());
  double max_sq = 0.0;
  for (Index cell : domain.cells())
  {
    max_sq = std::max(max_sq, dm.sqdist[cell]);
  }
  const double rho = std::sqrt(max_sq) * g.h;

  Covering cover;
  cover.radius = rho * (1.0 + std::sqrt(static_cast<double>(dim)));
  const double r_cells = cover.radius / g.h;
  const auto reach = static_cast<Index>(std::ceil(r_cells));

  std::vector<std::uint8_t> covered(static_cast<std::size_t>(g.cell_count()), 0);
  for (Index cell : domain.cells())
  {
    if (covered[cell])
    {
      continue;
    }
    const Index c = dm.nearest[cell];
    cover.balls.push_back({g.center(c), cover.radius});
    const Coord cc = g.coords(c);
    Coord lo{}, hi{};
    for (int d = 0; d < 3; d++)
    {
      lo[d] = d < dim ? std::max<Index>(0, cc[d] - reach) : 0;
      hi[d] = d < dim ? std::min<Index>(g.size[d] - 1, cc[d] + reach) : 0;
    }
    for (Index k = lo[2]; k <= hi[2]; k++)
    {
      for (Index j = lo[1]; j <= hi[1]; j++)
      {
        for (Index i = lo[0]; i <= hi[0]; i++)
        {
          const double di = static_cast<double>(i - cc[0]);
          const double dj = static_cast<double>(j - cc[1]);
          const double dk = static_cast<double>(k - cc[2]);
          if (di * di + dj * dj + dk * dk < r_cells * r_cells)
          {
            covered[g.index({i, j, k})] = 1;
          }
        }
      }
    }
  }

  // First-fit partition into families of pairwise disjoint balls.
  std::vector<std::vector<std::size_t>> subsets;
  cover.subset.resize(cover.balls.size());
  for (std::size_t b = 0; b < cover.balls.size(); b++)
  {
    std::size_t s = 0;
    for (; s < subsets.size(); s++)
    {
      const bool disjoint = std::all_of(subsets[s].begin(), subsets[s].end(), [&](std::size_t o) {
        return distance(cover.balls[b].center, cover.balls[o].center, dim) >= 2.0 * cover.radius;
      });
      if (disjoint)
      {
        break;
      }
    }
    if (s == subsets.size())
    {
      subsets.emplace_back();
    }
    subsets[s].push_back(b);
    cover.subset[b] = static_cast<int>(s);
  }
  cover.subset_count = static_cast<int>(subsets.size());
  if (cover.subset_count > covering_subset_budget(dim))
  {
    throw Error("covering needs " + std::to_string(cover.subset_count) + " subsets, above the budget of " +
                std::to_string(covering_subset_budget(dim)));
  }
  return cover;
}

CoveringCheck check_covering(const GridDomain &domain, const Covering &covering)
{
  const Grid &g = domain.grid();
  const int dim = g.dim;
  CoveringCheck check;

  std::vector<std::uint8_t> on_boundary(static_cast<std::size_t>(g.cell_count()), 0);
  for (Index cell : discrete_boundary(domain))
  {
    on_boundary[cell] = 1;
  }
  check.centers_on_boundary = true;
  for (const Ball &b : covering.balls)
  {
    const Index c = nearest_cell(g, b.center);
    if (c < 0 || !on_boundary[c] || distance(g.center(c), b.center, dim) > 1e-9 * g.h)
    {
      check.centers_on_boundary = false;
    }
  }

  std::vector<std::uint8_t> covered(static_cast<std::size_t>(g.cell_count()), 0);
  for (const Ball &b : covering.balls)
  {
    Coord lo{}, hi{};
    for (int d = 0; d < 3; d++)
    {
      if (d >= dim)
      {
        continue;
      }
      const double first = std::floor((b.center[d] - b.radius - g.origin[d]) / g.h);
      const double last = std::ceil((b.center[d] + b.radius - g.origin[d]) / g.h);
      lo[d] = std::max<Index>(0, static_cast<Index>(first));
      hi[d] = std::min<Index>(g.size[d] - 1, static_cast<Index>(last));
    }
    for (Index k = lo[2]; k <= hi[2]; k++)
    {
      for (Index j = lo[1]; j <= hi[1]; j++)
      {
        for (Index i = lo[0]; i <= hi[0]; i++)
        {
          const Index cell = g.index({i, j, k});
          if (distance(g.center(cell), b.center, dim) < b.radius)
          {
            covered[cell] = 1;
          }
        }
      }
    }
  }
  for (Index cell : domain.cells())
  {
    if (!covered[cell])
    {
      check.uncovered++;
    }
  }
  check.covers_all = check.uncovered == 0;

  check.subsets_disjoint = true;
  for (std::size_t i = 0; i < covering.balls.size(); i++)
  {
    for (std::size_t j = i + 1; j < covering.balls.size(); j++)
    {
      if (covering.subset[i] == covering.subset[j] &&
          distance(covering.balls[i].center, covering.balls[j].center, dim) <
              covering.balls[i].radius + covering.balls[j].radius)
      {
        check.subsets_disjoint = false;
      }
    }
  }
  check.within_budget = covering.subset_count <= covering_subset_budget(dim);
  return check;
}

}  // namespace plap
