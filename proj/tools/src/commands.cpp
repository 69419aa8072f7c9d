// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "config.hpp"
#include "plap/error.hpp"
#include "plap/io.hpp"
#include "report.hpp"

namespace plap::cli
{

namespace
{

struct Common
{
  std::string out_dir;
  std::string formats = "json,csv";
  int workers = 1;
};

struct SolverFlags
{
  int max_iterations = SolverConfig{}.max_iterations;
  double gradient_tol = SolverConfig{}.gradient_tol;
  double stagnation_tol = SolverConfig{}.stagnation_tol;
  double eps = SolverConfig{}.eps;
  std::uint64_t seed = SolverConfig{}.seed;
  bool random_init = false;
  bool no_continuation = false;
  std::string backend = "auto";
  std::string method = "auto";

  SolverConfig config() const
  {
    SolverConfig c;
    c.max_iterations = max_iterations;
    c.gradient_tol = gradient_tol;
    c.stagnation_tol = stagnation_tol;
    c.eps = eps;
    c.seed = seed;
    c.random_init = random_init;
    c.continuation = !no_continuation;
    c.backend = parse_backend(backend);
    if (method == "descent")
    {
      c.method = EigenMethod::Descent;
    }
    else if (method == "inverse-power")
    {
      c.method = EigenMethod::InversePower;
    }
    else if (method != "auto")
    {
      throw UsageError("unknown method '" + method + "'");
    }
    c.validate();
    return c;
  }
};

void add_common(CLI::App *app, Common &c)
{
  app->add_option("--out", c.out_dir, std::string("Output directory (default: $") + kOutputDirVariable + " or ./plap-out)");
  app->add_option("--format", c.formats, "Comma-separated output formats: json, csv");
  app->add_option("--workers", c.workers, "Worker threads for independent tasks")->check(CLI::PositiveNumber);
}

void add_solver(CLI::App *app, SolverFlags &s)
{
  app->add_option("--max-iterations", s.max_iterations, "Iteration cap per solve")->check(CLI::PositiveNumber);
  app->add_option("--gradient-tol", s.gradient_tol, "Relative gradient-norm tolerance");
  app->add_option("--stagnation-tol", s.stagnation_tol, "Relative quotient stagnation tolerance");
  app->add_option("--eps", s.eps, "Regularization of the degenerate weight");
  app->add_option("--seed", s.seed, "Seed for random initialization");
  app->add_flag("--random-init", s.random_init, "Start from a random positive field");
  app->add_flag("--no-continuation", s.no_continuation, "Disable warm starts in p");
  app->add_option("--backend", s.backend, "Linear solver: auto, direct, multigrid");
  app->add_option("--method", s.method, "Eigen method: auto, descent, inverse-power");
}

std::filesystem::path output_dir(const Common &c)
{
  if (!c.out_dir.empty())
  {
    return c.out_dir;
  }
  if (const char *env = std::getenv(kOutputDirVariable); env && *env)
  {
    return env;
  }
  return "plap-out";
}

bool wants(const Common &c, const std::string &format)
{
  std::string list = "," + c.formats + ",";
  list.erase(std::remove(list.begin(), list.end(), ' '), list.end());
  return list.find("," + format + ",") != std::string::npos;
}

void check_formats(const Common &c)
{
  std::stringstream s(c.formats);
  for (std::string f; std::getline(s, f, ',');)
  {
    f.erase(std::remove(f.begin(), f.end(), ' '), f.end());
    if (f != "json" && f != "csv")
    {
      throw UsageError("unknown output format '" + f + "'");
    }
  }
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)> &fn)
{
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++)
    {
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < workers && static_cast<std::size_t>(k) < n; k++)
  {
    pool.emplace_back(work);
  }
  work();
  for (auto &t : pool)
  {
    t.join();
  }
}

std::vector<double> exponents(const std::string &text)
{
  auto ps = parse_real_list(text);
  for (double p : ps)
  {
    if (!(p >= kMinExponent && p <= kMaxExponent))
    {
      throw UsageError("p must lie in [1.1, 16]");
    }
  }
  return ps;
}

std::vector<double> spacings(const std::string &text)
{
  auto hs = parse_real_list(text);
  for (double h : hs)
  {
    if (!(h > 0.0))
    {
      throw UsageError("resolutions must be positive");
    }
  }
  return hs;
}

std::string fmt(double v, int digits = 6)
{
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// Domain given either as a spec plus resolutions or as a mask file.
struct DomainSource
{
  std::string spec;
  std::string mask;
  int dim = 2;
  std::string h;

  void add(CLI::App *app)
  {
    auto *d = app->add_option("--domain", spec, "Domain spec, e.g. ball:1, rectangle:2,1, spiked-ball:1,8,0.125,0.6");
    auto *m = app->add_option("--mask", mask, "PLAP-MASK file")->check(CLI::ExistingFile);
    d->excludes(m);
    app->add_option("--dim", dim, "Space dimension for --domain")->check(CLI::Range(1, 3));
    app->add_option("--h", h, "Grid spacings for --domain, e.g. 1/64,1/128");
  }

  std::vector<std::shared_ptr<const GridDomain>> domains() const
  {
    if (!mask.empty())
    {
      try
      {
        return {std::make_shared<const GridDomain>(load_mask(mask))};
      }
      catch (const Error &e)
      {
        throw UsageError(std::string("mask file: ") + e.what());
      }
    }
    if (spec.empty())
    {
      throw UsageError("give --domain or --mask");
    }
    if (h.empty())
    {
      throw UsageError("--domain needs --h");
    }
    DomainSpec s;
    try
    {
      s = parse_domain_spec(spec, dim);
    }
    catch (const Error &e)
    {
      throw UsageError(e.what());
    }
    std::vector<std::shared_ptr<const GridDomain>> out;
    for (double hv : spacings(h))
    {
      out.push_back(std::make_shared<const GridDomain>(generate_domain(s, hv)));
    }
    return out;
  }
};

//
// solve
//

struct SolveArgs
{
  Common common;
  SolverFlags solver;
  DomainSource source;
  std::string p;
  bool save_field = false;
  bool save_mask = false;
};

int cmd_solve(const SolveArgs &a, std::ostream &out, std::ostream &err)
{
  check_formats(a.common);
  const SolverConfig cfg = a.solver.config();
  const auto ps = exponents(a.p);
  const auto domains = a.source.domains();
  struct Task
  {
    std::shared_ptr<const GridDomain> domain;
    double p;
  };
  std::vector<Task> tasks;
  for (const auto &d : domains)
  {
    for (double p : ps)
    {
      tasks.push_back({d, p});
    }
  }
  std::vector<std::optional<EigenResult>> results(tasks.size());
  std::vector<std::string> failures(tasks.size());
  parallel_for(tasks.size(), a.common.workers, [&](std::size_t i) {
    try
    {
      results[i] = solve_principal(tasks[i].domain, tasks[i].p, cfg);
    }
    catch (const std::exception &e)
    {
      failures[i] = e.what();
    }
  });

  const auto dir = output_dir(a.common);
  json records = json::array();
  std::string csv = "label,N,p,h,lambda,iterations,converged,gradient_norm,positive\n";
  for (std::size_t i = 0; i < tasks.size(); i++)
  {
    const GridDomain &d = *tasks[i].domain;
    const std::string label = d.label().empty() ? a.source.spec : d.label();
    if (!results[i])
    {
      err << label << " p=" << fmt(tasks[i].p) << " h=" << fmt(d.h()) << " failed: " << failures[i] << "\n";
      continue;
    }
    const EigenResult &r = *results[i];
    const bool positive = positivity_check(r);
    json rec = eigen_record(label, d.dim(), tasks[i].p, d.h(), r);
    rec["positive"] = positive;
    records.push_back(rec);
    csv += label + "," + std::to_string(d.dim()) + "," + fmt(tasks[i].p, 10) + "," + fmt(d.h(), 10) + "," +
           fmt(r.lambda, 12) + "," + std::to_string(r.iterations) + "," + (r.converged ? "1" : "0") + "," +
           fmt(r.gradient_norm, 4) + "," + (positive ? "1" : "0") + "\n";
    out << label << " N=" << d.dim() << " p=" << fmt(tasks[i].p) << " h=" << fmt(d.h()) << " lambda=" << fmt(r.lambda, 8)
        << " iterations=" << r.iterations << " converged=" << (r.converged ? "yes" : "no") << "\n";
    const std::string stem = slug(label) + "_p" + fmt(tasks[i].p) + "_n" + std::to_string(d.grid().size[0]);
    if (a.save_field)
    {
      std::filesystem::create_directories(dir);
      save_field(dir / (stem + ".field"), r.eigenfunction);
    }
    if (a.save_mask)
    {
      std::filesystem::create_directories(dir);
      save_mask(dir / (stem + ".mask"), d);
    }
  }
  if (wants(a.common, "json"))
  {
    write_text(dir, "solve.json", records.dump(2) + "\n");
  }
  if (wants(a.common, "csv"))
  {
    write_text(dir, "solve.csv", csv);
  }
  return kExitOk;
}

//
// capacity
//

struct CapacityArgs
{
  Common common;
  SolverFlags solver;
  std::string inner;
  std::string probe;
  double outer_radius = 1.0;
  int dim = 2;
  std::string p;
  std::string h;
};

Point parse_point(const std::string &text, int dim)
{
  const auto v = parse_real_list(text);
  if (static_cast<int>(v.size()) != dim)
  {
    throw UsageError("point '" + text + "' needs " + std::to_string(dim) + " coordinates");
  }
  Point x{0.0, 0.0, 0.0};
  std::copy(v.begin(), v.end(), x.begin());
  return x;
}

std::vector<std::uint8_t> inner_set(const std::string &text, const Grid &grid)
{
  const auto colon = text.find(':');
  if (colon == std::string::npos)
  {
    throw UsageError("inner set must look like ball:r, point:x,y or segment:x1,y1;x2,y2");
  }
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "ball")
  {
    return closed_ball_set(grid, {{0.0, 0.0, 0.0}, parse_real(rest)});
  }
  if (kind == "point")
  {
    return point_set(grid, parse_point(rest, grid.dim));
  }
  if (kind == "segment")
  {
    const auto semi = rest.find(';');
    if (semi == std::string::npos)
    {
      throw UsageError("segment needs two endpoints separated by ';'");
    }
    return segment_set(grid, parse_point(rest.substr(0, semi), grid.dim), parse_point(rest.substr(semi + 1), grid.dim));
  }
  throw UsageError("unknown inner set '" + kind + "'");
}

int cmd_capacity(const CapacityArgs &a, std::ostream &out, std::ostream &err)
{
  check_formats(a.common);
  const SolverConfig cfg = a.solver.config();
  const auto ps = exponents(a.p);
  const auto hs = spacings(a.h);
  const auto dir = output_dir(a.common);
  if (!a.probe.empty())
  {
    if (a.probe != "point" && a.probe != "segment")
    {
      throw UsageError("--probe takes point or segment");
    }
    json records = json::array();
    for (double p : ps)
    {
      const TrendReport t =
          point_capacity_probe(p, a.dim, hs, a.probe == "point" ? ProbeSet::Point : ProbeSet::Segment, cfg);
      out << a.probe << " probe N=" << a.dim << " p=" << fmt(p) << " trend=" << to_string(t.trend)
          << " stable=" << (t.stable ? "yes" : "no") << "\n";
      json rec = trend_record(t);
      rec["N"] = a.dim;
      rec["p"] = p;
      rec["set"] = a.probe;
      records.push_back(rec);
      if (wants(a.common, "csv"))
      {
        write_text(dir, "probe_" + a.probe + "_N" + std::to_string(a.dim) + "_p" + fmt(p) + ".csv", trend_csv(t));
      }
    }
    if (wants(a.common, "json"))
    {
      write_text(dir, "probe.json", records.dump(2) + "\n");
    }
    return kExitOk;
  }
  if (a.inner.empty())
  {
    throw UsageError("give --inner or --probe");
  }
  json records = json::array();
  std::string csv = "N,p,h,K_descriptor,outer_radius,capacity,converged\n";
  const Ball outer{{0.0, 0.0, 0.0}, a.outer_radius};
  for (double h : hs)
  {
    for (double p : ps)
    {
      CondenserProblem prob;
      prob.grid = condenser_grid(a.dim, h, outer);
      prob.outer = outer;
      prob.p = p;
      prob.descriptor = a.inner;
      try
      {
        prob.inner = inner_set(a.inner, prob.grid);
        const CapacityResult r = capacity(prob, cfg);
        records.push_back(capacity_record(a.dim, p, h, a.inner, a.outer_radius, r));
        csv += std::to_string(a.dim) + "," + fmt(p, 10) + "," + fmt(h, 10) + "," + a.inner + "," +
               fmt(a.outer_radius, 10) + "," + fmt(r.value, 12) + "," + (r.converged ? "1" : "0") + "\n";
        out << a.inner << " in B(" << fmt(a.outer_radius) << ") N=" << a.dim << " p=" << fmt(p) << " h=" << fmt(h)
            << " capacity=" << fmt(r.value, 8) << " converged=" << (r.converged ? "yes" : "no") << "\n";
      }
      catch (const UsageError &)
      {
        throw;
      }
      catch (const std::exception &e)
      {
        err << a.inner << " p=" << fmt(p) << " h=" << fmt(h) << " failed: " << e.what() << "\n";
      }
    }
  }
  if (wants(a.common, "json"))
  {
    write_text(dir, "capacity.json", records.dump(2) + "\n");
  }
  if (wants(a.common, "csv"))
  {
    write_text(dir, "capacity.csv", csv);
  }
  return kExitOk;
}

//
// inradius, cover
//

struct GeometryArgs
{
  Common common;
  DomainSource source;
};

int cmd_inradius(const GeometryArgs &a, std::ostream &out)
{
  check_formats(a.common);
  json records = json::array();
  for (const auto &d : a.source.domains())
  {
    const InradiusResult r = inradius_detail(*d);
    out << (d->label().empty() ? "domain" : d->label()) << " h=" << fmt(d->h()) << " inradius=" << fmt(r.radius, 8)
        << " +/- " << fmt(r.error_bound, 3) << " center=(" << fmt(r.center[0]) << "," << fmt(r.center[1]) << ","
        << fmt(r.center[2]) << ")\n";
    records.push_back({{"label", d->label()},
                       {"N", d->dim()},
                       {"h", d->h()},
                       {"inradius", r.radius},
                       {"error_bound", r.error_bound},
                       {"center", {r.center[0], r.center[1], r.center[2]}}});
  }
  if (wants(a.common, "json"))
  {
    write_text(output_dir(a.common), "inradius.json", records.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_cover(const GeometryArgs &a, std::ostream &out, std::ostream &err)
{
  check_formats(a.common);
  json records = json::array();
  bool ok = true;
  for (const auto &d : a.source.domains())
  {
    const std::string label = d->label().empty() ? "domain" : d->label();
    try
    {
      const Covering c = hayman_cover(*d);
      const CoveringCheck chk = check_covering(*d, c);
      ok = ok && chk.ok();
      out << label << " h=" << fmt(d->h()) << " balls=" << c.balls.size() << " radius=" << fmt(c.radius)
          << " subsets=" << c.subset_count << " budget=" << covering_subset_budget(d->dim())
          << " check=" << (chk.ok() ? "pass" : "FAIL") << "\n";
      json balls = json::array();
      for (std::size_t i = 0; i < c.balls.size(); i++)
      {
        const Ball &b = c.balls[i];
        balls.push_back({{"center", {b.center[0], b.center[1], b.center[2]}}, {"subset", c.subset[i]}});
      }
      records.push_back({{"label", label},
                         {"N", d->dim()},
                         {"h", d->h()},
                         {"radius", c.radius},
                         {"subset_count", c.subset_count},
                         {"budget", covering_subset_budget(d->dim())},
                         {"covers_all", chk.covers_all},
                         {"centers_on_boundary", chk.centers_on_boundary},
                         {"subsets_disjoint", chk.subsets_disjoint},
                         {"within_budget", chk.within_budget},
                         {"balls", balls}});
    }
    catch (const Error &e)
    {
      ok = false;
      err << label << " covering failed: " << e.what() << "\n";
    }
  }
  if (wants(a.common, "json"))
  {
    write_text(output_dir(a.common), "cover.json", records.dump(2) + "\n");
  }
  return ok ? kExitOk : kExitCheckFailed;
}

//
// verify, hayman, sweep
//

void print_bound(std::ostream &out, const BoundReport &r)
{
  out << r.label << " N=" << r.dim << " p=" << fmt(r.p) << " h=" << fmt(r.h);
  if (!r.converged)
  {
    out << " not converged";
    for (const auto &n : r.notes)
    {
      out << " (" << n << ")";
    }
    out << "\n";
    return;
  }
  out << " lambda=" << fmt(r.lambda, 7) << " rho=" << fmt(r.rho, 5) << " product=" << fmt(r.product, 5)
      << " upper=" << (r.upper.pass ? "pass" : "FAIL") << "(" << fmt(r.upper.margin, 3) << ")"
      << " faber-krahn=" << (r.faber_krahn.pass ? "pass" : "FAIL") << "(" << fmt(r.faber_krahn.margin, 3) << ")";
  if (r.planar.applicable)
  {
    out << " planar=" << (r.planar.pass ? "pass" : "FAIL") << "(" << fmt(r.planar.margin, 3) << ")";
  }
  out << "\n";
}

bool emit_bounds(const Common &c, const std::string &stem, const std::vector<BoundReport> &reports, std::ostream &out)
{
  bool ok = true;
  json records = json::array();
  std::string csv = bound_csv_header();
  for (const BoundReport &r : reports)
  {
    print_bound(out, r);
    ok = ok && r.signs_ok();
    records.push_back(bound_record(r));
    csv += bound_csv_row(r);
  }
  const auto dir = output_dir(c);
  if (wants(c, "json"))
  {
    write_text(dir, stem + ".json", records.dump(2) + "\n");
  }
  if (wants(c, "csv"))
  {
    write_text(dir, stem + ".csv", csv);
  }
  return ok;
}

struct VerifyArgs
{
  Common common;
  SolverFlags solver;
  std::string sweep = "adversarial";
  int dim = 2;
  std::string p;
  std::string h;
};

int cmd_verify(const VerifyArgs &a, std::ostream &out)
{
  check_formats(a.common);
  const SolverConfig cfg = a.solver.config();
  const auto family = parse_domain_list(a.sweep, a.dim);
  std::vector<SweepTask> tasks;
  for (double h : spacings(a.h))
  {
    for (double p : exponents(a.p))
    {
      for (const DomainSpec &s : family)
      {
        tasks.push_back({s, p, h});
      }
    }
  }
  const auto reports = run_sweep(tasks, a.common.workers, cfg);
  return emit_bounds(a.common, "verify", reports, out) ? kExitOk : kExitCheckFailed;
}

struct HaymanArgs
{
  Common common;
  SolverFlags solver;
  int dim = 2;
  double radius = 1.0;
  std::string p;
  std::string h;
  std::string punctures;
  std::string spikes;
};

HaymanFeatures features_from(const std::string &punctures, const std::string &spikes, int dim)
{
  HaymanFeatures f;
  if (punctures.empty() == spikes.empty())
  {
    throw UsageError("give exactly one of punctures or spikes");
  }
  if (!punctures.empty())
  {
    std::stringstream s(punctures);
    for (std::string pt; std::getline(s, pt, ';');)
    {
      f.punctures.push_back(parse_point(pt, dim));
    }
  }
  else
  {
    const auto v = parse_real_list(spikes);
    if (v.size() != 2 || v[0] < 1.0)
    {
      throw UsageError("spikes takes count,depth");
    }
    f.spike_count = static_cast<int>(v[0]);
    f.spike_length = v[1];
  }
  return f;
}

void emit_hayman(const Common &c, const std::string &stem, const HaymanReport &r, std::ostream &out)
{
  for (const HaymanLevel &l : r.levels)
  {
    out << r.featured_label << " p=" << fmt(r.p) << " h=" << fmt(l.h) << " gap=" << fmt(l.gap, 6)
        << " rho=" << fmt(l.featured_rho, 4) << " product=" << fmt(l.product, 5) << "\n";
  }
  out << r.featured_label << " p=" << fmt(r.p) << " gap trend=" << to_string(r.gap_trend.trend)
      << " stable=" << (r.gap_trend.stable ? "yes" : "no") << "\n";
  const auto dir = output_dir(c);
  if (wants(c, "json"))
  {
    write_text(dir, stem + ".json", hayman_record(r).dump(2) + "\n");
  }
  if (wants(c, "csv"))
  {
    write_text(dir, stem + ".csv", hayman_csv(r));
  }
}

int cmd_hayman(const HaymanArgs &a, std::ostream &out)
{
  check_formats(a.common);
  const SolverConfig cfg = a.solver.config();
  const HaymanFeatures f = features_from(a.punctures, a.spikes, a.dim);
  for (double p : exponents(a.p))
  {
    const HaymanReport r = hayman_experiment(a.dim, a.radius, f, p, spacings(a.h), cfg);
    emit_hayman(a.common, "hayman_N" + std::to_string(a.dim) + "_p" + fmt(p), r, out);
  }
  return kExitOk;
}

struct SweepArgs
{
  Common common;
  std::string config;
};

int cmd_sweep(const SweepArgs &a, std::ostream &out, std::ostream &err)
{
  check_formats(a.common);
  std::ifstream in(a.config);
  if (!in)
  {
    throw UsageError("cannot open sweep file '" + a.config + "'");
  }
  const auto sections = parse_sweep_config(in);
  bool ok = true;
  for (const SweepSection &s : sections)
  {
    SolverConfig cfg;
    apply_solver_overrides(s, cfg);
    Common c = a.common;
    if (s.values.count("workers"))
    {
      c.workers = std::max(1, static_cast<int>(parse_real_list(s.get("workers")).at(0)));
    }
    const int dim = static_cast<int>(parse_real_list(s.get_or("dim", "2")).at(0));
    const std::string kind = s.get_or("kind", "bounds");
    const auto ps = exponents(s.get("p"));
    const auto hs = spacings(s.get("h"));
    const std::string stem = slug(s.name);
    out << "[" << s.name << "]\n";
    if (kind == "bounds" || kind == "constant")
    {
      const auto family = parse_domain_list(s.get("domains"), dim);
      if (kind == "bounds")
      {
        std::vector<SweepTask> tasks;
        for (double h : hs)
        {
          for (double p : ps)
          {
            for (const DomainSpec &d : family)
            {
              tasks.push_back({d, p, h});
            }
          }
        }
        ok = emit_bounds(c, stem, run_sweep(tasks, c.workers, cfg), out) && ok;
        continue;
      }
      const std::string mode = s.get_or("mode", "free-boundary");
      if (mode != "free-boundary" && mode != "connected-boundary")
      {
        throw UsageError("[" + s.name + "] mode must be free-boundary or connected-boundary");
      }
      std::vector<BoundReport> all;
      for (double h : hs)
      {
        for (double p : ps)
        {
          try
          {
            ConstantEstimate est =
                estimate_constant(family, p, h, mode == "free-boundary" ? ConstantMode::FreeBoundary
                                                                        : ConstantMode::ConnectedBoundary,
                                  c.workers, cfg);
            out << "minimum lambda*rho^p N=" << dim << " p=" << fmt(p) << " h=" << fmt(h) << ": "
                << fmt(est.minimum, 6) << " (" << est.argmin << ")\n";
            for (const auto &x : est.excluded)
            {
              out << "  excluded " << x << "\n";
            }
            all.insert(all.end(), est.table.begin(), est.table.end());
          }
          catch (const Error &e)
          {
            err << "[" << s.name << "] p=" << fmt(p) << " h=" << fmt(h) << ": " << e.what() << "\n";
          }
        }
      }
      ok = emit_bounds(c, stem, all, out) && ok;
    }
    else if (kind == "hayman")
    {
      const HaymanFeatures f = features_from(s.get_or("punctures", ""), s.get_or("spikes", ""), dim);
      const double radius = parse_real_list(s.get_or("radius", "1")).at(0);
      for (double p : ps)
      {
        emit_hayman(c, stem + "_p" + fmt(p), hayman_experiment(dim, radius, f, p, hs, cfg), out);
      }
    }
    else
    {
      throw UsageError("[" + s.name + "] unknown kind '" + kind + "'");
    }
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Principal frequency, inradius and capacity laboratory for the p-Laplacian"};
  app.name("plap");
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  SolveArgs solve;
  auto *s = app.add_subcommand("solve", "Principal eigenvalue of generated or loaded domains");
  solve.source.add(s);
  s->add_option("--p", solve.p, "Exponents, e.g. 1.5,2,3")->required();
  s->add_flag("--save-field", solve.save_field, "Write eigenfunctions as PLAP-FIELD files");
  s->add_flag("--save-mask", solve.save_mask, "Write domains as PLAP-MASK files");
  add_common(s, solve.common);
  add_solver(s, solve.solver);

  CapacityArgs cap;
  auto *c = app.add_subcommand("capacity", "Condenser capacity in a centered ball, or refinement probes");
  c->add_option("--inner", cap.inner, "Inner set: ball:r, point:x,y or segment:x1,y1;x2,y2");
  c->add_option("--probe", cap.probe, "Refinement probe: point or segment");
  c->add_option("--outer-radius", cap.outer_radius, "Radius of the outer ball")->check(CLI::PositiveNumber);
  c->add_option("--dim", cap.dim, "Space dimension")->check(CLI::Range(2, 3));
  c->add_option("--p", cap.p, "Exponents")->required();
  c->add_option("--h", cap.h, "Grid spacings")->required();
  add_common(c, cap.common);
  add_solver(c, cap.solver);

  GeometryArgs inr;
  auto *i = app.add_subcommand("inradius", "Discrete inradius from the exact distance transform");
  inr.source.add(i);
  add_common(i, inr.common);

  GeometryArgs cov;
  auto *v = app.add_subcommand("cover", "Covering by boundary-centered balls in disjoint subsets");
  cov.source.add(v);
  add_common(v, cov.common);

  VerifyArgs ver;
  auto *f = app.add_subcommand("verify", "Eigenvalue bounds over a domain family");
  f->add_option("--sweep", ver.sweep, "adversarial, thin-rectangles, or specs separated by '|'");
  f->add_option("--dim", ver.dim, "Space dimension")->check(CLI::Range(2, 3));
  f->add_option("--p", ver.p, "Exponents")->required();
  f->add_option("--h", ver.h, "Grid spacings")->required();
  add_common(f, ver.common);
  add_solver(f, ver.solver);

  HaymanArgs hay;
  auto *y = app.add_subcommand("hayman", "Eigenvalue gap of punctured or slit balls under refinement");
  y->add_option("--dim", hay.dim, "Space dimension")->check(CLI::Range(2, 3));
  y->add_option("--radius", hay.radius, "Ball radius")->check(CLI::PositiveNumber);
  y->add_option("--p", hay.p, "Exponents")->required();
  y->add_option("--h", hay.h, "At least three grid spacings")->required();
  y->add_option("--punctures", hay.punctures, "Removed points, e.g. 0,0;0.5,0");
  y->add_option("--spikes", hay.spikes, "Radial slits of width 2h: count,depth");
  add_common(y, hay.common);
  add_solver(y, hay.solver);

  SweepArgs sw;
  auto *w = app.add_subcommand("sweep", "Run the sections of a sweep file");
  w->add_option("--config", sw.config, "Sweep file")->required();
  add_common(w, sw.common);

  try
  {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    if (s->parsed())
    {
      return cmd_solve(solve, out, err);
    }
    if (c->parsed())
    {
      return cmd_capacity(cap, out, err);
    }
    if (i->parsed())
    {
      return cmd_inradius(inr, out);
    }
    if (v->parsed())
    {
      return cmd_cover(cov, out, err);
    }
    if (f->parsed())
    {
      return cmd_verify(ver, out);
    }
    if (y->parsed())
    {
      return cmd_hayman(hay, out);
    }
    return cmd_sweep(sw, out, err);
  }
  catch (const UsageError &e)
  {
    err << "plap: " << e.what() << "\n";
    return kExitUsage;
  }
  catch (const Error &e)
  {
    err << "plap: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace plap::cli
