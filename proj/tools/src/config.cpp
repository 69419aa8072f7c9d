// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <istream>
#include <set>

#include "plap/error.hpp"

namespace plap::cli
{

namespace
{

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true)
  {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos)
    {
      return out;
    }
    start = pos + 1;
  }
}

const std::set<std::string> &known_keys()
{
  static const std::set<std::string> keys = {
      "kind",          "dim",          "domains",        "p",       "h",           "mode",
      "punctures",     "spikes",       "radius",         "workers", "max_iterations", "gradient_tol",
      "stagnation_tol", "eps",         "backtrack",      "initial_step", "hessian_floor", "seed",
      "random_init",   "continuation", "backend"};
  return keys;
}

double real_value(const SweepSection &s, const std::string &key)
{
  try
  {
    return parse_real(s.get(key));
  }
  catch (const Error &e)
  {
    throw UsageError("[" + s.name + "] " + key + ": " + e.what());
  }
}

bool bool_value(const SweepSection &s, const std::string &key)
{
  const std::string v = s.get(key);
  if (v == "true" || v == "1" || v == "yes")
  {
    return true;
  }
  if (v == "false" || v == "0" || v == "no")
  {
    return false;
  }
  throw UsageError("[" + s.name + "] " + key + ": expected true or false, got '" + v + "'");
}

}  // namespace

const std::string &SweepSection::get(const std::string &key) const
{
  const auto it = values.find(key);
  if (it == values.end())
  {
    throw UsageError("[" + name + "] missing key '" + key + "'");
  }
  return it->second;
}

std::string SweepSection::get_or(const std::string &key, const std::string &fallback) const
{
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::vector<SweepSection> parse_sweep_config(std::istream &in)
{
  std::vector<SweepSection> out;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw))
  {
    line_no++;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty())
    {
      continue;
    }
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[')
    {
      if (line.back() != ']' || line.size() < 3)
      {
        throw UsageError(where + "malformed section header");
      }
      out.push_back({trim(line.substr(1, line.size() - 2)), {}, line_no});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw UsageError(where + "expected key = value");
    }
    if (out.empty())
    {
      throw UsageError(where + "key outside of a [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!known_keys().count(key))
    {
      throw UsageError(where + "unknown key '" + key + "'");
    }
    if (!out.back().values.emplace(key, trim(line.substr(eq + 1))).second)
    {
      throw UsageError(where + "duplicate key '" + key + "'");
    }
  }
  if (out.empty())
  {
    throw UsageError("sweep file has no sections");
  }
  return out;
}

std::vector<double> parse_real_list(const std::string &text)
{
  std::vector<double> out;
  for (const std::string &tok : split(text, ','))
  {
    try
    {
      out.push_back(parse_real(tok));
    }
    catch (const Error &e)
    {
      throw UsageError(e.what());
    }
  }
  return out;
}

std::vector<DomainSpec> parse_domain_list(const std::string &text, int dim)
{
  try
  {
    if (text == "adversarial")
    {
      return adversarial_family(dim);
    }
    if (text == "thin-rectangles")
    {
      if (dim != 2)
      {
        throw UsageError("thin-rectangles is a planar family");
      }
      return thin_rectangle_family();
    }
    std::vector<DomainSpec> out;
    for (const std::string &tok : split(text, '|'))
    {
      out.push_back(parse_domain_spec(tok, dim));
    }
    return out;
  }
  catch (const Error &e)
  {
    throw UsageError(e.what());
  }
}

void apply_solver_overrides(const SweepSection &s, SolverConfig &cfg)
{
  if (s.values.count("max_iterations"))
  {
    cfg.max_iterations = static_cast<int>(real_value(s, "max_iterations"));
  }
  if (s.values.count("gradient_tol"))
  {
    cfg.gradient_tol = real_value(s, "gradient_tol");
  }
  if (s.values.count("stagnation_tol"))
  {
    cfg.stagnation_tol = real_value(s, "stagnation_tol");
  }
  if (s.values.count("eps"))
  {
    cfg.eps = real_value(s, "eps");
  }
  if (s.values.count("backtrack"))
  {
    cfg.backtrack = real_value(s, "backtrack");
  }
  if (s.values.count("initial_step"))
  {
    cfg.initial_step = real_value(s, "initial_step");
  }
  if (s.values.count("hessian_floor"))
  {
    cfg.hessian_floor = real_value(s, "hessian_floor");
  }
  if (s.values.count("seed"))
  {
    cfg.seed = static_cast<std::uint64_t>(real_value(s, "seed"));
  }
  if (s.values.count("random_init"))
  {
    cfg.random_init = bool_value(s, "random_init");
  }
  if (s.values.count("continuation"))
  {
    cfg.continuation = bool_value(s, "continuation");
  }
  if (s.values.count("backend"))
  {
    try
    {
      cfg.backend = parse_backend(s.get("backend"));
    }
    catch (const Error &e)
    {
      throw UsageError(e.what());
    }
  }
  try
  {
    cfg.validate();
  }
  catch (const Error &e)
  {
    throw UsageError("[" + s.name + "] " + e.what());
  }
}

}  // namespace plap::cli
