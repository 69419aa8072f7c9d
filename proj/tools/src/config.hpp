// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_TOOLS_CONFIG_HPP
#define PLAP_TOOLS_CONFIG_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "plap/eigensolver.hpp"
#include "plap/geometry.hpp"

namespace plap::cli
{

// Thrown for malformed command lines and configuration files (exit code 2).
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// One `[name]` block of a sweep file:
//
//   # comment
//   [planar]
//   kind = bounds            bounds | constant | hayman
//   dim = 2
//   domains = adversarial    a family name, or domain specs separated by "|"
//   p = 2
//   h = 1/64, 1/128
//   mode = free-boundary     constant only: free-boundary | connected-boundary
//   punctures = 0,0          hayman only; points separated by ';'
//   spikes = 32, 0.8         hayman only; count, depth
//   max_iterations = 4000    solver overrides use the SolverConfig field names
struct SweepSection
{
  std::string name;
  std::map<std::string, std::string> values;
  int line = 0;

  const std::string &get(const std::string &key) const;
  std::string get_or(const std::string &key, const std::string &fallback) const;
};

std::vector<SweepSection> parse_sweep_config(std::istream &in);

// Comma-separated reals; fractions allowed.
std::vector<double> parse_real_list(const std::string &text);

// Domain list: family names or specs separated by '|'.
std::vector<DomainSpec> parse_domain_list(const std::string &text, int dim);

// Applies SolverConfig overrides from a section (unknown keys are ignored by
// this call; the caller validates key names).
void apply_solver_overrides(const SweepSection &section, SolverConfig &config);

}  // namespace plap::cli

#endif  // PLAP_TOOLS_CONFIG_HPP
