// SPDX-License-Identifier: Apache-2.0

#include "plap/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "plap/error.hpp"

namespace plap
{

namespace
{

std::string format_exact(double v)
{
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

double parse_exact(const std::string &tok)
{
  double v = 0.0;
  const char *end = tok.data() + tok.size();
  const auto r = std::from_chars(tok.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end)
  {
    throw Error("malformed number '" + tok + "'");
  }
  return v;
}

Index parse_count(const std::string &tok)
{
  Index v = 0;
  const char *end = tok.data() + tok.size();
  const auto r = std::from_chars(tok.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || v < 1)
  {
    throw Error("malformed size '" + tok + "'");
  }
  return v;
}

// Next line that is not blank; false at end of input.
bool next_line(std::istream &in, std::string &line)
{
  while (std::getline(in, line))
  {
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") != std::string::npos)
    {
      return true;
    }
  }
  return false;
}

std::vector<std::string> words(const std::string &line)
{
  std::istringstream s(line);
  std::vector<std::string> out;
  for (std::string w; s >> w;)
  {
    out.push_back(w);
  }
  return out;
}

void write_header(std::ostream &out, const char *magic, const GridDomain &domain)
{
  const Grid &g = domain.grid();
  out << magic << " 1\n";
  out << "dim " << g.dim << "\n";
  out << "h " << format_exact(g.h) << "\n";
  out << "size";
  for (int d = 0; d < g.dim; d++)
  {
    out << ' ' << g.size[d];
  }
  out << "\norigin";
  for (int d = 0; d < g.dim; d++)
  {
    out << ' ' << format_exact(g.origin[d]);
  }
  out << "\n";
  if (!domain.label().empty())
  {
    out << "label " << domain.label() << "\n";
  }
  std::string row(static_cast<std::size_t>(g.size[0]), '0');
  for (Index rowstart = 0; rowstart < g.cell_count(); rowstart += g.size[0])
  {
    for (Index i = 0; i < g.size[0]; i++)
    {
      row[static_cast<std::size_t>(i)] = domain.contains(rowstart + i) ? '1' : '0';
    }
    out << row << "\n";
  }
}

GridDomain read_header(std::istream &in, const char *magic)
{
  std::string line;
  if (!next_line(in, line) || words(line) != std::vector<std::string>{magic, "1"})
  {
    throw Error(std::string("not a ") + magic + " version 1 file");
  }
  Grid g;
  bool have_dim = false, have_h = false, have_size = false, have_origin = false;
  std::string label;
  std::vector<std::uint8_t> mask;
  Index filled = 0;
  while (!have_size || filled < g.cell_count())
  {
    if (!next_line(in, line))
    {
      throw Error("truncated file");
    }
    const auto w = words(line);
    if (w[0] == "dim" && w.size() == 2)
    {
      g.dim = static_cast<int>(parse_count(w[1]));
      if (g.dim > 3)
      {
        throw Error("dimension must be 1, 2 or 3");
      }
      have_dim = true;
    }
    else if (w[0] == "h" && w.size() == 2)
    {
      g.h = parse_exact(w[1]);
      if (!(g.h > 0.0))
      {
        throw Error("spacing must be positive");
      }
      have_h = true;
    }
    else if (w[0] == "size")
    {
      if (!have_dim || w.size() != static_cast<std::size_t>(g.dim) + 1)
      {
        throw Error("size line must follow dim and list N extents");
      }
      for (int d = 0; d < g.dim; d++)
      {
        g.size[d] = parse_count(w[d + 1]);
      }
      have_size = true;
      mask.assign(static_cast<std::size_t>(g.cell_count()), 0);
    }
    else if (w[0] == "origin")
    {
      if (!have_dim || w.size() != static_cast<std::size_t>(g.dim) + 1)
      {
        throw Error("origin line must follow dim and list N coordinates");
      }
      for (int d = 0; d < g.dim; d++)
      {
        g.origin[d] = parse_exact(w[d + 1]);
      }
      have_origin = true;
    }
    else if (w[0] == "label")
    {
      const auto pos = line.find("label") + 5;
      label = line.substr(line.find_first_not_of(" \t", pos));
    }
    else if (have_size && have_h && w.size() == 1 && w[0].find_first_not_of("01") == std::string::npos)
    {
      if (static_cast<Index>(w[0].size()) != g.size[0])
      {
        throw Error("mask row has " + std::to_string(w[0].size()) + " cells, expected " + std::to_string(g.size[0]));
      }
      for (Index i = 0; i < g.size[0]; i++)
      {
        mask[static_cast<std::size_t>(filled + i)] = w[0][static_cast<std::size_t>(i)] == '1' ? 1 : 0;
      }
      filled += g.size[0];
    }
    else
    {
      throw Error("unexpected line '" + line + "'");
    }
  }
  if (!have_origin)
  {
    for (int d = 0; d < g.dim; d++)
    {
      g.origin[d] = -static_cast<double>((g.size[d] - 1) / 2) * g.h;
    }
  }
  return GridDomain(g, std::move(mask), std::move(label));
}

template <class T, class Fn>
void with_output(const std::filesystem::path &path, const T &value, Fn &&fn)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  fn(out, value);
  if (!out)
  {
    throw Error("write to '" + path.string() + "' failed");
  }
}

std::ifstream open_input(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error("cannot open '" + path.string() + "'");
  }
  return in;
}

}  // namespace

void write_mask(std::ostream &out, const GridDomain &domain)
{
  write_header(out, "plap-mask", domain);
}

GridDomain read_mask(std::istream &in)
{
  return read_header(in, "plap-mask");
}

void write_field(std::ostream &out, const ScalarField &field)
{
  write_header(out, "plap-field", field.domain());
  out << "values\n";
  const auto v = field.values();
  const Index nx = field.grid().size[0];
  for (std::size_t i = 0; i < v.size(); i++)
  {
    out << format_exact(v[i]) << ((static_cast<Index>(i + 1) % nx == 0) ? '\n' : ' ');
  }
}

ScalarField read_field(std::istream &in)
{
  auto domain = std::make_shared<const GridDomain>(read_header(in, "plap-field"));
  std::string line;
  if (!next_line(in, line) || words(line) != std::vector<std::string>{"values"})
  {
    throw Error("missing values section");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(domain->grid().cell_count()));
  for (std::string tok; in >> tok;)
  {
    values.push_back(parse_exact(tok));
  }
  if (static_cast<Index>(values.size()) != domain->grid().cell_count())
  {
    throw Error("values section has " + std::to_string(values.size()) + " entries, expected " +
                std::to_string(domain->grid().cell_count()));
  }
  return ScalarField(std::move(domain), std::move(values));
}

void save_mask(const std::filesystem::path &path, const GridDomain &domain)
{
  with_output(path, domain, [](std::ostream &o, const GridDomain &d) { write_mask(o, d); });
}

GridDomain load_mask(const std::filesystem::path &path)
{
  auto in = open_input(path);
  return read_mask(in);
}

void save_field(const std::filesystem::path &path, const ScalarField &field)
{
  with_output(path, field, [](std::ostream &o, const ScalarField &f) { write_field(o, f); });
}

ScalarField load_field(const std::filesystem::path &path)
{
  auto in = open_input(path);
  return read_field(in);
}

}  // namespace plap
