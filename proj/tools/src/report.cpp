// SPDX-License-Identifier: Apache-2.0

#include "report.hpp"

#include <cstdio>
#include <fstream>

#include "plap/error.hpp"

namespace plap::cli
{

namespace
{

std::string num(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json check_record(const BoundCheck &c)
{
  if (!c.applicable)
  {
    return nullptr;
  }
  return {{"pass", c.pass}, {"margin", c.margin}, {"value", c.value}};
}

std::string check_cells(const BoundCheck &c)
{
  if (!c.applicable)
  {
    return ",,";
  }
  return std::string(c.pass ? "1" : "0") + "," + num(c.margin) + "," + num(c.value);
}

std::string csv_quote(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
  {
    return s;
  }
  std::string out = "\"";
  for (char c : s)
  {
    out += c;
    if (c == '"')
    {
      out += '"';
    }
  }
  return out + "\"";
}

}  // namespace

json eigen_record(const std::string &label, int dim, double p, double h, const EigenResult &r)
{
  return {{"label", label},        {"N", dim},
          {"p", p},                {"h", h},
          {"lambda", r.lambda},    {"iterations", r.iterations},
          {"converged", r.converged}, {"gradient_norm", r.gradient_norm}};
}

json capacity_record(int dim, double p, double h, const std::string &descriptor, double outer_radius,
                     const CapacityResult &r)
{
  return {{"N", dim},
          {"p", p},
          {"h", h},
          {"K_descriptor", descriptor},
          {"outer_radius", outer_radius},
          {"capacity", r.value},
          {"converged", r.converged}};
}

json bound_record(const BoundReport &r)
{
  json j = {{"label", r.label},
            {"N", r.dim},
            {"p", r.p},
            {"h", r.h},
            {"rho", r.rho},
            {"lambda", r.lambda},
            {"product", r.product},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"gradient_norm", r.gradient_norm},
            {"boundary_components", r.boundary_components},
            {"upper_bound", check_record(r.upper)},
            {"faber_krahn", check_record(r.faber_krahn)},
            {"planar", check_record(r.planar)},
            {"notes", r.notes}};
  j["free_boundary_product"] = r.free_boundary_product ? json(*r.free_boundary_product) : json(nullptr);
  j["connected_boundary_product"] =
      r.connected_boundary_product ? json(*r.connected_boundary_product) : json(nullptr);
  return j;
}

json trend_record(const TrendReport &t)
{
  json triples = json::array();
  for (std::size_t i = 0; i < t.triple_trend.size(); i++)
  {
    triples.push_back(
        {{"trend", to_string(t.triple_trend[i])}, {"rate", t.triple_rate[i]}, {"limit", t.triple_limit[i]}});
  }
  return {{"h", t.h}, {"value", t.value}, {"triples", triples}, {"trend", to_string(t.trend)}, {"stable", t.stable}};
}

json hayman_record(const HaymanReport &r)
{
  json levels = json::array();
  for (const HaymanLevel &l : r.levels)
  {
    levels.push_back({{"h", l.h},
                      {"base_lambda", l.base_lambda},
                      {"featured_lambda", l.featured_lambda},
                      {"gap", l.gap},
                      {"featured_rho", l.featured_rho},
                      {"product", l.product},
                      {"converged", l.converged}});
  }
  return {{"base", r.base_label},
          {"featured", r.featured_label},
          {"p", r.p},
          {"levels", levels},
          {"gap_trend", trend_record(r.gap_trend)}};
}

std::string bound_csv_header()
{
  return "label,N,p,h,rho,lambda,product,converged,iterations,gradient_norm,boundary_components,"
         "upper_pass,upper_margin,upper_value,fk_pass,fk_margin,fk_value,planar_pass,planar_margin,planar_value,"
         "notes\n";
}

std::string bound_csv_row(const BoundReport &r)
{
  std::string notes;
  for (const auto &n : r.notes)
  {
    notes += (notes.empty() ? "" : "; ") + n;
  }
  return csv_quote(r.label) + "," + std::to_string(r.dim) + "," + num(r.p) + "," + num(r.h) + "," + num(r.rho) +
         "," + num(r.lambda) + "," + num(r.product) + "," + (r.converged ? "1" : "0") + "," +
         std::to_string(r.iterations) + "," + num(r.gradient_norm) + "," + std::to_string(r.boundary_components) +
         "," + check_cells(r.upper) + "," + check_cells(r.faber_krahn) + "," + check_cells(r.planar) + "," +
         csv_quote(notes) + "\n";
}

std::string trend_csv(const TrendReport &t)
{
  std::string out = "h,value\n";
  for (std::size_t i = 0; i < t.h.size(); i++)
  {
    out += num(t.h[i]) + "," + num(t.value[i]) + "\n";
  }
  return out;
}

std::string hayman_csv(const HaymanReport &r)
{
  std::string out = "h,base_lambda,featured_lambda,gap,featured_rho,product,converged\n";
  for (const HaymanLevel &l : r.levels)
  {
    out += num(l.h) + "," + num(l.base_lambda) + "," + num(l.featured_lambda) + "," + num(l.gap) + "," +
           num(l.featured_rho) + "," + num(l.product) + "," + (l.converged ? "1" : "0") + "\n";
  }
  return out;
}

std::filesystem::path write_text(const std::filesystem::path &dir, const std::string &name, const std::string &text)
{
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path);
  out << text;
  if (!out)
  {
    throw Error("cannot write '" + path.string() + "'");
  }
  return path;
}

std::string slug(const std::string &label)
{
  std::string out;
  for (char c : label)
  {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                      c == '.' || c == '_';
    out += keep ? c : '_';
  }
  return out.empty() ? "unnamed" : out;
}

}  // namespace plap::cli
