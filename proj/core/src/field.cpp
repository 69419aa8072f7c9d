// SPDX-License-Identifier: Apache-2.0

#include "plap/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plap/error.hpp"

namespace plap
{

ScalarField::ScalarField(std::shared_ptr<const GridDomain> domain, std::vector<double> values)
  : domain_(std::move(domain)), values_(std::move(values))
{
  if (!domain_)
  {
    throw Error("field requires a domain");
  }
  if (static_cast<Index>(values_.size()) != domain_->grid().cell_count())
  {
    throw Error("field size does not match grid");
  }
  for (std::size_t i = 0; i < values_.size(); i++)
  {
    if (!std::isfinite(values_[i]))
    {
      throw Error("field value is not finite");
    }
    if (values_[i] != 0.0 && !domain_->contains(static_cast<Index>(i)))
    {
      throw Error("field is nonzero outside the domain");
    }
  }
}

ScalarField ScalarField::zeros(std::shared_ptr<const GridDomain> domain)
{
  const auto n = static_cast<std::size_t>(domain->grid().cell_count());
  return ScalarField(std::move(domain), std::vector<double>(n, 0.0));
}

ScalarField ScalarField::from_function(std::shared_ptr<const GridDomain> domain,
                                       const std::function<double(const Point &)> &f)
{
  std::vector<double> v(static_cast<std::size_t>(domain->grid().cell_count()), 0.0);
  for (Index cell : domain->cells())
  {
    v[cell] = f(domain->grid().center(cell));
  }
  return ScalarField(std::move(domain), std::move(v));
}

ScalarField ScalarField::from_interior(std::shared_ptr<const GridDomain> domain, std::span<const double> interior)
{
  if (static_cast<Index>(interior.size()) != domain->interior_count())
  {
    throw Error("interior value count does not match domain");
  }
  std::vector<double> v(static_cast<std::size_t>(domain->grid().cell_count()), 0.0);
  for (std::size_t i = 0; i < interior.size(); i++)
  {
    v[domain->cells()[i]] = interior[i];
  }
  return ScalarField(std::move(domain), std::move(v));
}

std::vector<double> ScalarField::interior() const
{
  std::vector<double> out;
  out.reserve(domain_->cells().size());
  for (Index cell : domain_->cells())
  {
    out.push_back(values_[cell]);
  }
  return out;
}

ScalarField ScalarField::scaled(double c) const
{
  std::vector<double> v = values_;
  for (double &x : v)
  {
    x *= c;
  }
  return ScalarField(domain_, std::move(v));
}

bool ScalarField::is_zero() const
{
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

double ScalarField::min_value() const
{
  double m = std::numeric_limits<double>::infinity();
  for (Index cell : domain_->cells())
  {
    m = std::min(m, values_[cell]);
  }
  return m;
}

double ScalarField::max_value() const
{
  double m = -std::numeric_limits<double>::infinity();
  for (Index cell : domain_->cells())
  {
    m = std::max(m, values_[cell]);
  }
  return m;
}

double VectorField::norm(Index cell) const
{
  const auto &g = values[static_cast<std::size_t>(cell)];
  return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
}

}  // namespace plap
