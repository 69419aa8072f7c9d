// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_FIELD_HPP
#define PLAP_FIELD_HPP

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "plap/grid_domain.hpp"

namespace plap
{

// Real values on every cell of a domain's lattice, zero outside the domain.
class ScalarField
{
public:
  // Throws if a value outside the domain is nonzero or any value is not finite.
  ScalarField(std::shared_ptr<const GridDomain> domain, std::vector<double> values);

  static ScalarField zeros(std::shared_ptr<const GridDomain> domain);
  // Samples f at the centers of domain cells.
  static ScalarField from_function(std::shared_ptr<const GridDomain> domain,
                                   const std::function<double(const Point &)> &f);
  // Values listed in the order of domain->cells().
  static ScalarField from_interior(std::shared_ptr<const GridDomain> domain, std::span<const double> interior);

  const GridDomain &domain() const { return *domain_; }
  const std::shared_ptr<const GridDomain> &domain_ptr() const { return domain_; }
  const Grid &grid() const { return domain_->grid(); }
  std::span<const double> values() const { return values_; }
  double operator[](Index cell) const { return values_[static_cast<std::size_t>(cell)]; }

  // Values on domain cells, in the order of domain().cells().
  std::vector<double> interior() const;
  ScalarField scaled(double c) const;
  bool is_zero() const;
  double min_value() const;
  double max_value() const;

private:
  std::shared_ptr<const GridDomain> domain_;
  std::vector<double> values_;
};

// Per-cell forward-difference gradient; components beyond dim are zero.
struct VectorField
{
  Grid grid;
  std::vector<std::array<double, 3>> values;

  double norm(Index cell) const;
};

}  // namespace plap

#endif  // PLAP_FIELD_HPP
