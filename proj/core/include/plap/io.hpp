// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_IO_HPP
#define PLAP_IO_HPP

#include <filesystem>
#include <iosfwd>

#include "plap/field.hpp"

namespace plap
{

// Mask files (text):
//
//   plap-mask 1
//   dim N
//   h <spacing>
//   size n1 [n2 [n3]]
//   origin x1 [x2 [x3]]     optional; defaults to a cell center at 0
//   label <text>            optional
//   <rows of 0/1, x fastest; one row per y, slices of rows per z>
//
// Field files start with `plap-field 1`, repeat the mask header and rows, then
// a `values` line followed by one value per lattice cell in the same order.
// Numbers are written with 17 significant digits, so reading back what was
// written reproduces every double exactly.

void write_mask(std::ostream &out, const GridDomain &domain);
GridDomain read_mask(std::istream &in);

void write_field(std::ostream &out, const ScalarField &field);
ScalarField read_field(std::istream &in);

void save_mask(const std::filesystem::path &path, const GridDomain &domain);
GridDomain load_mask(const std::filesystem::path &path);
void save_field(const std::filesystem::path &path, const ScalarField &field);
ScalarField load_field(const std::filesystem::path &path);

}  // namespace plap

#endif  // PLAP_IO_HPP
