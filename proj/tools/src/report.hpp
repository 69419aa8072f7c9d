// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_TOOLS_REPORT_HPP
#define PLAP_TOOLS_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "plap/bounds.hpp"

namespace plap::cli
{

using nlohmann::json;

json eigen_record(const std::string &label, int dim, double p, double h, const EigenResult &r);
json capacity_record(int dim, double p, double h, const std::string &descriptor, double outer_radius,
                     const CapacityResult &r);
json bound_record(const BoundReport &r);
json trend_record(const TrendReport &t);
json hayman_record(const HaymanReport &r);

std::string bound_csv_header();
std::string bound_csv_row(const BoundReport &r);
// Two columns h,value, one row per level.
std::string trend_csv(const TrendReport &t);
std::string hayman_csv(const HaymanReport &r);

// Writes `text` to dir/name, creating dir. Returns the path.
std::filesystem::path write_text(const std::filesystem::path &dir, const std::string &name, const std::string &text);

// Filesystem-safe version of a label.
std::string slug(const std::string &label);

}  // namespace plap::cli

#endif  // PLAP_TOOLS_REPORT_HPP
