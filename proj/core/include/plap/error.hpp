// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_ERROR_HPP
#define PLAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace plap
{

// All library failures are reported through this type; the message carries the
// reason in plain words (e.g. "feature under-resolved").
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace plap

#endif  // PLAP_ERROR_HPP
