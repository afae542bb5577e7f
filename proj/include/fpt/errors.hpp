#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fpt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

struct RateUndefined : Error {
  using Error::Error;
};

struct CapExceeded : Error {
  using Error::Error;
};

struct DegenerateNormalizer : Error {
  using Error::Error;
};

struct UninformativeGrid : Error {
  using Error::Error;
};

struct PathCountOverflow : Error {
  using Error::Error;
};

}  // namespace fpt
