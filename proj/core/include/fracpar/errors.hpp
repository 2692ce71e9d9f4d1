#pragma once

#include <stdexcept>
#include <string>

namespace fracpar {

// Two fields or a field and an operator were built on different grids.
class GridMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A parameter is outside its documented range (bad s, non-even grid, ...).
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configuration file or override could not be parsed or validated.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solve or quadrature failed to meet its tolerance; `detail`
// carries the achieved residual / tail mass when available.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double detail = 0.0)
      : std::runtime_error(what), detail_(detail) {}
  double detail() const { return detail_; }

 private:
  double detail_;
};

// An I/O operation (field file, manifest, CSV) failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracpar
