#pragma once

#include <stdexcept>
#include <string>

namespace entropy_lab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverlapError : public Error {
 public:
  using Error::Error;
};

class MassError : public Error {
 public:
  MassError(double total, const std::string& what) : Error(what), total_(total) {}
  double total() const noexcept { return total_; }

 private:
  double total_;
};

class WidthError : public Error {
 public:
  using Error::Error;
};

class ScaleError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (t < 0, alpha <= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Sequence index n outside a family's supported range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class NonNormalizedError : public Error {
 public:
  NonNormalizedError(double mass, const std::string& what) : Error(what), mass_(mass) {}
  double mass() const noexcept { return mass_; }

 private:
  double mass_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input: JSON documents, selector strings.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace entropy_lab
