#pragma once

#include <stdexcept>
#include <string>

namespace sbt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConstraintError : public Error {
 public:
  using Error::Error;
};

// A convergence guard tripped: the integral being asked for does not exist.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}
  double previous() const { return previous_; }
  double last() const { return last_; }

 private:
  double previous_;
  double last_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbt
