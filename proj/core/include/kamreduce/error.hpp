#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ClassViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Parameter window violated; what() names the inequality.
class ScheduleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class AliasingError : public Error {
 public:
  using Error::Error;
};

class SmallDivisorError : public Error {
 public:
  SmallDivisorError(std::vector<int> k, std::string family, double value,
                    double threshold);
  const std::vector<int>& k() const { return k_; }
  const std::string& family() const { return family_; }
  double value() const { return value_; }
  double threshold() const { return threshold_; }

 private:
  std::vector<int> k_;
  std::string family_;
  double value_;
  double threshold_;
};

}  // namespace kam
